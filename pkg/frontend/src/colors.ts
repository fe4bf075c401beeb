/**
 * The fixed game palette.
 *
 * Node fills follow the part-of-speech colors: nouns are blue, verbs are
 * green, adjectives orange, adverbs red.  Every relation kind gets its
 * own edge color so link types stay distinguishable; the board renders
 * this table as an on-screen legend.
 */

import type { Pos, RelationKind } from "./types.js";

export type PosColor = "blue" | "green" | "orange" | "red";

export const POS_COLOR: Record<Pos, PosColor> = {
  noun: "blue",
  verb: "green",
  adj: "orange",
  adv: "red",
};

export function posColor(pos: Pos): PosColor {
  return POS_COLOR[pos];
}

// Render values for the four named colors.
export const POS_FILL: Record<PosColor, string> = {
  blue: "#3b82d9",
  green: "#2f9e44",
  orange: "#e8850c",
  red: "#d9363e",
};

// One stroke color per relation kind, all seven distinct.
export const EDGE_COLOR: Record<RelationKind, string> = {
  kind_of: "#7048b6", // violet
  instance_of: "#0b7285", // teal
  member_of: "#c2255c", // magenta
  part_of: "#8a5a2b", // brown
  substance_of: "#5c940d", // olive
  derivation: "#4a5a68", // slate
  word_for: "#b0880e", // gold
};

// Legend wording, matching the expression sentences the service renders.
export const EDGE_READING: Record<RelationKind, string> = {
  kind_of: "is a kind of / is one way to",
  instance_of: "is an instance of",
  member_of: "is a member of",
  part_of: "is a part of",
  substance_of: "is a substance of",
  derivation: "derives from",
  word_for: "is a word for",
};

export const RELATION_KINDS: RelationKind[] = [
  "kind_of",
  "instance_of",
  "member_of",
  "part_of",
  "substance_of",
  "derivation",
  "word_for",
];
