/** Small document builders for board and interaction tests. */

import type {
  EdgeDoc,
  NetworkDoc,
  PlayerView,
  Pos,
  ScoreReportDoc,
  SessionStatus,
  SlotDoc,
  VerdictDoc,
} from "../src/types.js";

export function slotDoc(
  id: string,
  pos: Pos,
  gloss: string,
  examples: string[] = [],
): SlotDoc {
  return { slot_id: id, pos, gloss, examples };
}

export function networkDoc(id: string, slots: SlotDoc[], edges: EdgeDoc[]): NetworkDoc {
  return { network_id: id, slots, edges };
}

export interface ViewArgs {
  networks: NetworkDoc[];
  banks: Record<string, string[]>;
  placements?: Record<string, string>;
  level?: number;
  status?: SessionStatus;
  seed?: string;
}

export function viewDoc(args: ViewArgs): PlayerView {
  return {
    session_id: "s-test",
    player: "ana",
    lexicon_id: "lex-test",
    level: args.level ?? 1,
    status: args.status ?? "in_progress",
    puzzle: {
      puzzle_id: "p-test",
      level: args.level ?? 1,
      seed: args.seed ?? "7",
      networks: args.networks,
      banks: args.banks,
    },
    placements: args.placements ?? {},
    history: [],
  };
}

/** A level-1 shaped view: four single-POS networks, word_for edges. */
export function fourNetworkView(): PlayerView {
  return viewDoc({
    networks: [
      networkDoc(
        "n1",
        [
          slotDoc("n1-s1", "noun", "a cereal grass", ["fields of wheat"]),
          slotDoc("n1-s2", "noun", "the embryo of a cereal seed"),
        ],
        [{ kind: "word_for", source: "n1-s1", target: "n1-s2" }],
      ),
      networkDoc(
        "n2",
        [
          slotDoc("n2-s1", "verb", "move at a fast gait"),
          slotDoc("n2-s2", "verb", "go on foot", ["we walked home"]),
        ],
        [{ kind: "word_for", source: "n2-s1", target: "n2-s2" }],
      ),
      networkDoc(
        "n3",
        [
          slotDoc("n3-s1", "adj", "experiencing joy"),
          slotDoc("n3-s2", "adj", "marked by sorrow"),
        ],
        [{ kind: "word_for", source: "n3-s1", target: "n3-s2" }],
      ),
      networkDoc(
        "n4",
        [
          slotDoc("n4-s1", "adv", "at a rapid tempo"),
          slotDoc("n4-s2", "adv", "without haste"),
        ],
        [{ kind: "word_for", source: "n4-s1", target: "n4-s2" }],
      ),
    ],
    banks: {
      n1: ["wheat", "germ", "barley"],
      n2: ["trot", "walk", "swim"],
      n3: ["happy", "sad", "tall"],
      n4: ["quickly", "slowly", "loudly"],
    },
  });
}

/** A single two-slot network with a bank of three terms. */
export function smallView(
  placements: Record<string, string> = {},
  status: SessionStatus = "in_progress",
): PlayerView {
  return viewDoc({
    networks: [
      networkDoc(
        "n1",
        [
          slotDoc("s1", "noun", "a cereal grass", ["fields of wheat"]),
          slotDoc("s2", "noun", "a hardy cereal"),
        ],
        [{ kind: "kind_of", source: "s1", target: "s2" }],
      ),
    ],
    banks: { n1: ["wheat", "barley", "oats"] },
    placements,
    status,
  });
}

export function reportDoc(args: {
  verdicts: VerdictDoc[];
  level_score: number;
  stars: number;
  passed: boolean;
  status: SessionStatus;
  level?: number;
}): ScoreReportDoc {
  const slotCount = args.verdicts.length;
  const correct = args.verdicts.filter((v) => v.correct).length;
  return {
    per_network: [
      {
        network_id: "n1",
        correct_count: correct,
        slot_count: slotCount,
        score_percent: Math.floor((200 * correct + slotCount) / (2 * slotCount)),
      },
    ],
    level_score: args.level_score,
    stars: args.stars,
    passed: args.passed,
    verdicts: args.verdicts,
    status: args.status,
    level: args.level ?? 1,
  };
}
