/**
 * Wire types for the game service API.  Field names mirror the JSON
 * documents exactly; seeds travel as decimal strings because they are
 * 64-bit values.
 */

export type Pos = "noun" | "verb" | "adj" | "adv";

export type RelationKind =
  | "kind_of"
  | "instance_of"
  | "member_of"
  | "part_of"
  | "substance_of"
  | "derivation"
  | "word_for";

export type SessionStatus = "in_progress" | "awaiting_advance" | "completed";

export interface SlotDoc {
  slot_id: string;
  pos: Pos;
  gloss: string;
  examples: string[];
}

export interface EdgeDoc {
  kind: RelationKind;
  source: string; // slot_id
  target: string; // slot_id
}

export interface NetworkDoc {
  network_id: string;
  slots: SlotDoc[];
  edges: EdgeDoc[];
}

export interface PuzzleDoc {
  puzzle_id: string;
  level: number;
  seed: string;
  networks: NetworkDoc[];
  banks: Record<string, string[]>;
}

export interface LevelResultDoc {
  level: number;
  score: number;
  stars: number;
  submitted_at: string;
}

export interface PlayerView {
  session_id: string;
  player: string;
  lexicon_id: string;
  level: number;
  status: SessionStatus;
  puzzle: PuzzleDoc;
  placements: Record<string, string>;
  history: LevelResultDoc[];
}

export interface CreatedSession {
  session_id: string;
  seed: string;
  view: PlayerView;
}

export interface SessionSummary {
  session_id: string;
  player: string;
  lexicon_id: string;
  seed: string;
  level: number;
  status: SessionStatus;
  history: LevelResultDoc[];
}

export interface NetworkScoreDoc {
  network_id: string;
  correct_count: number;
  slot_count: number;
  score_percent: number;
}

export interface VerdictDoc {
  slot_id: string;
  placed: string;
  correct: boolean;
  expressions: string[];
}

export interface ScoreReportDoc {
  per_network: NetworkScoreDoc[];
  level_score: number;
  stars: number;
  passed: boolean;
  verdicts: VerdictDoc[];
  status: SessionStatus;
  level: number;
}

export interface LeaderboardEntryDoc {
  player: string;
  total_score: number;
  levels_completed: number;
  last_submission: string;
}

export interface LeaderboardDoc {
  entries: LeaderboardEntryDoc[];
}

export interface HealthDoc {
  status: string;
  lexicon_id: string;
  levels: number;
}
