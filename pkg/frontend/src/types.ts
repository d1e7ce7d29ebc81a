/** Wire types of the game service API. */

export type Pt = [number, number];

export interface SessionState {
  id: string;
  mode: "free" | "handicap";
  points: Pt[];
  history: unknown[];
}

export interface JobView {
  id: string;
  session_id: string;
  mode: "free" | "handicap";
  status: "queued" | "running" | "done" | "cancelled";
  result?: SolveResult;
}

export interface Certificate {
  status: "covered" | "not_covered" | "undecided";
  depth: number;
  margin: number;
  witness?: Pt;
}

export interface SolveResult {
  // free mode
  status?: "covered" | "unknown";
  centers?: Pt[];
  uncovered?: number[];
  // handicap mode
  coverable?: boolean;
  translate?: Pt;
  best_effort_translate?: Pt;
  certificate?: Certificate;
  // both
  covered_flags?: boolean[];
  disks?: Pt[];
  error?: string;
}

export interface OverlayRaster {
  mode: string;
  t: Pt;
  bbox: [number, number, number, number];
  res: number;
  mask: number[][];
}

export interface PresetConfig {
  d: number;
  pose: { angle: number; shift: Pt };
  points: Pt[];
}
