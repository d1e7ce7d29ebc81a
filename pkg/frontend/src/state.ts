/** Board state: the client-side mirror of one game session.
 *
 * Mutations go through the server first; the board re-renders from the
 * acknowledged session state, so the mirror never drifts. Solve results
 * and verdicts come verbatim from server payloads — the UI never invents
 * them.
 */

import type { GameApi } from "./api";
import type { OverlayRaster, Pt, SolveResult } from "./types";

export type Mode = "free" | "handicap";

export interface Verdict {
  text: string;
  tone: "win" | "lose" | "info";
}

export interface BoardListener {
  (board: BoardState): void;
}

export class BoardState {
  sessionId: string | null = null;
  points: Pt[] = [];
  selected: number | null = null;
  mode: Mode = "free";
  lastResult: SolveResult | null = null;
  activeJobId: string | null = null;
  overlay: OverlayRaster | null = null;
  showOverlay = false;
  showRectangle = false;
  busy = false;
  error: string | null = null;

  private listeners: BoardListener[] = [];
  private generation = 0;

  constructor(private readonly api: GameApi) {}

  subscribe(fn: BoardListener): void {
    this.listeners.push(fn);
  }

  private notify(): void {
    for (const fn of this.listeners) fn(this);
  }

  async init(): Promise<void> {
    const session = await this.api.createSession();
    this.sessionId = session.id;
    this.points = session.points;
    this.notify();
  }

  private requireSession(): string {
    if (!this.sessionId) throw new Error("no session");
    return this.sessionId;
  }

  async addPoint(x: number, y: number): Promise<void> {
    const sid = this.requireSession();
    // Optimistic render, reconciled with the acknowledged state.
    this.points = [...this.points, [x, y]];
    this.staleResult();
    this.notify();
    try {
      const session = await this.api.addPoint(sid, x, y);
      this.points = session.points;
    } catch (err) {
      this.points = this.points.slice(0, -1);
      this.error = String(err);
    }
    this.notify();
  }

  async removePoint(index: number): Promise<void> {
    const sid = this.requireSession();
    if (index < 0 || index >= this.points.length) return;
    try {
      const session = await this.api.removePoint(sid, index);
      this.points = session.points;
      this.staleResult();
      if (this.selected === index) this.selected = null;
    } catch (err) {
      this.error = String(err);
    }
    this.notify();
  }

  async loadPreset(): Promise<void> {
    const preset = await this.api.preset55();
    const sid = this.requireSession();
    // Reset by replacing the session: simplest way to clear the board.
    const fresh = await this.api.createSession();
    this.sessionId = fresh.id;
    this.points = [];
    this.staleResult();
    this.notify();
    for (const [x, y] of preset.points) {
      await this.api.addPoint(this.sessionId, x, y);
    }
    const session = await this.api.getSession(this.sessionId);
    this.points = session.points;
    this.notify();
    void sid;
  }

  setMode(mode: Mode): void {
    if (this.mode !== mode) {
      this.mode = mode;
      this.staleResult();
      this.notify();
    }
  }

  private staleResult(): void {
    // Any in-flight job belongs to an older board; its result must not be
    // adopted even if its submission races with the mutation.
    this.generation += 1;
    this.lastResult = null;
    this.activeJobId = null;
  }

  get canSolve(): boolean {
    return this.points.length > 0 && !this.busy;
  }

  /** Submit a solve and adopt its result unless superseded meanwhile. */
  async solve(
    poll: (jobId: string) => Promise<SolveResult>,
    budget?: number,
  ): Promise<void> {
    if (!this.canSolve) return;
    const sid = this.requireSession();
    const gen = this.generation;
    this.busy = true;
    this.error = null;
    this.notify();
    try {
      const { job_id } = await this.api.submitSolve(sid, this.mode, budget);
      if (this.generation === gen) {
        this.activeJobId = job_id;
      }
      const result = await poll(job_id);
      if (this.generation === gen) {
        this.lastResult = result;
      }
    } catch (err) {
      this.error = String(err);
    } finally {
      this.busy = false;
      this.notify();
    }
  }

  async refreshOverlay(res = 128): Promise<void> {
    const sid = this.requireSession();
    const t = this.overlayTranslate();
    try {
      this.overlay = await this.api.overlay(sid, t, this.overlayBbox(), res);
    } catch (err) {
      this.error = String(err);
    }
    this.notify();
  }

  overlayTranslate(): Pt {
    const r = this.lastResult;
    if (r?.translate) return r.translate;
    if (r?.best_effort_translate) return r.best_effort_translate;
    return [0, 0];
  }

  overlayBbox(): [number, number, number, number] {
    if (!this.points.length) return [-3, -2, 3, 2];
    const xs = this.points.map((p) => p[0]);
    const ys = this.points.map((p) => p[1]);
    return [
      Math.min(...xs) - 2,
      Math.min(...ys) - 2,
      Math.max(...xs) + 2,
      Math.max(...ys) + 2,
    ];
  }

  /** Verdict banner text, derived only from server results. */
  verdict(): Verdict | null {
    const r = this.lastResult;
    if (!r) return null;
    if (r.error) return { text: `solver error: ${r.error}`, tone: "info" };
    if (this.mode === "handicap") {
      if (r.certificate && r.certificate.status === "covered") {
        return { text: "placement wins under handicap: no translate covers all points", tone: "win" };
      }
      if (r.coverable) {
        return { text: "engine covers all points with a translated close packing", tone: "lose" };
      }
      return { text: "handicap result undecided at this depth", tone: "info" };
    }
    if (r.status === "covered") {
      return { text: "engine covered all points", tone: "lose" };
    }
    const misses = r.uncovered?.length ?? 0;
    return {
      text: `engine could not cover all points (${misses} uncovered in best attempt)`,
      tone: "win",
    };
  }

  uncoveredIndices(): Set<number> {
    const r = this.lastResult;
    if (!r) return new Set();
    if (r.covered_flags) {
      return new Set(r.covered_flags.flatMap((ok, i) => (ok ? [] : [i])));
    }
    return new Set(r.uncovered ?? []);
  }

  disks(): Pt[] {
    return this.lastResult?.disks ?? this.lastResult?.centers ?? [];
  }
}
