/** Poll a solve job until it reaches a terminal state.
 *
 * Starts at the base interval and backs off exponentially, capped; the
 * timers are injectable for tests.
 */

import type { GameApi } from "./api";
import type { SolveResult } from "./types";

export interface PollOptions {
  intervalMs?: number;
  backoff?: number;
  maxIntervalMs?: number;
  timeoutMs?: number;
  sleep?: (ms: number) => Promise<void>;
}

const realSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export async function pollJob(
  api: GameApi,
  jobId: string,
  opts: PollOptions = {},
): Promise<SolveResult> {
  const base = opts.intervalMs ?? 250;
  const backoff = opts.backoff ?? 1.5;
  const cap = opts.maxIntervalMs ?? 4000;
  const timeout = opts.timeoutMs ?? 10 * 60 * 1000;
  const sleep = opts.sleep ?? realSleep;

  let interval = base;
  let waited = 0;
  for (;;) {
    const job = await api.pollJob(jobId);
    if (job.status === "done") {
      if (!job.result) throw new Error("done job carries no result");
      return job.result;
    }
    if (job.status === "cancelled") {
      throw new Error("job cancelled");
    }
    if (waited >= timeout) {
      throw new Error("poll timeout");
    }
    await sleep(interval);
    waited += interval;
    interval = Math.min(interval * backoff, cap);
  }
}
