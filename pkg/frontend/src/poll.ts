import { ApiRequestError, SessionClient } from "./api.js";
import type { StepMetricsRow } from "./types.js";

export interface RunLoopCallbacks {
  onMetrics(rows: StepMetricsRow[]): void;
  onBusy?(): void;
  onError?(err: unknown): void;
}

/** Drives a session forward at a fixed cadence. At most one step command is
 * in flight at any time: a tick that arrives while the previous request is
 * still pending is skipped, so the console never piles up overlapping
 * mutations (and never trips the server's per-session busy lock itself).
 * A 409 from elsewhere (another client holding the lock) is surfaced via
 * onBusy and retried on the next tick. */
export class RunLoop {
  private timer: ReturnType<typeof setInterval> | null = null;
  private inFlight = false;

  constructor(
    private readonly client: SessionClient,
    private readonly sessionId: string,
    private readonly callbacks: RunLoopCallbacks,
    private readonly stepsPerTick = 1,
  ) {}

  get running(): boolean {
    return this.timer !== null;
  }

  get pending(): boolean {
    return this.inFlight;
  }

  start(intervalMs: number): void {
    if (this.timer !== null) return;
    this.timer = setInterval(() => void this.tick(), intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  async tick(): Promise<boolean> {
    if (this.inFlight) return false;
    this.inFlight = true;
    try {
      const res = await this.client.step(this.sessionId, this.stepsPerTick);
      this.callbacks.onMetrics(res.metrics);
      return true;
    } catch (err) {
      if (err instanceof ApiRequestError && err.busy) {
        this.callbacks.onBusy?.();
      } else {
        this.callbacks.onError?.(err);
        this.stop();
      }
      return false;
    } finally {
      this.inFlight = false;
    }
  }
}
