/**
 * Campaign polling: one loop per campaign, 1s interval, exponential
 * backoff on errors (reset on success), stops at a terminal state or
 * when disposed.  Timer and time source are injectable for tests.
 */

import { CampaignHandle, CampaignState, MascApi } from "./api.js";

export const POLL_INTERVAL_MS = 1000;
export const POLL_BACKOFF_CAP_MS = 10_000;

export const TERMINAL_STATES: readonly CampaignState[] = [
  "done",
  "failed",
  "stopped",
];

export function isTerminal(state: CampaignState): boolean {
  return TERMINAL_STATES.includes(state);
}

export interface PollerHooks {
  onUpdate: (handle: CampaignHandle) => void;
  onTerminal: (handle: CampaignHandle) => void;
  onError?: (message: string) => void;
}

type Scheduler = (fn: () => void, delayMs: number) => unknown;

export class CampaignPoller {
  private stopped = false;
  private delay = POLL_INTERVAL_MS;

  constructor(
    private readonly api: MascApi,
    private readonly campaignId: string,
    private readonly hooks: PollerHooks,
    private readonly schedule: Scheduler = (fn, ms) => setTimeout(fn, ms),
  ) {}

  start(): void {
    void this.tick();
  }

  dispose(): void {
    this.stopped = true;
  }

  private async tick(): Promise<void> {
    if (this.stopped) return;
    try {
      const handle = await this.api.campaign(this.campaignId);
      this.delay = POLL_INTERVAL_MS;
      this.hooks.onUpdate(handle);
      if (isTerminal(handle.state)) {
        this.stopped = true;
        this.hooks.onTerminal(handle);
        return;
      }
    } catch (err) {
      this.hooks.onError?.(err instanceof Error ? err.message : String(err));
      this.delay = Math.min(this.delay * 2, POLL_BACKOFF_CAP_MS);
    }
    if (!this.stopped) {
      this.schedule(() => void this.tick(), this.delay);
    }
  }
}
