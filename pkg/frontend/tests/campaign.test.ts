import { describe, expect, it } from "vitest";

import { CampaignHandle, MascApi } from "../src/api.js";
import {
  CampaignPoller,
  POLL_BACKOFF_CAP_MS,
  POLL_INTERVAL_MS,
  isTerminal,
} from "../src/campaign.js";

function handle(state: CampaignHandle["state"], runs = 0): CampaignHandle {
  return {
    id: "c1",
    state,
    progress: { mutants_total: 4, runs_done: runs, survivors_so_far: 0 },
    report_path: "",
    error: "",
  };
}

/** Drives the poller manually: scheduled callbacks run when we say so. */
function manualScheduler() {
  const queue: Array<{ fn: () => void; delay: number }> = [];
  return {
    schedule: (fn: () => void, delay: number) => queue.push({ fn, delay }),
    queue,
    async drain(): Promise<number | undefined> {
      const next = queue.shift();
      if (!next) return undefined;
      next.fn();
      await Promise.resolve();
      await new Promise((r) => setTimeout(r, 0));
      return next.delay;
    },
  };
}

function scriptedApi(script: Array<CampaignHandle | Error>): MascApi {
  let i = 0;
  const fetchFn = async () => {
    const step = script[Math.min(i, script.length - 1)]!;
    i += 1;
    if (step instanceof Error) {
      return new Response(JSON.stringify({ code: "boom", message: step.message }), {
        status: 500,
      });
    }
    return new Response(JSON.stringify(step), { status: 200 });
  };
  return new MascApi("", fetchFn);
}

describe("campaign poller", () => {
  it("polls until a terminal state and reports monotone progress", async () => {
    const scheduler = manualScheduler();
    const seen: CampaignHandle[] = [];
    let terminal: CampaignHandle | null = null;
    const poller = new CampaignPoller(
      scriptedApi([handle("seeding"), handle("running", 1), handle("running", 3), handle("done", 4)]),
      "c1",
      { onUpdate: (h) => seen.push(h), onTerminal: (h) => (terminal = h) },
      scheduler.schedule,
    );
    poller.start();
    await new Promise((r) => setTimeout(r, 0));
    while (await scheduler.drain() !== undefined) { /* drain */ }

    expect(terminal!.state).toBe("done");
    expect(seen.map((h) => h.state)).toEqual(["seeding", "running", "running", "done"]);
    const runs = seen.map((h) => h.progress.runs_done);
    expect([...runs].sort((a, b) => a - b)).toEqual(runs); // never decreases
  });

  it("uses a 1s interval and backs off exponentially on errors", async () => {
    const scheduler = manualScheduler();
    const errors: string[] = [];
    const poller = new CampaignPoller(
      scriptedApi([
        handle("running"),
        new Error("net down"),
        new Error("net down"),
        new Error("net down"),
        handle("running"),
        handle("done"),
      ]),
      "c1",
      { onUpdate: () => {}, onTerminal: () => {}, onError: (m) => errors.push(m) },
      scheduler.schedule,
    );
    poller.start();
    await new Promise((r) => setTimeout(r, 0));

    const delays: number[] = [];
    let delay;
    while ((delay = await scheduler.drain()) !== undefined) delays.push(delay);

    // ok -> 1s, then errors double the delay, then success resets to 1s
    expect(delays[0]).toBe(POLL_INTERVAL_MS);
    expect(delays[1]).toBe(POLL_INTERVAL_MS * 2);
    expect(delays[2]).toBe(POLL_INTERVAL_MS * 4);
    expect(delays[3]).toBe(POLL_INTERVAL_MS * 8);
    expect(delays[4]).toBe(POLL_INTERVAL_MS);
    expect(errors.length).toBe(3);
    for (const d of delays) expect(d).toBeLessThanOrEqual(POLL_BACKOFF_CAP_MS);
  });

  it("stops when disposed", async () => {
    const scheduler = manualScheduler();
    const seen: CampaignHandle[] = [];
    const poller = new CampaignPoller(
      scriptedApi([handle("running")]),
      "c1",
      { onUpdate: (h) => seen.push(h), onTerminal: () => {} },
      scheduler.schedule,
    );
    poller.start();
    await new Promise((r) => setTimeout(r, 0));
    poller.dispose();
    while (await scheduler.drain() !== undefined) { /* drain */ }
    expect(seen.length).toBe(1);
  });

  it("terminal states are exactly done/failed/stopped", () => {
    expect(isTerminal("done")).toBe(true);
    expect(isTerminal("failed")).toBe(true);
    expect(isTerminal("stopped")).toBe(true);
    expect(isTerminal("running")).toBe(false);
    expect(isTerminal("queued")).toBe(false);
    expect(isTerminal("seeding")).toBe(false);
  });
});
