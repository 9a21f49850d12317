import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { createSingleFlight } from "../src/debounce.js";

describe("single-flight debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("coalesces rapid updates into one request with the newest state", async () => {
    const seen: number[] = [];
    const flight = createSingleFlight<number>(async (arg) => {
      seen.push(arg);
    }, 100);
    for (let i = 1; i <= 5; i++) flight.schedule(i);
    await vi.advanceTimersByTimeAsync(150);
    await flight.settled();
    expect(seen).toEqual([5]);
  });

  it("never runs two requests concurrently; newest queued wins afterwards", async () => {
    let inFlight = 0;
    let maxInFlight = 0;
    const seen: number[] = [];
    let release: () => void = () => undefined;
    const gate = () => new Promise<void>((resolve) => (release = resolve));
    const flight = createSingleFlight<number>(async (arg) => {
      inFlight += 1;
      maxInFlight = Math.max(maxInFlight, inFlight);
      seen.push(arg);
      await gate();
      inFlight -= 1;
    }, 50);

    flight.schedule(1);
    await vi.advanceTimersByTimeAsync(60); // request 1 launches and blocks
    flight.schedule(2);
    flight.schedule(3); // overwrites 2 while 1 is in flight
    await vi.advanceTimersByTimeAsync(60);
    expect(seen).toEqual([1]);
    release(); // finish request 1 -> queued 3 launches
    await vi.advanceTimersByTimeAsync(1);
    expect(seen).toEqual([1, 3]);
    release();
    await flight.settled();
    expect(maxInFlight).toBe(1);
  });

  it("keeps working after a failed request", async () => {
    const seen: number[] = [];
    const flight = createSingleFlight<number>(async (arg) => {
      seen.push(arg);
      if (arg === 1) throw new Error("boom");
    }, 10);
    flight.schedule(1);
    await vi.advanceTimersByTimeAsync(20);
    await flight.settled();
    flight.schedule(2);
    await vi.advanceTimersByTimeAsync(20);
    await flight.settled();
    expect(seen).toEqual([1, 2]);
  });
});
