/** Debounced single-flight scheduler for slider-driven requests.
 *
 * At most one request is in flight; while it runs, newer states overwrite
 * the queued one, so the newest state always wins and stale responses are
 * never rendered.
 */

export interface SingleFlight<T> {
  schedule(arg: T): void;
  /** Resolves once nothing is queued or running (test helper). */
  settled(): Promise<void>;
  hasWork(): boolean;
}

export function createSingleFlight<T>(
  runner: (arg: T) => Promise<void>,
  delayMs = 150,
): SingleFlight<T> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let queued: { arg: T } | null = null;
  let active: Promise<void> | null = null;

  function launch(): void {
    if (active !== null || queued === null) return;
    const { arg } = queued;
    queued = null;
    active = runner(arg)
      .catch(() => undefined)
      .then(() => {
        active = null;
        if (queued !== null) launch();
      });
  }

  return {
    schedule(arg: T): void {
      queued = { arg };
      if (timer !== null) clearTimeout(timer);
      timer = setTimeout(() => {
        timer = null;
        launch();
      }, delayMs);
    },
    async settled(): Promise<void> {
      while (active !== null) {
        await active;
      }
    },
    hasWork(): boolean {
      return active !== null || queued !== null || timer !== null;
    },
  };
}
