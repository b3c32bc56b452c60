/** Serial task queue: at most one mutating request is in flight at a time. */

export class SerialQueue {
  private tail: Promise<unknown> = Promise.resolve();
  private depth = 0;

  /** Number of tasks queued or running. */
  get pending(): number {
    return this.depth;
  }

  /** Run `task` after every previously queued task has settled. */
  run<T>(task: () => Promise<T>): Promise<T> {
    this.depth += 1;
    const settle = () => {
      this.depth -= 1;
    };
    const next = this.tail.then(task, task);
    next.then(settle, settle);
    this.tail = next.then(
      () => undefined,
      () => undefined,
    );
    return next;
  }
}
