/** Client-side mirror of one service session.
 *
 * All state shown in the UI lives here as verbatim server responses: the
 * latest summary, the latest rendered SVG document, and the last error body.
 * Mutations run through a serial queue so only one is in flight at a time;
 * each successful mutation replaces the summary with the service response and
 * re-fetches the rendering before listeners are notified.
 */
import {
  ServiceClient,
  ServiceError,
  type OpRecord,
  type SessionSummary,
} from "./api.js";
import { SerialQueue } from "./queue.js";

export type Listener = () => void;

export class UiSession {
  summary: SessionSummary | null = null;
  /** Layout spec for the rendering; null means the server default. */
  layout: string | null = null;
  /** Latest server-rendered SVG document, embedded as-is. */
  svg = "";
  lastError: ServiceError | null = null;

  private queue = new SerialQueue();
  private listeners = new Set<Listener>();

  constructor(readonly client: ServiceClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  get sessionId(): string | null {
    return this.summary ? this.summary.session : null;
  }

  /** True while mutations are queued or in flight. */
  get busy(): boolean {
    return this.queue.pending > 0;
  }

  private async refreshSvg(): Promise<void> {
    if (!this.summary) return;
    try {
      this.svg = await this.client.renderSvg(this.summary.session, this.layout);
    } catch (error) {
      if (error instanceof ServiceError && this.layout !== null) {
        // Rejected layout spec: surface the error and fall back to default.
        this.lastError = error;
        this.layout = null;
        this.svg = await this.client.renderSvg(this.summary.session, null);
        return;
      }
      throw error;
    }
  }

  private mutate(task: () => Promise<SessionSummary>): Promise<SessionSummary> {
    return this.queue.run(async () => {
      try {
        const summary = await task();
        this.summary = summary;
        this.lastError = null;
        await this.refreshSvg();
        this.notify();
        return summary;
      } catch (error) {
        if (error instanceof ServiceError) {
          this.lastError = error;
          this.notify();
        }
        throw error;
      }
    });
  }

  start(nQubits: number, options: { seed?: number; amps?: string[] } = {}) {
    return this.mutate(async () => {
      this.layout = null;
      return this.client.createSession({ n_qubits: nQubits, ...options });
    });
  }

  applyOp(op: OpRecord): Promise<SessionSummary> {
    return this.mutate(() => this.client.applyOp(this.requireId(), op));
  }

  undo(): Promise<SessionSummary> {
    return this.mutate(() => this.client.undo(this.requireId()));
  }

  redo(): Promise<SessionSummary> {
    return this.mutate(() => this.client.redo(this.requireId()));
  }

  /** Fetch a built-in circuit, open a fresh session sized for it, and replay
   * its ops one by one so each becomes an undoable timeline entry. */
  replayBuiltin(name: string, param?: string | null): Promise<SessionSummary> {
    return this.mutate(async () => {
      const circuit = await this.client.builtin(name, param);
      this.layout = null;
      let summary = await this.client.createSession({
        n_qubits: circuit.n_qubits,
        ...(circuit.init ? { amps: circuit.init } : {}),
      });
      this.summary = summary;
      for (const op of circuit.ops) {
        summary = await this.client.applyOp(summary.session, op);
        this.summary = summary;
      }
      return summary;
    });
  }

  /** Switch the rendered layout; the state is untouched, only geometry. */
  setLayout(spec: string | null): Promise<SessionSummary> {
    return this.mutate(async () => {
      this.layout = spec;
      return this.summary ?? (await this.client.state(this.requireId()));
    });
  }

  private requireId(): string {
    const id = this.sessionId;
    if (!id) throw new Error("no active session");
    return id;
  }
}
