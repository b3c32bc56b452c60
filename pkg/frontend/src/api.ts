/** Typed HTTP client for the dcnsim session service.
 *
 * Every value shown in the UI originates from one of these responses; the
 * client never post-processes amplitude strings, only passes them through.
 */

export interface SessionSummary {
  session: string;
  n_qubits: number;
  cursor: number;
  timeline_length: number;
  can_undo: boolean;
  can_redo: boolean;
  label: string;
  /** Polar amplitude strings ("0.707106781187@0"), one per basis state. */
  amplitudes: string[];
  /** Per-qubit probability of reading 1, keyed by qubit number as a string. */
  probabilities: Record<string, number>;
  verdicts: Record<string, string>;
  outcome: { qubit: number; bit: number; probability: number } | null;
}

export interface OpRecord {
  kind: "gate" | "measure" | "frame";
  name?: string;
  targets?: number[];
  controls?: number[];
  theta?: number | null;
  matrix?: string[] | null;
  forced?: number | null;
  label?: string;
  text?: string;
}

export interface BuiltinInfo {
  name: string;
  params: string[];
  default: string | null;
}

export interface BuiltinCircuit {
  name: string;
  param: string | null;
  n_qubits: number;
  circuit_name: string;
  init: string[] | null;
  ops: OpRecord[];
  text: string;
}

export interface ServiceConfig {
  version: string;
  max_qubits: number;
  ttl_seconds: number;
  capacity: number;
  tolerances: Record<string, number>;
}

export interface SeparabilityRecord {
  session: string;
  n_qubits: number;
  separable: boolean;
  marginal: boolean;
  verdict: string;
  partition: { p: number; q: number; qubit_order: number[] };
  i0: number;
  k0: number;
  r0: number;
  ratios: (string | null)[];
  witness: number;
  max_violation: number;
  factors: { p: string[]; q: string[] } | null;
  residual: number | null;
}

/** Error raised for any non-2xx response, carrying the service error body. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let code = "http_error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body && typeof body.code === "string") code = body.code;
    if (body && typeof body.message === "string") message = body.message;
  } catch {
    // Non-JSON error body; keep the status-line message.
  }
  throw new ServiceError(response.status, code, message);
}

export class ServiceClient {
  constructor(readonly baseUrl: string) {}

  private async requestJson<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    await raiseForStatus(response);
    return (await response.json()) as T;
  }

  private async requestText(path: string): Promise<string> {
    const response = await fetch(this.baseUrl + path);
    await raiseForStatus(response);
    return await response.text();
  }

  private postJson<T>(path: string, body?: unknown): Promise<T> {
    return this.requestJson<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  }

  createSession(options: {
    n_qubits: number;
    seed?: number;
    amps?: string[];
  }): Promise<SessionSummary> {
    return this.postJson("/session", options);
  }

  applyOp(sessionId: string, op: OpRecord): Promise<SessionSummary> {
    return this.postJson(`/session/${sessionId}/op`, op);
  }

  undo(sessionId: string): Promise<SessionSummary> {
    return this.postJson(`/session/${sessionId}/undo`);
  }

  redo(sessionId: string): Promise<SessionSummary> {
    return this.postJson(`/session/${sessionId}/redo`);
  }

  state(sessionId: string): Promise<SessionSummary> {
    return this.requestJson(`/session/${sessionId}/state`);
  }

  renderSvg(sessionId: string, layout?: string | null): Promise<string> {
    const query = layout ? `?layout=${encodeURIComponent(layout)}` : "";
    return this.requestText(`/session/${sessionId}/render.svg${query}`);
  }

  separability(
    sessionId: string,
    query: { partition?: string; order?: string; qubit?: number },
  ): Promise<SeparabilityRecord> {
    const params = new URLSearchParams();
    if (query.partition !== undefined) params.set("partition", query.partition);
    if (query.order !== undefined) params.set("order", query.order);
    if (query.qubit !== undefined) params.set("qubit", String(query.qubit));
    return this.requestJson(`/session/${sessionId}/separability?${params}`);
  }

  exportText(sessionId: string): Promise<string> {
    return this.requestText(`/session/${sessionId}/export`);
  }

  config(): Promise<ServiceConfig> {
    return this.requestJson("/config");
  }

  async builtins(): Promise<BuiltinInfo[]> {
    const body = await this.requestJson<{ builtins: BuiltinInfo[] }>("/builtin");
    return body.builtins;
  }

  builtin(name: string, param?: string | null): Promise<BuiltinCircuit> {
    const query = param ? `?param=${encodeURIComponent(param)}` : "";
    return this.requestJson(`/builtin/${name}${query}`);
  }
}
