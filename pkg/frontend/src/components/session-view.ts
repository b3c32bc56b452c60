// Vanilla web component for one dcnsim service session: gate palette,
// measurement dialog, layout switcher, undo/redo, and the server-rendered
// circle-notation panel. All displayed amplitudes and probabilities are
// verbatim service responses; no quantum state math happens client-side.

import { ServiceClient, ServiceError, type BuiltinInfo } from "../api.js";
import {
  GATES,
  gateSpec,
  layoutOptions,
  modularSpec,
  paletteOp,
  paletteProblems,
  type GateSpec,
} from "../palette.js";
import { UiSession } from "../session.js";

const MIN_QUBITS = 1;
const MAX_QUBITS = 6;
const DEFAULT_QUBITS = 2;
/** Matches the service's collapse tolerance: outcomes at or below this
 * probability would be rejected with 409, so their buttons are disabled. */
const ZERO_PROBABILITY = 1e-12;

const TEMPLATE_HTML = /* html */ `
  <style>
    :host { display: block; font-family: system-ui, sans-serif; color: #263238; }
    .root { display: grid; gap: 0.75rem; }
    header, .toolbar, .palette { display: flex; flex-wrap: wrap; gap: 0.5rem; align-items: center; }
    .error { color: #c62828; font-family: monospace; margin: 0; }
    .problem { color: #c62828; font-size: 0.85rem; }
    .main { display: flex; gap: 1rem; align-items: flex-start; }
    .panel svg { border: 1px solid #cfd8dc; }
    .amplitudes table { border-collapse: collapse; font-family: monospace; }
    .amplitudes td, .amplitudes th { padding: 0.1rem 0.5rem; text-align: left; }
    .verdicts { list-style: none; padding: 0; margin: 0.5rem 0; font-family: monospace; }
    .verdicts [data-verdict="separable"] { color: #2e7d32; }
    .verdicts [data-verdict="entangled"] { color: #c62828; }
    .verdicts [data-verdict="marginal"] { color: #f9a825; }
    .measure-dialog { border: 1px solid #90a4ae; padding: 0.75rem; max-width: 22rem; }
    .measure-dialog p { font-family: monospace; margin: 0.25rem 0; }
    .tooltip { position: fixed; pointer-events: none; background: #263238; color: #eceff1;
               font-family: monospace; font-size: 0.8rem; padding: 0.15rem 0.4rem; }
    button:disabled, option:disabled { opacity: 0.5; }
  </style>
  <div class="root">
    <header>
      <form class="new-session">
        <label>qubits <input class="qubit-count" type="number"
          min="${MIN_QUBITS}" max="${MAX_QUBITS}" value="${DEFAULT_QUBITS}"></label>
        <button class="create" type="submit">new session</button>
      </form>
      <label>built-in <select class="builtin-name"></select></label>
      <select class="builtin-param" hidden></select>
      <button class="builtin-load" type="button">load</button>
    </header>
    <p class="error" hidden></p>
    <div class="toolbar">
      <button class="undo" type="button">undo</button>
      <button class="redo" type="button">redo</button>
      <button class="measure-open" type="button">measure…</button>
      <label>layout <select class="layout-kind"></select></label>
      <span class="modular-axes" hidden></span>
      <span class="frame-label"></span>
    </div>
    <form class="palette">
      <label>gate <select class="gate">
        ${GATES.map((g) => `<option value="${g.name}">${g.name}</option>`).join("")}
      </select></label>
      <span class="qubit-picks"></span>
      <label class="theta-wrap" hidden>angle <input class="theta" size="8" value="1.5707963268"></label>
      <button class="apply" type="submit">apply</button>
      <span class="palette-problem problem"></span>
    </form>
    <div class="measure-dialog" hidden>
      <label>measure qubit <select class="measure-qubit"></select></label>
      <p class="prob-zero"></p>
      <p class="prob-one"></p>
      <button class="choose-zero" type="button">record 0</button>
      <button class="choose-one" type="button">record 1</button>
      <button class="sample" type="button">sample</button>
      <button class="measure-cancel" type="button">cancel</button>
      <span class="dialog-error problem"></span>
    </div>
    <div class="main">
      <div class="panel"></div>
      <aside class="amplitudes">
        <table>
          <thead><tr><th>basis</th><th>amplitude</th></tr></thead>
          <tbody></tbody>
        </table>
        <ul class="verdicts"></ul>
        <p class="outcome" hidden></p>
      </aside>
    </div>
    <div class="tooltip" hidden></div>
  </div>
`;

/** Percentage text for a service probability, trimmed of float noise. */
export function formatPercent(p: number): string {
  return `${Number((p * 100).toPrecision(12))}%`;
}

function basisLabel(index: number, nQubits: number): string {
  return `|${index.toString(2).padStart(nQubits, "0")}⟩`;
}

export class SessionViewElement extends HTMLElement {
  static tag = "dcn-session-view";

  session!: UiSession;
  /** Unexpected (non-service) errors caught by event handlers. */
  clientErrors: unknown[] = [];
  /** Promise of the most recent user-triggered action, for tests. */
  lastAction: Promise<unknown> = Promise.resolve();

  private root: ShadowRoot;
  private unsubscribe: (() => void) | null = null;
  private builtinList: BuiltinInfo[] = [];
  private measureOpen = false;
  // Layout controls are component state: the session only stores the spec
  // currently committed to the renderer.
  private layoutKind = "";
  private layoutAxes = new Set<number>();
  private lastSessionId: string | null = null;

  constructor() {
    super();
    this.root = this.attachShadow({ mode: "open" });
  }

  connectedCallback() {
    if (!this.session) {
      const baseUrl = this.getAttribute("base-url") ?? "";
      this.session = new UiSession(new ServiceClient(baseUrl));
    }
    this.root.innerHTML = TEMPLATE_HTML;
    this.unsubscribe = this.session.subscribe(() => this.syncView());
    this.bindEvents();
    this.syncPalette();
    this.syncView();
    this.track(this.loadBuiltins());
  }

  disconnectedCallback() {
    this.unsubscribe?.();
    this.unsubscribe = null;
  }

  private query<T extends Element>(selector: string): T {
    const el = this.root.querySelector<T>(selector);
    if (!el) throw new Error(`missing element ${selector}`);
    return el;
  }

  /** Record an action promise; service errors are already mirrored in state,
   * anything else is a client bug and is kept for inspection. */
  private track(action: Promise<unknown>): Promise<unknown> {
    this.lastAction = action.catch((error) => {
      if (!(error instanceof ServiceError)) {
        this.clientErrors.push(error);
        console.error(error);
      }
    });
    return this.lastAction;
  }

  private async loadBuiltins(): Promise<void> {
    this.builtinList = await this.session.client.builtins();
    const select = this.query<HTMLSelectElement>(".builtin-name");
    select.innerHTML = this.builtinList
      .map((b) => `<option value="${b.name}">${b.name}</option>`)
      .join("");
    this.syncBuiltinParams();
  }

  private syncBuiltinParams(): void {
    const name = this.query<HTMLSelectElement>(".builtin-name").value;
    const info = this.builtinList.find((b) => b.name === name);
    const select = this.query<HTMLSelectElement>(".builtin-param");
    const params = info?.params ?? [];
    select.hidden = params.length === 0;
    select.innerHTML = params
      .map((p) => `<option value="${p}">${p}</option>`)
      .join("");
    if (info?.default) select.value = info.default;
  }

  private bindEvents(): void {
    this.query<HTMLFormElement>(".new-session").addEventListener("submit", (event) => {
      event.preventDefault();
      const n = Number.parseInt(this.query<HTMLInputElement>(".qubit-count").value, 10);
      this.track(this.session.start(n));
    });
    this.query(".builtin-name").addEventListener("change", () => this.syncBuiltinParams());
    this.query(".builtin-load").addEventListener("click", () => {
      const name = this.query<HTMLSelectElement>(".builtin-name").value;
      if (!name) return;
      const paramSelect = this.query<HTMLSelectElement>(".builtin-param");
      const param = paramSelect.hidden ? null : paramSelect.value;
      this.track(this.session.replayBuiltin(name, param));
    });

    this.query(".undo").addEventListener("click", () => this.track(this.session.undo()));
    this.query(".redo").addEventListener("click", () => this.track(this.session.redo()));

    const palette = this.query<HTMLFormElement>(".palette");
    palette.addEventListener("submit", (event) => {
      event.preventDefault();
      this.applyPaletteGate();
    });
    this.query(".gate").addEventListener("change", () => this.syncPalette());
    palette.addEventListener("change", () => this.syncPaletteValidity());
    palette.addEventListener("input", () => this.syncPaletteValidity());

    this.query(".measure-open").addEventListener("click", () => {
      this.measureOpen = true;
      this.query(".dialog-error").textContent = "";
      this.syncMeasureDialog();
    });
    this.query(".measure-cancel").addEventListener("click", () => {
      this.measureOpen = false;
      this.syncMeasureDialog();
    });
    this.query(".measure-qubit").addEventListener("change", () => this.syncMeasureDialog());
    this.query(".choose-zero").addEventListener("click", () => this.commitMeasure(0));
    this.query(".choose-one").addEventListener("click", () => this.commitMeasure(1));
    this.query(".sample").addEventListener("click", () => this.commitMeasure(null));

    this.query(".layout-kind").addEventListener("change", () => this.onLayoutKindChange());
    this.query(".modular-axes").addEventListener("change", () => this.onLayoutAxesChange());
  }

  // ----- palette ---------------------------------------------------------

  private currentGate(): GateSpec {
    return gateSpec(this.query<HTMLSelectElement>(".gate").value);
  }

  private nQubits(): number {
    return this.session.summary?.n_qubits ?? 0;
  }

  /** Rebuild the qubit slot selects for the chosen gate and qubit count. */
  private syncPalette(): void {
    const gate = this.currentGate();
    const n = this.nQubits();
    const picks = this.query(".qubit-picks");
    const slot = (role: string, label: string, index: number) => `
      <label>${label} <select class="slot" data-role="${role}" data-index="${index}">
        ${Array.from({ length: n }, (_, i) => i + 1)
          .map((q) => `<option value="${q}">${q}</option>`)
          .join("")}
      </select></label>`;
    picks.innerHTML =
      gate.targetSlots.map((label, i) => slot("target", label, i)).join("") +
      gate.controlSlots.map((label, i) => slot("control", label, i)).join("");
    // Distinct defaults so e.g. cnot does not start with control == target.
    const slots = picks.querySelectorAll<HTMLSelectElement>(".slot");
    slots.forEach((sel, i) => {
      if (n > 0) sel.value = String(Math.min(i + 1, n));
    });
    this.query<HTMLElement>(".theta-wrap").hidden = !gate.needsTheta;
    this.syncPaletteValidity();
  }

  private paletteSelection(): { targets: number[]; controls: number[] } {
    const targets: number[] = [];
    const controls: number[] = [];
    for (const sel of this.root.querySelectorAll<HTMLSelectElement>(".slot")) {
      const q = Number.parseInt(sel.value, 10);
      (sel.dataset.role === "control" ? controls : targets).push(q);
    }
    return { targets, controls };
  }

  private syncPaletteValidity(): void {
    const gate = this.currentGate();
    const { targets, controls } = this.paletteSelection();
    const theta = this.query<HTMLInputElement>(".theta").value;
    const problems = this.session.summary
      ? paletteProblems(gate, targets, controls, this.nQubits(), theta)
      : ["no active session"];
    this.query<HTMLButtonElement>(".apply").disabled = problems.length > 0;
    this.query(".palette-problem").textContent = problems.join("; ");
  }

  private applyPaletteGate(): void {
    const gate = this.currentGate();
    const { targets, controls } = this.paletteSelection();
    const theta = this.query<HTMLInputElement>(".theta").value;
    if (paletteProblems(gate, targets, controls, this.nQubits(), theta).length > 0) return;
    this.track(this.session.applyOp(paletteOp(gate, targets, controls, theta)));
  }

  // ----- measurement dialog ---------------------------------------------

  /** Refresh the dialog: per-outcome probabilities come from the latest
   * service summary, displayed before any commit. */
  private syncMeasureDialog(): void {
    const dialog = this.query<HTMLElement>(".measure-dialog");
    const summary = this.session.summary;
    dialog.hidden = !this.measureOpen || !summary;
    if (dialog.hidden || !summary) return;

    const qubitSelect = this.query<HTMLSelectElement>(".measure-qubit");
    if (qubitSelect.options.length !== summary.n_qubits) {
      qubitSelect.innerHTML = Array.from({ length: summary.n_qubits }, (_, i) => i + 1)
        .map((q) => `<option value="${q}">${q}</option>`)
        .join("");
    }
    const qubit = Number.parseInt(qubitSelect.value, 10);
    const pOne = summary.probabilities[String(qubit)] ?? 0;
    const pZero = 1 - pOne;
    this.query(".prob-zero").textContent = `outcome 0: ${formatPercent(pZero)}`;
    this.query(".prob-one").textContent = `outcome 1: ${formatPercent(pOne)}`;
    this.query<HTMLButtonElement>(".choose-zero").disabled = pZero <= ZERO_PROBABILITY;
    this.query<HTMLButtonElement>(".choose-one").disabled = pOne <= ZERO_PROBABILITY;
  }

  private commitMeasure(forced: number | null): void {
    const qubit = Number.parseInt(this.query<HTMLSelectElement>(".measure-qubit").value, 10);
    const op =
      forced === null
        ? { kind: "measure" as const, targets: [qubit] }
        : { kind: "measure" as const, targets: [qubit], forced };
    this.track(
      this.session.applyOp(op).then(
        () => {
          this.measureOpen = false;
          this.syncMeasureDialog();
        },
        (error) => {
          if (error instanceof ServiceError) {
            this.query(".dialog-error").textContent = `${error.code}: ${error.message}`;
            return;
          }
          throw error;
        },
      ),
    );
  }

  // ----- layout switcher -------------------------------------------------

  /** Rebuild the layout controls from component state; invalid fixed-shape
   * layouts for the current qubit count are greyed out. */
  private syncLayoutChoices(): void {
    const n = this.nQubits();
    const kindSelect = this.query<HTMLSelectElement>(".layout-kind");
    kindSelect.innerHTML = layoutOptions(n)
      .map(
        (opt) =>
          `<option value="${opt.spec}" ${opt.enabled ? "" : "disabled"}>${opt.label}</option>`,
      )
      .join("");
    kindSelect.value = this.layoutKind;

    const axes = this.query<HTMLElement>(".modular-axes");
    axes.hidden = this.layoutKind !== "modular";
    axes.innerHTML = Array.from({ length: n }, (_, i) => i + 1)
      .map(
        (q) => `<label>q${q}<input type="checkbox" class="axis" value="${q}"
          ${this.layoutAxes.has(q) ? "checked" : ""}></label>`,
      )
      .join("");
  }

  private onLayoutKindChange(): void {
    this.layoutKind = this.query<HTMLSelectElement>(".layout-kind").value;
    this.syncLayoutChoices();
    this.commitLayout();
  }

  private onLayoutAxesChange(): void {
    this.layoutAxes = new Set(
      Array.from(
        this.root.querySelectorAll<HTMLInputElement>(".axis:checked"),
        (box) => Number.parseInt(box.value, 10),
      ),
    );
    this.commitLayout();
  }

  private commitLayout(): void {
    if (this.layoutKind === "modular") {
      const spec = modularSpec([...this.layoutAxes]);
      // No axis picked yet: keep the pickers visible, commit nothing.
      if (spec === null) return;
      this.track(this.session.setLayout(spec));
      return;
    }
    this.track(this.session.setLayout(this.layoutKind === "" ? null : this.layoutKind));
  }

  /** Switch the layout programmatically, as the switcher controls would. */
  switchLayout(kind: string, axes: number[] = []): Promise<unknown> {
    this.layoutKind = kind;
    this.layoutAxes = new Set(axes);
    this.syncLayoutChoices();
    this.commitLayout();
    return this.lastAction;
  }

  // ----- view sync -------------------------------------------------------

  private syncView(): void {
    const summary = this.session.summary;
    if (summary && summary.session !== this.lastSessionId) {
      // Fresh session: reset layout controls and resize the palette slots.
      this.lastSessionId = summary.session;
      this.layoutKind = "";
      this.layoutAxes.clear();
      this.syncPalette();
    }
    if (this.session.layout === null && this.session.lastError?.code === "layout_mismatch") {
      // Renderer rejected the spec and fell back to the default layout.
      this.layoutKind = "";
      this.layoutAxes.clear();
    }

    const error = this.session.lastError;
    const banner = this.query<HTMLElement>(".error");
    banner.hidden = error === null;
    banner.textContent = error ? `${error.code}: ${error.message}` : "";

    this.query<HTMLButtonElement>(".undo").disabled = !summary?.can_undo;
    this.query<HTMLButtonElement>(".redo").disabled = !summary?.can_redo;
    this.query<HTMLButtonElement>(".measure-open").disabled = !summary;
    this.query<HTMLElement>(".frame-label").textContent = summary
      ? `${summary.label} (step ${summary.cursor}/${summary.timeline_length - 1})`
      : "";

    const tbody = this.query(".amplitudes tbody");
    tbody.innerHTML = "";
    if (summary) {
      summary.amplitudes.forEach((amp, i) => {
        const row = document.createElement("tr");
        const basis = document.createElement("td");
        basis.textContent = basisLabel(i, summary.n_qubits);
        const value = document.createElement("td");
        value.className = "amp";
        value.textContent = amp;
        row.append(basis, value);
        tbody.append(row);
      });
    }

    const verdicts = this.query(".verdicts");
    verdicts.innerHTML = "";
    if (summary) {
      for (const [qubit, verdict] of Object.entries(summary.verdicts)) {
        const item = document.createElement("li");
        item.dataset.verdict = verdict;
        item.textContent = `q${qubit} ${verdict}`;
        verdicts.append(item);
      }
    }

    const outcome = this.query<HTMLElement>(".outcome");
    outcome.hidden = !summary?.outcome;
    if (summary?.outcome) {
      const { qubit, bit, probability } = summary.outcome;
      outcome.textContent = `measured q${qubit} = ${bit} (${formatPercent(probability)})`;
    }

    this.embedSvg();
    this.syncLayoutChoices();
    this.syncPaletteValidity();
    this.syncMeasureDialog();
  }

  /** Embed the server-rendered SVG and wire hover tooltips to its glyphs. */
  private embedSvg(): void {
    const panel = this.query<HTMLElement>(".panel");
    panel.innerHTML = this.session.svg;
    const summary = this.session.summary;
    const svg = panel.querySelector("svg");
    if (!svg || !summary) return;
    const layers = Array.from(svg.children).filter((c) => c.tagName === "g");
    const glyphLayer = layers[2];
    if (!glyphLayer) return;
    const glyphs = Array.from(glyphLayer.children).filter((c) => c.tagName === "g");
    const tooltip = this.query<HTMLElement>(".tooltip");
    glyphs.forEach((glyphGroup, index) => {
      glyphGroup.setAttribute("data-basis-index", String(index));
      glyphGroup.addEventListener("mouseenter", () => {
        tooltip.hidden = false;
        tooltip.textContent = `${basisLabel(index, summary.n_qubits)} ${
          summary.amplitudes[index]
        }`;
      });
      glyphGroup.addEventListener("mouseleave", () => {
        tooltip.hidden = true;
      });
    });
  }
}

if (!customElements.get(SessionViewElement.tag)) {
  customElements.define(SessionViewElement.tag, SessionViewElement);
}
