/** Gate palette metadata and client-side validation.
 *
 * Validation here only guards against requests the service is guaranteed to
 * reject (wrong arity, duplicate qubits, out-of-range targets) so the apply
 * button can be disabled before a round-trip; the service stays authoritative.
 */
import type { OpRecord } from "./api.js";

export interface GateSpec {
  name: string;
  /** Labels for the qubit slots, targets first then controls. */
  targetSlots: string[];
  controlSlots: string[];
  needsTheta: boolean;
}

export const GATES: GateSpec[] = [
  { name: "h", targetSlots: ["target"], controlSlots: [], needsTheta: false },
  { name: "x", targetSlots: ["target"], controlSlots: [], needsTheta: false },
  { name: "y", targetSlots: ["target"], controlSlots: [], needsTheta: false },
  { name: "z", targetSlots: ["target"], controlSlots: [], needsTheta: false },
  { name: "s", targetSlots: ["target"], controlSlots: [], needsTheta: false },
  { name: "t", targetSlots: ["target"], controlSlots: [], needsTheta: false },
  { name: "phase", targetSlots: ["target"], controlSlots: [], needsTheta: true },
  { name: "cnot", targetSlots: ["target"], controlSlots: ["control"], needsTheta: false },
  { name: "ccnot", targetSlots: ["target"], controlSlots: ["control a", "control b"], needsTheta: false },
  { name: "swap", targetSlots: ["first", "second"], controlSlots: [], needsTheta: false },
];

export function gateSpec(name: string): GateSpec {
  const spec = GATES.find((g) => g.name === name);
  if (!spec) throw new Error(`unknown palette gate ${name}`);
  return spec;
}

/** Human-readable reasons the current palette selection cannot be applied. */
export function paletteProblems(
  gate: GateSpec,
  targets: number[],
  controls: number[],
  nQubits: number,
  thetaText: string,
): string[] {
  const problems: string[] = [];
  if (targets.length !== gate.targetSlots.length) {
    problems.push(`${gate.name} needs ${gate.targetSlots.length} target(s)`);
  }
  if (controls.length !== gate.controlSlots.length) {
    problems.push(`${gate.name} needs ${gate.controlSlots.length} control(s)`);
  }
  const qubits = [...targets, ...controls];
  for (const q of qubits) {
    if (!Number.isInteger(q) || q < 1 || q > nQubits) {
      problems.push(`qubit ${q} is out of range 1..${nQubits}`);
    }
  }
  if (new Set(qubits).size !== qubits.length) {
    problems.push("qubits must be distinct");
  }
  if (gate.needsTheta && !Number.isFinite(Number.parseFloat(thetaText))) {
    problems.push("angle must be a number");
  }
  return problems;
}

/** Build the op record for a validated palette selection. */
export function paletteOp(
  gate: GateSpec,
  targets: number[],
  controls: number[],
  thetaText: string,
): OpRecord {
  const op: OpRecord = { kind: "gate", name: gate.name, targets };
  if (controls.length > 0) op.controls = controls;
  if (gate.needsTheta) op.theta = Number.parseFloat(thetaText);
  return op;
}

export interface LayoutOption {
  /** Layout spec string as the render endpoint expects it ("" = default). */
  spec: string;
  label: string;
  enabled: boolean;
}

/** Fixed-shape layouts offered by the switcher, greyed out when the qubit
 * count does not match; modular layouts are composed from the axis picker. */
export function layoutOptions(nQubits: number): LayoutOption[] {
  return [
    { spec: "", label: "default", enabled: true },
    { spec: "row", label: "row", enabled: true },
    { spec: "square", label: "square", enabled: nQubits === 2 },
    { spec: "cube", label: "cube", enabled: nQubits === 3 },
    { spec: "hypercube", label: "hypercube", enabled: nQubits === 4 },
    { spec: "modular", label: "modular", enabled: nQubits >= 1 },
  ];
}

/** Spec string for a modular layout over the checked axis qubits. */
export function modularSpec(axes: number[]): string | null {
  if (axes.length === 0) return null;
  const sorted = [...axes].sort((a, b) => a - b);
  return `modular:${sorted.join(",")}`;
}
