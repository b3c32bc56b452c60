// Unit tests for palette validation, layout choices, and percent formatting.

import { describe, expect, it } from "vitest";
import {
  gateSpec,
  layoutOptions,
  modularSpec,
  paletteOp,
  paletteProblems,
} from "../src/palette.js";
import { formatPercent } from "../src/components/session-view.js";

describe("gate metadata", () => {
  it("exposes the right slot counts per gate", () => {
    expect(gateSpec("h").targetSlots).toHaveLength(1);
    expect(gateSpec("h").controlSlots).toHaveLength(0);
    expect(gateSpec("cnot").targetSlots).toHaveLength(1);
    expect(gateSpec("cnot").controlSlots).toHaveLength(1);
    expect(gateSpec("ccnot").controlSlots).toHaveLength(2);
    expect(gateSpec("swap").targetSlots).toHaveLength(2);
    expect(gateSpec("phase").needsTheta).toBe(true);
    expect(gateSpec("x").needsTheta).toBe(false);
  });
});

describe("palette validation", () => {
  it("accepts a well-formed cnot", () => {
    expect(paletteProblems(gateSpec("cnot"), [2], [1], 2, "")).toEqual([]);
  });

  it("rejects cnot with target equal to control", () => {
    const problems = paletteProblems(gateSpec("cnot"), [1], [1], 2, "");
    expect(problems).toContain("qubits must be distinct");
  });

  it("rejects out-of-range qubits", () => {
    const problems = paletteProblems(gateSpec("h"), [3], [], 2, "");
    expect(problems.some((p) => p.includes("out of range"))).toBe(true);
  });

  it("rejects a swap onto the same qubit twice", () => {
    const problems = paletteProblems(gateSpec("swap"), [2, 2], [], 3, "");
    expect(problems).toContain("qubits must be distinct");
  });

  it("requires a numeric angle for phase", () => {
    expect(paletteProblems(gateSpec("phase"), [1], [], 2, "abc")).toContain(
      "angle must be a number",
    );
    expect(paletteProblems(gateSpec("phase"), [1], [], 2, "1.5707")).toEqual([]);
  });

  it("builds op records with targets, controls, and theta", () => {
    expect(paletteOp(gateSpec("cnot"), [2], [1], "")).toEqual({
      kind: "gate",
      name: "cnot",
      targets: [2],
      controls: [1],
    });
    expect(paletteOp(gateSpec("h"), [1], [], "")).toEqual({
      kind: "gate",
      name: "h",
      targets: [1],
    });
    expect(paletteOp(gateSpec("phase"), [1], [], "0.5")).toEqual({
      kind: "gate",
      name: "phase",
      targets: [1],
      theta: 0.5,
    });
  });
});

describe("layout choices", () => {
  it("enables only layouts that fit the qubit count", () => {
    const byLabel = (n: number) =>
      Object.fromEntries(layoutOptions(n).map((o) => [o.label, o.enabled]));
    expect(byLabel(2)).toMatchObject({ square: true, cube: false, hypercube: false });
    expect(byLabel(3)).toMatchObject({ square: false, cube: true, hypercube: false });
    expect(byLabel(4)).toMatchObject({ square: false, cube: false, hypercube: true });
    expect(byLabel(5)).toMatchObject({
      row: true,
      square: false,
      cube: false,
      hypercube: false,
      modular: true,
    });
  });

  it("builds modular specs with sorted axes", () => {
    expect(modularSpec([5, 4])).toBe("modular:4,5");
    expect(modularSpec([2])).toBe("modular:2");
    expect(modularSpec([])).toBeNull();
  });
});

describe("percent formatting", () => {
  it("trims float noise from service probabilities", () => {
    expect(formatPercent(0.5000000000000001)).toBe("50%");
    expect(formatPercent(0.4999999999999999)).toBe("50%");
    expect(formatPercent(0)).toBe("0%");
    expect(formatPercent(1)).toBe("100%");
    expect(formatPercent(0.7499999999999999)).toBe("75%");
  });
});
