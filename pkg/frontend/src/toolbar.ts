// Context-sensitive toolbar: which annotation buttons apply to the current
// selection. The applicability table is served by the engine per report
// (location key -> annotation kinds), keyed by keyword-anchored spans.

import type { ModuleSection } from "./protocol.js";

export type ToolbarButton = {
  kind: string;
  label: string;
  line: number;
};

const LABELS: Record<string, string> = {
  probe: "add probe",
  slider: "add slider",
  example: "add example",
  replacement: "add replacement",
  instance_template: "add instance template",
};

type Entry = { key: number[]; kinds: string[] };

function parseEligibility(section: ModuleSection): Entry[] {
  return Object.entries(section.eligibility).map(([key, kinds]) => ({
    key: key.split(",").map(Number),
    kinds,
  }));
}

function spanContains(key: number[], line: number, column: number): boolean {
  const [startLine, startCol, endLine, endCol] = key;
  if (line < startLine || line > endLine) return false;
  if (line === startLine && column < startCol) return false;
  if (line === endLine && column >= endCol && !(startLine === endLine && startCol === endCol)) {
    return false;
  }
  return true;
}

function spanSize(key: number[]): number {
  const [startLine, startCol, endLine, endCol] = key;
  return (endLine - startLine) * 10_000 + (endCol - startCol);
}

// The innermost node covering the cursor decides the available buttons.
export function toolbarActions(
  section: ModuleSection,
  line: number,
  column: number,
): ToolbarButton[] {
  const covering = parseEligibility(section)
    .filter((entry) => spanContains(entry.key, line, column))
    .sort((a, b) => spanSize(a.key) - spanSize(b.key));
  const kinds = new Set<string>();
  for (const entry of covering) {
    for (const kind of entry.kinds) kinds.add(kind);
    if (entry.kinds.length > 0) break; // innermost eligible node wins
  }
  return [...kinds].sort().map((kind) => ({
    kind,
    label: LABELS[kind] ?? kind,
    line,
  }));
}
