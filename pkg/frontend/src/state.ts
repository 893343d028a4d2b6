// Widget state derivation: a pure function of (document text, latest report,
// local interaction state). No engine logic lives here; every value, line and
// eligibility decision arrives in the report.

import type { ModuleSection, ProbeEvent, ProbeRow, Report } from "./protocol.js";

export type ValueCell = {
  text: string;
  phase: "before" | "after" | "pair";
  oldText?: string;
};

export type ProbeExampleRow = {
  exampleId: string;
  exampleName: string;
  colorIndex: number;
  cells: ValueCell[];
};

export type ProbeWidget = {
  kind: "probe";
  id: string;
  label: string;
  line: number;
  rows: ProbeExampleRow[];
  detached: boolean;
};

export type SliderWidget = {
  kind: "slider";
  id: string;
  label: string;
  line: number;
  counts: { exampleId: string; exampleName: string; colorIndex: number; total: number }[];
  position: number | "all";
};

export type ExampleWidget = {
  kind: "example";
  id: string;
  name: string;
  line: number;
  colorIndex: number;
  enabled: boolean;
  status: "ok" | "error" | "timeout" | "none";
  glyph: string;
  errorBadge: boolean;
  hoverText: string | null;
  returnText: string | null;
};

export type Widget = ProbeWidget | SliderWidget | ExampleWidget;

export type SliderSelection = Record<string, number | "all">;

export type EditorDocument = {
  module: string;
  text: string;
  revision: number;
  widgets: Widget[];
  fadedLines: Set<number>;
  stale: boolean;
};

// Example names/colors may live in another module's section (cross-module
// probes); index them across the whole report.
export function exampleIndex(report: Report): Map<string, { name: string; colorIndex: number }> {
  const index = new Map<string, { name: string; colorIndex: number }>();
  for (const section of Object.values(report.modules)) {
    for (const row of section.examples) {
      index.set(row.id, { name: row.name, colorIndex: row.color_index });
    }
  }
  return index;
}

export function filterEventsBySlider(
  events: ProbeEvent[],
  sliderId: string,
  position: number | "all",
): ProbeEvent[] {
  if (position === "all") return events;
  return events.filter((event) => {
    let last: [string, number] | null = null;
    for (const entry of event.iteration) {
      if (entry[0] === sliderId) last = entry;
    }
    return last !== null && last[1] === position;
  });
}

// Chronological cells; an old value directly followed by its new value
// collapses into one strikethrough pair, like the engine's text rows.
export function pairCells(events: ProbeEvent[]): ValueCell[] {
  const cells: ValueCell[] = [];
  let i = 0;
  while (i < events.length) {
    const event = events[i];
    const next = events[i + 1];
    if (event.phase === "before" && next !== undefined && next.phase === "after") {
      cells.push({ phase: "pair", oldText: event.text, text: next.text });
      i += 2;
    } else {
      cells.push({ phase: event.phase, text: event.text });
      i += 1;
    }
  }
  return cells;
}

function probeWidget(
  probe: ProbeRow,
  report: Report,
  selection: SliderSelection,
): ProbeWidget {
  const names = exampleIndex(report);
  const byExample = new Map<string, ProbeEvent[]>();
  for (const event of probe.events) {
    const bucket = byExample.get(event.example_id) ?? [];
    bucket.push(event);
    byExample.set(event.example_id, bucket);
  }
  const rows: ProbeExampleRow[] = [];
  for (const [exampleId, events] of byExample) {
    let filtered = events;
    for (const [sliderId, position] of Object.entries(selection)) {
      filtered = filterEventsBySlider(filtered, sliderId, position);
    }
    const info = names.get(exampleId);
    rows.push({
      exampleId,
      exampleName: info?.name ?? exampleId,
      colorIndex: info?.colorIndex ?? 0,
      cells: pairCells(filtered),
    });
  }
  return {
    kind: "probe",
    id: probe.id,
    label: probe.label,
    line: probe.line ?? 0,
    rows,
    detached: probe.line === null,
  };
}

const STATUS_GLYPHS = { ok: "✓", error: "✗", timeout: "∞", none: "○" } as const;

export function applyReport(
  module: string,
  report: Report,
  selection: SliderSelection = {},
): EditorDocument {
  const section = report.modules[module];
  if (section === undefined) {
    throw new Error(`report has no module ${module}`);
  }
  const names = exampleIndex(report);
  const widgets: Widget[] = [];
  for (const row of section.examples) {
    const status = row.status ?? "none";
    widgets.push({
      kind: "example",
      id: row.id,
      name: row.name,
      line: row.line ?? 0,
      colorIndex: row.color_index,
      enabled: row.enabled,
      status,
      glyph: row.enabled ? STATUS_GLYPHS[status] : STATUS_GLYPHS.none,
      errorBadge: row.status === "error",
      hoverText: row.error,
      returnText: row.return_text ?? null,
    });
  }
  for (const probe of section.probes) {
    widgets.push(probeWidget(probe, report, selection));
  }
  for (const slider of section.sliders) {
    widgets.push({
      kind: "slider",
      id: slider.id,
      label: slider.label,
      line: slider.line ?? 0,
      counts: Object.entries(slider.counts).map(([exampleId, total]) => ({
        exampleId,
        exampleName: names.get(exampleId)?.name ?? exampleId,
        colorIndex: names.get(exampleId)?.colorIndex ?? 0,
        total,
      })),
      position: selection[slider.id] ?? "all",
    });
  }
  widgets.sort((a, b) => a.line - b.line);
  return {
    module,
    text: section.source,
    revision: report.revision,
    widgets,
    fadedLines: new Set(section.faded_lines),
    stale: section.stale,
  };
}

// Identity rendering: a deterministic glyph per identity id, so "same
// object" is visible across captures.
const IDENTITY_GLYPHS = ["🔵", "🟠", "🟢", "🟣", "🟡", "🔴", "🟤", "⚪", "⚫", "🟥", "🟦", "🟩"];

export function identityGlyph(id: number): string {
  return IDENTITY_GLYPHS[(id - 1) % IDENTITY_GLYPHS.length];
}
