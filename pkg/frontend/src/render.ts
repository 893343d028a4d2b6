// HTML rendering of an editor document: source lines with interleaved widget
// rows, faded lines dimmed. Pure string output so it is testable headlessly
// and trivially attachable via innerHTML.

import type { EditorDocument, ExampleWidget, ProbeWidget, SliderWidget, Widget } from "./state.js";

const COLOR_CLASSES = 6; // example colors cycle through .example-color-0..5

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function renderProbe(widget: ProbeWidget): string {
  const rows = widget.rows.map((row) => {
    const cells = row.cells.map((cell) => {
      if (cell.phase === "pair") {
        return `<span class="cell"><s>${escapeHtml(cell.oldText ?? "")}</s> ${escapeHtml(cell.text)}</span>`;
      }
      return `<span class="cell">${escapeHtml(cell.text)}</span>`;
    }).join('<span class="sep"> | </span>');
    const color = row.colorIndex % COLOR_CLASSES;
    return `<div class="probe-row example-color-${color}" data-example="${escapeHtml(row.exampleId)}">` +
      `<span class="example-name">${escapeHtml(row.exampleName)}</span> ${cells}</div>`;
  }).join("");
  const detached = widget.detached ? " detached" : "";
  return `<div class="widget probe${detached}" data-probe="${escapeHtml(widget.id)}">` +
    `<span class="probe-label">${escapeHtml(widget.label)}:</span>${rows}</div>`;
}

function renderSlider(widget: SliderWidget): string {
  const counts = widget.counts.map((count) => {
    const shown = widget.position === "all" ? `all ${count.total}` : `${widget.position} of ${count.total}`;
    return `<div class="slider-row example-color-${count.colorIndex % COLOR_CLASSES}">` +
      `<span class="example-name">${escapeHtml(count.exampleName)}</span> ` +
      `<input type="range" min="1" max="${count.total}" data-slider="${escapeHtml(widget.id)}"/> ` +
      `<span class="slider-position">${shown}</span></div>`;
  }).join("");
  return `<div class="widget slider" data-slider-widget="${escapeHtml(widget.id)}">${counts}</div>`;
}

function renderExample(widget: ExampleWidget): string {
  const badge = widget.errorBadge
    ? `<span class="error-badge" title="${escapeHtml(widget.hoverText ?? "")}">⚠</span>`
    : "";
  const ret = widget.returnText !== null && widget.status === "ok"
    ? ` <span class="return-value">→ ${escapeHtml(widget.returnText)}</span>` : "";
  const color = widget.colorIndex % COLOR_CLASSES;
  return `<div class="widget example example-color-${color}" data-example="${escapeHtml(widget.id)}">` +
    `<input type="checkbox" data-toggle="${escapeHtml(widget.id)}"${widget.enabled ? " checked" : ""}/>` +
    `<span class="status">${widget.glyph}</span> ` +
    `<span class="example-name">${escapeHtml(widget.name)}</span>${badge}${ret}</div>`;
}

function renderWidget(widget: Widget): string {
  if (widget.kind === "probe") return renderProbe(widget);
  if (widget.kind === "slider") return renderSlider(widget);
  return renderExample(widget);
}

export function renderDocument(doc: EditorDocument): string {
  const byLine = new Map<number, Widget[]>();
  for (const widget of doc.widgets) {
    const bucket = byLine.get(widget.line) ?? [];
    bucket.push(widget);
    byLine.set(widget.line, bucket);
  }
  const out: string[] = [`<div class="module${doc.stale ? " stale" : ""}" data-revision="${doc.revision}">`];
  const lines = doc.text.split("\n");
  lines.forEach((text, index) => {
    const lineNo = index + 1;
    for (const widget of byLine.get(lineNo) ?? []) {
      if (widget.kind === "example") out.push(renderWidget(widget));
    }
    const faded = doc.fadedLines.has(lineNo) ? " faded" : "";
    out.push(`<pre class="line${faded}" data-line="${lineNo}">${escapeHtml(text)}</pre>`);
    for (const widget of byLine.get(lineNo) ?? []) {
      if (widget.kind !== "example") out.push(renderWidget(widget));
    }
  });
  out.push("</div>");
  return out.join("\n");
}
