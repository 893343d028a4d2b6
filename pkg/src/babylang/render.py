"""Annotated report text: source interleaved with result lines.

Every added line starts (after indentation) with one of the marker glyphs,
so stripping marker lines restores the original source byte-exactly.

    » name: <example> v1 | v2 | ...     probe row
    ≡ <example> n iterations            slider row
    ✓ / ✗ / ∞ / ○ name                  example status row
    ·                                   next source line is faded
"""

from __future__ import annotations

from .session.report import EvaluationReport, ModuleSection

MARKERS = ("»", "≡", "✓", "✗", "∞", "○", "·")


def strip_annotated(text: str) -> str:
    """Remove interleaved result lines, restoring the original source."""
    kept = [line for line in text.split("\n")
            if not line.lstrip().startswith(MARKERS)]
    return "\n".join(kept)


def _example_names(report: EvaluationReport) -> dict[str, str]:
    names = {}
    for section in report.modules.values():
        for row in section.examples:
            names[row["id"]] = row["name"]
    return names


def _pair_events(events: list[dict]) -> list[str]:
    """Chronological values; an old value directly followed by its new value
    renders as one `old → new` cell."""
    cells = []
    i = 0
    while i < len(events):
        event = events[i]
        if (event["phase"] == "before" and i + 1 < len(events)
                and events[i + 1]["phase"] == "after"):
            cells.append(f"{event['text']} → {events[i + 1]['text']}")
            i += 2
        else:
            cells.append(event["text"])
            i += 1
    return cells


def render_module(section: ModuleSection, report: EvaluationReport) -> str:
    source_lines = section.source.split("\n")
    names = _example_names(report)
    before: dict[int, list[str]] = {}
    after: dict[int, list[str]] = {}

    def indent_of(line_no: int) -> str:
        if 1 <= line_no <= len(source_lines):
            line = source_lines[line_no - 1]
            return line[:len(line) - len(line.lstrip())]
        return ""

    for row in section.examples:
        line = row.get("line") or 1
        status = row.get("status")
        if not row["enabled"]:
            glyph, detail = "○", " (disabled)"
        elif status == "ok":
            glyph, detail = "✓", ""
        elif status == "timeout":
            glyph, detail = "∞", ""
        elif status == "error":
            glyph, detail = "✗", f" — {row.get('error')}"
        else:
            glyph, detail = "○", " (not run)"
        ret = row.get("return_text")
        if status == "ok" and ret is not None:
            detail += f" → {ret}"
        before.setdefault(line, []).append(f"{indent_of(line)}{glyph} {row['name']}{detail}")

    for probe in section.probes:
        line = probe.get("line") or 1
        per_example: dict[str, list[dict]] = {}
        for event in probe["events"]:
            per_example.setdefault(event["example_id"], []).append(event)
        for example_id, events in per_example.items():
            cells = _pair_events(events)
            name = names.get(example_id, example_id)
            after.setdefault(line, []).append(
                f"{indent_of(line)}» {probe['label']}: {name} {' | '.join(cells)}")

    for slider in section.sliders:
        line = slider.get("line") or 1
        for example_id, count in sorted(slider["counts"].items()):
            name = names.get(example_id, example_id)
            after.setdefault(line, []).append(
                f"{indent_of(line)}≡ {name} {count} iterations")

    faded = set(section.faded_lines)
    out: list[str] = []
    for line_no, text in enumerate(source_lines, start=1):
        out.extend(before.get(line_no, ()))
        if line_no in faded:
            out.append(f"{indent_of(line_no)}·")
        out.append(text)
        out.extend(after.get(line_no, ()))
    return "\n".join(out)


def render_report(report: EvaluationReport) -> str:
    chunks = []
    for name, section in report.modules.items():
        chunks.append(f"{name}:")
        chunks.append(render_module(section, report))
    return "\n".join(chunks)
