// End-to-end against a live engine: spawn `babylang serve`, speak the wire
// protocol, and check the editor-facing behaviors on real reports.

import { spawn, ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import type { Report, ServerMessage } from "../src/protocol.js";
import { parseServerMessage } from "../src/protocol.js";
import { applyReport } from "../src/state.js";
import { renderDocument } from "../src/render.js";

const PORT = 8901 + Math.floor(Math.random() * 500);
const FIXTURES = join(__dirname, "..", "..", "src", "babylang", "fixtures");

let engine: ChildProcess;
let ws: WebSocket;
const reports: Report[] = [];
const errors: string[] = [];

function send(message: unknown) {
  ws.send(JSON.stringify(message) + "\n");
}

function nextReport(countBefore: number, timeoutMs = 15_000): Promise<Report> {
  return new Promise((resolve, reject) => {
    const deadline = Date.now() + timeoutMs;
    const poll = () => {
      if (reports.length > countBefore) return resolve(reports[reports.length - 1]);
      if (Date.now() > deadline) return reject(new Error("no report arrived"));
      setTimeout(poll, 25);
    };
    poll();
  });
}

beforeAll(async () => {
  engine = spawn("python3", ["-m", "babylang.cli", "serve", "--port", String(PORT)],
                 { stdio: ["ignore", "pipe", "pipe"] });
  engine.stderr?.on("data", () => undefined);
  // wait for the socket to accept connections
  await new Promise<void>((resolve, reject) => {
    const deadline = Date.now() + 20_000;
    const attempt = () => {
      const probe = new WebSocket(`ws://127.0.0.1:${PORT}/ws`);
      probe.on("open", () => { probe.close(); resolve(); });
      probe.on("error", () => {
        if (Date.now() > deadline) reject(new Error("engine never came up"));
        else setTimeout(attempt, 200);
      });
    };
    attempt();
  });
  ws = new WebSocket(`ws://127.0.0.1:${PORT}/ws`);
  ws.on("message", (data) => {
    for (const chunk of String(data).split("\n")) {
      if (!chunk.trim()) continue;
      const message: ServerMessage = parseServerMessage(chunk);
      if (message.type === "report") reports.push(message.payload);
      else errors.push(message.payload.message);
    }
  });
  await new Promise<void>((resolve) => ws.on("open", () => resolve()));
}, 30_000);

afterAll(() => {
  ws?.close();
  engine?.kill("SIGKILL");
});

describe("editor against a live engine", () => {
  const source = readFileSync(join(FIXTURES, "search_steps.baby"), "utf-8");
  const templates = readFileSync(join(FIXTURES, "templates.babytpl"), "utf-8");

  it("evaluates a session and renders probe rows", async () => {
    send({ type: "open_session", payload: {
      modules: { search_steps: source },
      templates,
      config: { debounce_ms: 60_000 },  // only explicit evaluates in this test
    }});
    const count = reports.length;
    send({ type: "evaluate" });
    const report = await nextReport(count);
    expect(report.revision).toBe(1);
    const doc = applyReport("search_steps", report);
    const probe = doc.widgets.find((w) => w.kind === "probe" && w.label === "mid");
    expect(probe && probe.kind === "probe" &&
           probe.rows[0].cells.map((c) => c.text)).toEqual(["2", "4", "5"]);
  }, 20_000);

  it("toggling an example updates its probe row within one report cycle", async () => {
    const count = reports.length;
    const before = reports[reports.length - 1];
    const probeBefore = applyReport("search_steps", before)
      .widgets.find((w) => w.kind === "probe" && w.label === "mid");
    expect(probeBefore && probeBefore.kind === "probe" &&
           probeBefore.rows.map((r) => r.exampleName)).toEqual(["Not Found"]);

    // the Found example's comment sits on line 2; rewrite it enabled
    send({ type: "set_annotation", payload: {
      module: "search_steps", line: 2, kind: "example",
      annotation: { name: "Found", enabled: true, this: "null",
                    params: { key: '"e"', array: "@template:letters" } },
    }});
    send({ type: "evaluate" });
    const report = await nextReport(count);
    const probe = applyReport("search_steps", report)
      .widgets.find((w) => w.kind === "probe" && w.label === "mid");
    expect(probe && probe.kind === "probe" &&
           probe.rows.map((r) => r.exampleName).sort()).toEqual(["Found", "Not Found"]);
    expect(errors).toEqual([]);
  }, 20_000);

  it("moving the while-slider to position 2 filters mid to the single value 4", async () => {
    const report = reports[reports.length - 1];
    const doc = applyReport("search_steps", report, { "search_steps:s0": 2 });
    const probe = doc.widgets.find((w) => w.kind === "probe" && w.label === "mid");
    const notFound = probe && probe.kind === "probe"
      ? probe.rows.find((r) => r.exampleName === "Not Found") : undefined;
    expect(notFound?.cells.map((c) => c.text)).toEqual(["4"]);
  });

  it("renders faded lines dimmed", async () => {
    // with Found enabled the return mid line is covered; disable it again
    const count = reports.length;
    send({ type: "set_annotation", payload: {
      module: "search_steps", line: 2, kind: "example",
      annotation: { name: "Found", enabled: false, this: "null",
                    params: { key: '"e"', array: "@template:letters" } },
    }});
    send({ type: "evaluate" });
    const report = await nextReport(count);
    const doc = applyReport("search_steps", report);
    expect(doc.fadedLines.has(11)).toBe(true);  // `return mid;`
    const html = renderDocument(doc);
    expect(html).toContain('class="line faded" data-line="11"');
  }, 20_000);

  it("shows an error badge whose hover text is the engine's message", async () => {
    const errorsSource = readFileSync(join(FIXTURES, "errors.baby"), "utf-8");
    send({ type: "open_session", payload: {
      modules: { errors: errorsSource },
      templates,
      config: { debounce_ms: 60_000 },
    }});
    const count = reports.length;
    send({ type: "evaluate" });
    const report = await nextReport(count);
    const section = report.modules.errors;
    const bad = section.examples.find((e) => e.name === "Not an AST");
    expect(bad?.status).toBe("error");
    const doc = applyReport("errors", report);
    const widget = doc.widgets.find((w) => w.kind === "example" && w.name === "Not an AST");
    expect(widget && widget.kind === "example" && widget.errorBadge).toBe(true);
    expect(widget && widget.kind === "example" && widget.hoverText).toBe(bad?.error);
    const html = renderDocument(doc);
    expect(html).toContain(`title="${bad?.error}"`);
  }, 20_000);
});
