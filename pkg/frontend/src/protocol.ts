// Wire protocol and report payload types, mirroring docs/report-schema.md.

export type Snapshot = {
  type: string;
  id?: number;
  value?: number | string | boolean;
  items?: Snapshot[];
  fields?: Record<string, Snapshot>;
  truncated?: boolean;
  cycle?: boolean;
};

export type ProbeEvent = {
  example_id: string;
  example_name: string;
  color_index: number;
  phase: "before" | "after";
  seq: number;
  iteration: [string, number][];
  value: Snapshot;
  text: string;
};

export type ProbeRow = {
  id: string;
  label: string;
  mode: string;
  line: number | null;
  target: number[] | null;
  events: ProbeEvent[];
};

export type SliderRow = {
  id: string;
  label: string;
  line: number | null;
  target: number[] | null;
  counts: Record<string, number>;
};

export type ExampleRow = {
  id: string;
  name: string;
  color_index: number;
  enabled: boolean;
  line: number | null;
  status: "ok" | "error" | "timeout" | null;
  error: string | null;
  return: Snapshot | null;
  return_text?: string | null;
  output: string[];
  covered_lines: number[];
};

export type Diagnostic = {
  severity: string;
  message: string;
  kind?: string;
  span?: number[] | null;
};

export type ModuleSection = {
  source: string;
  examples: ExampleRow[];
  probes: ProbeRow[];
  sliders: SliderRow[];
  faded_lines: number[];
  executable_lines: number[];
  eligibility: Record<string, string[]>;
  diagnostics: Diagnostic[];
  stale: boolean;
  load_output: string[];
};

export type Report = {
  revision: number;
  modules: Record<string, ModuleSection>;
  diagnostics: Diagnostic[];
  any_example_enabled: boolean;
  timings: Record<string, number>;
};

export type ServerMessage =
  | { type: "report"; revision: number; payload: Report }
  | { type: "error"; revision: number; payload: { message: string } };

export type AnnotationKind = "probe" | "slider" | "example" | "replacement" | "instance_template";

export type ClientMessage =
  | { type: "open_session"; payload: OpenSessionPayload }
  | { type: "update_source"; payload: { module: string; text: string } }
  | { type: "set_annotation"; payload: { module: string; line: number; kind: AnnotationKind; annotation?: unknown } }
  | { type: "remove_annotation"; payload: { module: string; line: number } }
  | { type: "set_resource"; payload: { name: string; binding: unknown } }
  | { type: "evaluate"; payload?: Record<string, never> };

export type OpenSessionPayload = {
  modules: Record<string, string>;
  templates?: string;
  resources?: Record<string, unknown>;
  config?: { time_budget_ms?: number; snapshot_depth?: number; debounce_ms?: number };
};

export function parseServerMessage(raw: string): ServerMessage {
  const data = JSON.parse(raw);
  if (data.type !== "report" && data.type !== "error") {
    throw new Error(`unexpected message type ${data.type}`);
  }
  return data as ServerMessage;
}
