// Object inspector: an expandable tree over a value snapshot. Clicking a
// probe value opens the captured (immutable) snapshot, not the live object.

import type { Snapshot } from "./protocol.js";
import { identityGlyph } from "./state.js";

export type InspectorNode = {
  name: string;
  display: string;
  typeTag: string;
  identity?: number;
  glyph?: string;
  children: InspectorNode[];
  note?: "truncated" | "cycle";
};

function display(snapshot: Snapshot): string {
  if (snapshot.cycle) return "<cycle>";
  if (snapshot.truncated) return "…";
  if (snapshot.items !== undefined) return `Array(${snapshot.items.length})`;
  if (snapshot.fields !== undefined) return snapshot.type === "object" ? "{…}" : snapshot.type;
  if (snapshot.type === "string") return JSON.stringify(snapshot.value);
  if (snapshot.type === "null") return "null";
  if (snapshot.type === "function") return "<function>";
  if (snapshot.value !== undefined) return String(snapshot.value);
  return `<${snapshot.type}>`;
}

export function inspect(snapshot: Snapshot, name = "value"): InspectorNode {
  const node: InspectorNode = {
    name,
    display: display(snapshot),
    typeTag: snapshot.type,
    children: [],
  };
  if (snapshot.id !== undefined) {
    node.identity = snapshot.id;
    node.glyph = identityGlyph(snapshot.id);
  }
  if (snapshot.cycle) node.note = "cycle";
  else if (snapshot.truncated) node.note = "truncated";
  if (snapshot.items !== undefined) {
    node.children = snapshot.items.map((item, i) => inspect(item, String(i)));
  } else if (snapshot.fields !== undefined) {
    node.children = Object.entries(snapshot.fields).map(([key, value]) => inspect(value, key));
  }
  return node;
}
