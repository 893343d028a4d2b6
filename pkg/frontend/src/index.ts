export * from "./protocol.js";
export * from "./state.js";
export * from "./toolbar.js";
export * from "./inspector.js";
export * from "./render.js";
export * from "./client.js";
