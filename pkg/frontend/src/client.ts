// Engine connection: newline-delimited JSON over WebSocket. Reports
// supersede each other by revision; at most one evaluate request is in
// flight, later ones coalesce.

import type { AnnotationKind, ClientMessage, OpenSessionPayload, Report, ServerMessage } from "./protocol.js";
import { parseServerMessage } from "./protocol.js";

export type SocketLike = {
  send(data: string): void;
  close(): void;
  addEventListener(type: "message", listener: (event: { data: unknown }) => void): void;
  addEventListener(type: "open", listener: () => void): void;
  addEventListener(type: "close", listener: () => void): void;
};

export type EngineClientOptions = {
  onReport?: (report: Report) => void;
  onError?: (message: string) => void;
};

export class EngineClient {
  private socket: SocketLike;
  private options: EngineClientOptions;
  private evaluatePending = false;
  private evaluateInFlight = false;
  lastRevision = 0;

  constructor(socket: SocketLike, options: EngineClientOptions = {}) {
    this.socket = socket;
    this.options = options;
    socket.addEventListener("message", (event) => {
      const raw = typeof event.data === "string" ? event.data : String(event.data);
      for (const chunk of raw.split("\n")) {
        if (chunk.trim() === "") continue;
        this.handle(parseServerMessage(chunk));
      }
    });
  }

  private handle(message: ServerMessage): void {
    if (message.type === "error") {
      this.options.onError?.(message.payload.message);
      return;
    }
    this.evaluateInFlight = false;
    if (message.revision <= this.lastRevision) {
      return; // stale report superseded by a newer one
    }
    this.lastRevision = message.revision;
    this.options.onReport?.(message.payload);
    if (this.evaluatePending) {
      this.evaluatePending = false;
      this.evaluate();
    }
  }

  send(message: ClientMessage): void {
    this.socket.send(JSON.stringify(message) + "\n");
  }

  openSession(payload: OpenSessionPayload): void {
    this.send({ type: "open_session", payload });
  }

  updateSource(module: string, text: string): void {
    this.send({ type: "update_source", payload: { module, text } });
  }

  setAnnotation(module: string, line: number, kind: AnnotationKind, annotation?: unknown): void {
    this.send({ type: "set_annotation", payload: { module, line, kind, annotation } });
  }

  removeAnnotation(module: string, line: number): void {
    this.send({ type: "remove_annotation", payload: { module, line } });
  }

  evaluate(): void {
    if (this.evaluateInFlight) {
      this.evaluatePending = true;
      return;
    }
    this.evaluateInFlight = true;
    this.send({ type: "evaluate" });
  }
}
