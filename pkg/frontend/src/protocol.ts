/**
 * Wire protocol for the pursuit session service.
 *
 * Newline-delimited JSON, one message per line, every message tagged
 * with `v` (protocol version) and `kind`.  See docs/protocol.md in the
 * repository root for the full schema.
 */

export const PROTOCOL_VERSION = 1;

export interface Hello {
  kind: "Hello";
  v: number;
  tick_rate: number;
  u_e_max: number;
  capture_radius: number;
  t: number;
}

export interface StateUpdate {
  kind: "StateUpdate";
  v: number;
  t: number;
  pursuers: [number, number][];
  evader: [number, number];
  sector_rays: number[];
  hull: [number, number][];
  capture_radius: number;
  encircled: boolean;
  captured: boolean;
  hull_signed_dist: number;
}

export interface End {
  kind: "End";
  v: number;
  outcome: string;
  t: number;
}

export interface ErrorMsg {
  kind: "Error";
  v: number;
  message: string;
}

export interface Action {
  kind: "Action";
  v: number;
  ux: number;
  uy: number;
}

export interface Reset {
  kind: "Reset";
  v: number;
  scenario?: string;
}

export type ServerMessage = Hello | StateUpdate | End | ErrorMsg;
export type ClientMessage = Action | Reset;

export class ProtocolError extends Error {}

/** Serialize a client message to one wire line (with trailing newline). */
export function encodeMessage(msg: ClientMessage): string {
  return JSON.stringify({ ...msg, v: PROTOCOL_VERSION }) + "\n";
}

/** Parse one wire line into a server message, checking shape and version. */
export function decodeMessage(line: string): ServerMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(line);
  } catch {
    throw new ProtocolError(`not JSON: ${line.slice(0, 80)}`);
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new ProtocolError("message is not an object");
  }
  const msg = raw as Record<string, unknown>;
  if (msg.v !== PROTOCOL_VERSION) {
    throw new ProtocolError(`protocol version ${msg.v}, expected ${PROTOCOL_VERSION}`);
  }
  if (typeof msg.kind !== "string") {
    throw new ProtocolError("message has no kind");
  }
  switch (msg.kind) {
    case "Hello":
    case "StateUpdate":
    case "End":
    case "Error":
      return msg as unknown as ServerMessage;
    default:
      throw new ProtocolError(`unknown message kind ${msg.kind}`);
  }
}

export function action(ux: number, uy: number): Action {
  return { kind: "Action", v: PROTOCOL_VERSION, ux, uy };
}

/** Accumulates stream chunks and yields complete lines. */
export class LineSplitter {
  private buffer = "";

  push(chunk: string): string[] {
    this.buffer += chunk;
    const lines = this.buffer.split("\n");
    this.buffer = lines.pop() ?? "";
    return lines.filter((l) => l.length > 0);
  }
}
