/**
 * WebSocket session client.
 *
 * The browser cannot open raw TCP sockets, so it talks to the bridge
 * (bridge/server.ts), which relays newline-delimited JSON to the
 * pursuit service unchanged.  Auto-reconnects with backoff; the server
 * pauses the session while no client is attached, so reconnecting
 * resumes where things left off.
 */
import {
  ClientMessage,
  LineSplitter,
  ProtocolError,
  ServerMessage,
  decodeMessage,
  encodeMessage,
} from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed" | "error";

export interface SessionEvents {
  onMessage: (msg: ServerMessage) => void;
  onStatus: (status: ConnectionStatus, detail?: string) => void;
}

export class SessionClient {
  private ws: WebSocket | null = null;
  private splitter = new LineSplitter();
  private closed = false;
  private retryMs = 500;

  constructor(
    private url: string,
    private events: SessionEvents,
  ) {}

  connect(): void {
    this.closed = false;
    this.events.onStatus("connecting");
    const ws = new WebSocket(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.retryMs = 500;
      this.events.onStatus("open");
    };
    ws.onmessage = (ev) => {
      for (const line of this.splitter.push(String(ev.data))) {
        try {
          this.events.onMessage(decodeMessage(line));
        } catch (err) {
          if (err instanceof ProtocolError) {
            this.events.onStatus("error", err.message);
          } else {
            throw err;
          }
        }
      }
    };
    ws.onclose = () => {
      this.events.onStatus("closed");
      if (!this.closed) {
        setTimeout(() => this.connect(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, 5000);
      }
    };
    ws.onerror = () => {
      // onclose fires next and handles the retry
    };
  }

  send(msg: ClientMessage): void {
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(encodeMessage(msg));
    }
  }

  close(): void {
    this.closed = true;
    this.ws?.close();
  }
}
