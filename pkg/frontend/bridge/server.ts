/**
 * WebSocket <-> TCP relay.
 *
 * Browsers cannot open raw TCP sockets, so this small Node process
 * accepts a WebSocket connection and pipes newline-delimited JSON both
 * ways to the pursuit service without touching the payload.  One
 * WebSocket client maps to one TCP connection; closing either side
 * closes the other (the service then pauses until someone reconnects).
 *
 * Usage: node dist/bridge/server.js [--listen 7600] [--connect 127.0.0.1:7500]
 */
import net from "node:net";
import process from "node:process";
import { WebSocketServer, WebSocket } from "ws";

function arg(name: string, fallback: string): string {
  const i = process.argv.indexOf(`--${name}`);
  return i >= 0 && process.argv[i + 1] ? process.argv[i + 1] : fallback;
}

const listenPort = Number(arg("listen", "7600"));
const [serviceHost, servicePortStr] = arg("connect", "127.0.0.1:7500").split(":");
const servicePort = Number(servicePortStr);

const wss = new WebSocketServer({ port: listenPort });
console.log(`bridge: ws://127.0.0.1:${listenPort} <-> tcp ${serviceHost}:${servicePort}`);

wss.on("connection", (ws: WebSocket) => {
  const tcp = net.createConnection({ host: serviceHost, port: servicePort });
  tcp.setNoDelay(true);

  tcp.on("data", (chunk: Buffer) => {
    if (ws.readyState === WebSocket.OPEN) ws.send(chunk.toString("utf8"));
  });
  tcp.on("close", () => ws.close());
  tcp.on("error", (err: Error) => {
    console.error(`bridge: tcp error: ${err.message}`);
    ws.close();
  });

  ws.on("message", (data: Buffer | string) => {
    let text = typeof data === "string" ? data : data.toString("utf8");
    if (!text.endsWith("\n")) text += "\n";
    tcp.write(text);
  });
  ws.on("close", () => tcp.destroy());
  ws.on("error", () => tcp.destroy());
});
