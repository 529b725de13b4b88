/**
 * Headless scripted session: connects straight to the service over TCP
 * (lockstep mode expected), plays a seeded deterministic action
 * sequence, and prints the full session as JSON on stdout:
 *
 *   { hello, states: [StateUpdate...], actions: [[ux,uy]...], end }
 *
 * The action log plus the state log let an offline replay check the
 * round trip bit-for-bit.
 *
 * Usage: node dist/scripts/scripted_client.js --connect 127.0.0.1:7500 [--seed 13]
 */
import net from "node:net";
import process from "node:process";
import {
  LineSplitter,
  ServerMessage,
  action,
  decodeMessage,
  encodeMessage,
} from "../src/protocol.js";

function arg(name: string, fallback: string): string {
  const i = process.argv.indexOf(`--${name}`);
  return i >= 0 && process.argv[i + 1] ? process.argv[i + 1] : fallback;
}

/** mulberry32 — tiny deterministic PRNG, uniform in [0, 1). */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const [host, portStr] = arg("connect", "127.0.0.1:7500").split(":");
const seed = Number(arg("seed", "13"));
const rand = mulberry32(seed);

const session: {
  hello: ServerMessage | null;
  states: ServerMessage[];
  actions: [number, number][];
  end: ServerMessage | null;
} = { hello: null, states: [], actions: [], end: null };

let uMax = 1;
const splitter = new LineSplitter();
const sock = net.createConnection({ host, port: Number(portStr) });
sock.setNoDelay(true);

sock.on("data", (chunk: Buffer) => {
  for (const line of splitter.push(chunk.toString("utf8"))) {
    const msg = decodeMessage(line);
    switch (msg.kind) {
      case "Hello":
        session.hello = msg;
        uMax = msg.u_e_max;
        break;
      case "StateUpdate": {
        session.states.push(msg);
        if (!msg.captured) {
          const ux = (rand() * 2 - 1) * uMax;
          const uy = (rand() * 2 - 1) * uMax;
          session.actions.push([ux, uy]);
          sock.write(encodeMessage(action(ux, uy)));
        }
        break;
      }
      case "End":
        session.end = msg;
        process.stdout.write(JSON.stringify(session));
        sock.end();
        break;
      case "Error":
        console.error(`server error: ${(msg as { message?: string }).message}`);
        process.exitCode = 1;
        sock.end();
        break;
    }
  }
});

sock.on("error", (err: Error) => {
  console.error(`connect failed: ${err.message}`);
  process.exit(1);
});
