/**
 * Entry point: wires the canvas, input listeners, and the session
 * client into a single state store driven by the browser event loop.
 * One Action goes out per StateUpdate received; the HUD echoes exactly
 * what was sent.
 */
import { fitPoints, makeCamera } from "./camera.js";
import { InputState, emptyInput, inputToAction } from "./input.js";
import { ConnectionStatus, SessionClient } from "./net.js";
import { ServerMessage, StateUpdate, action } from "./protocol.js";
import { HudInfo, render } from "./render.js";

const params = new URLSearchParams(location.search);
const BRIDGE_URL = params.get("bridge") ?? "ws://127.0.0.1:7600";

const canvas = document.getElementById("arena") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const cam = makeCamera(canvas.width, canvas.height);

interface Store {
  state: StateUpdate | null;
  uMax: number;
  input: InputState;
  status: ConnectionStatus;
  statusDetail?: string;
  lastAction: [number, number];
  outcome?: string;
  frames: number;
  fps: number;
}

const store: Store = {
  state: null,
  uMax: 1,
  input: emptyInput(),
  status: "connecting",
  lastAction: [0, 0],
  frames: 0,
  fps: 0,
};

const client = new SessionClient(BRIDGE_URL, {
  onMessage: (msg: ServerMessage) => {
    switch (msg.kind) {
      case "Hello":
        store.uMax = msg.u_e_max;
        store.outcome = undefined;
        break;
      case "StateUpdate": {
        store.state = msg;
        if (msg.t === 0) fitPoints(cam, [...msg.pursuers, msg.evader]);
        const [ux, uy] = inputToAction(store.input, store.uMax);
        store.lastAction = [ux, uy];
        if (!msg.captured) client.send(action(ux, uy));
        break;
      }
      case "End":
        store.outcome = `${msg.outcome} (t=${msg.t})`;
        break;
      case "Error":
        store.statusDetail = msg.message;
        break;
    }
  },
  onStatus: (status, detail) => {
    store.status = status;
    store.statusDetail = detail;
  },
});
client.connect();

window.addEventListener("keydown", (ev) => {
  if (ev.key === "c") cam.followEvader = !cam.followEvader;
  else store.input.keys.add(ev.key);
});
window.addEventListener("keyup", (ev) => store.input.keys.delete(ev.key));
window.addEventListener("blur", () => store.input.keys.clear());

let dragStart: [number, number] | null = null;
canvas.addEventListener("pointerdown", (ev) => {
  dragStart = [ev.offsetX, ev.offsetY];
  canvas.setPointerCapture(ev.pointerId);
});
canvas.addEventListener("pointermove", (ev) => {
  if (dragStart) {
    store.input.drag = { dx: ev.offsetX - dragStart[0], dy: ev.offsetY - dragStart[1] };
  }
});
canvas.addEventListener("pointerup", () => {
  dragStart = null;
  store.input.drag = null;
});

setInterval(() => {
  store.fps = store.frames;
  store.frames = 0;
}, 1000);

function frame(): void {
  store.frames += 1;
  const hud: HudInfo = {
    status: store.status,
    statusDetail: store.statusDetail,
    action: store.lastAction,
    outcome: store.outcome,
    fps: store.fps,
  };
  render(ctx, cam, store.state, hud);
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
