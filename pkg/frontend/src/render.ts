/**
 * Canvas rendering of one StateUpdate.
 *
 * Pursuers are red markers, the evader blue, hull edges grey lines,
 * sector rays dashed from the evader, the capture radius a red circle
 * around the nearest threat, and the commanded control a green arrow.
 * The hull drawn is exactly the vertex list the server sent — no game
 * logic runs client-side.
 */
import { Camera, updateCenter, worldToScreen } from "./camera.js";
import { StateUpdate } from "./protocol.js";
import { ConnectionStatus } from "./net.js";

export interface HudInfo {
  status: ConnectionStatus;
  statusDetail?: string;
  action: [number, number];
  outcome?: string;
  fps: number;
}

const RAY_LEN = 400; // world units; rays are unbounded, draw them long

export function render(
  ctx: CanvasRenderingContext2D,
  cam: Camera,
  state: StateUpdate | null,
  hud: HudInfo,
): void {
  ctx.fillStyle = "#101418";
  ctx.fillRect(0, 0, cam.width, cam.height);
  if (!state) {
    drawBanner(ctx, cam, hud);
    return;
  }
  updateCenter(cam, state.evader);

  // sector rays, anchored at the evader
  ctx.strokeStyle = "#4a5568";
  ctx.setLineDash([6, 6]);
  for (const angle of state.sector_rays) {
    const tip: [number, number] = [
      state.evader[0] + RAY_LEN * Math.cos(angle),
      state.evader[1] + RAY_LEN * Math.sin(angle),
    ];
    line(ctx, cam, state.evader, tip);
  }
  ctx.setLineDash([]);

  // convex hull of the team, as sent
  if (state.hull.length >= 2) {
    ctx.strokeStyle = "#a0aec0";
    ctx.beginPath();
    const first = worldToScreen(cam, state.hull[0]);
    ctx.moveTo(first[0], first[1]);
    for (const v of state.hull.slice(1)) {
      const s = worldToScreen(cam, v);
      ctx.lineTo(s[0], s[1]);
    }
    ctx.closePath();
    ctx.stroke();
  }

  // capture radius around the evader
  const evaderPx = worldToScreen(cam, state.evader);
  ctx.strokeStyle = "#e53e3e55";
  ctx.beginPath();
  ctx.arc(evaderPx[0], evaderPx[1], state.capture_radius * cam.scale, 0, 2 * Math.PI);
  ctx.stroke();

  // agents
  for (const p of state.pursuers) {
    dot(ctx, cam, p, "#e53e3e", 5);
  }
  dot(ctx, cam, state.evader, "#3182ce", 6);

  // commanded control as a green arrow from the evader
  const [ux, uy] = hud.action;
  if (ux !== 0 || uy !== 0) {
    const tip: [number, number] = [
      state.evader[0] + ux * 8,
      state.evader[1] + uy * 8,
    ];
    ctx.strokeStyle = "#48bb78";
    ctx.lineWidth = 2;
    line(ctx, cam, state.evader, tip);
    ctx.lineWidth = 1;
  }

  drawHud(ctx, state, hud);
  drawBanner(ctx, cam, hud);
}

function drawHud(ctx: CanvasRenderingContext2D, state: StateUpdate, hud: HudInfo): void {
  ctx.fillStyle = "#e2e8f0";
  ctx.font = "13px monospace";
  const dists = state.pursuers.map((p) =>
    Math.hypot(p[0] - state.evader[0], p[1] - state.evader[1]),
  );
  const lines = [
    `t=${state.t}  fps=${hud.fps.toFixed(0)}`,
    `min pursuer dist: ${Math.min(...dists).toFixed(2)}`,
    `hull signed dist: ${state.hull_signed_dist.toFixed(2)}`,
    `encircled: ${state.encircled}  captured: ${state.captured}`,
    `action: (${hud.action[0].toFixed(2)}, ${hud.action[1].toFixed(2)})`,
  ];
  if (hud.outcome) lines.push(`outcome: ${hud.outcome}`);
  lines.forEach((text, i) => ctx.fillText(text, 10, 20 + 16 * i));
}

function drawBanner(ctx: CanvasRenderingContext2D, cam: Camera, hud: HudInfo): void {
  if (hud.status === "open") return;
  const msg =
    hud.status === "error"
      ? `protocol error: ${hud.statusDetail ?? ""}`
      : `${hud.status} — reconnecting…`;
  ctx.fillStyle = "#742a2a";
  ctx.fillRect(0, cam.height - 28, cam.width, 28);
  ctx.fillStyle = "#fff5f5";
  ctx.font = "13px monospace";
  ctx.fillText(msg, 10, cam.height - 10);
}

function line(
  ctx: CanvasRenderingContext2D,
  cam: Camera,
  a: [number, number],
  b: [number, number],
): void {
  const sa = worldToScreen(cam, a);
  const sb = worldToScreen(cam, b);
  ctx.beginPath();
  ctx.moveTo(sa[0], sa[1]);
  ctx.lineTo(sb[0], sb[1]);
  ctx.stroke();
}

function dot(
  ctx: CanvasRenderingContext2D,
  cam: Camera,
  p: [number, number],
  color: string,
  r: number,
): void {
  const s = worldToScreen(cam, p);
  ctx.fillStyle = color;
  ctx.beginPath();
  ctx.arc(s[0], s[1], r, 0, 2 * Math.PI);
  ctx.fill();
}
