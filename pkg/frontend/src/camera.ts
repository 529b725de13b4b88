/**
 * World-to-screen transform.
 *
 * World coordinates are the game plane (y up); screen coordinates are
 * canvas pixels (y down).  The camera either stays fixed on a world
 * center or follows the evader — sectors are defined in the
 * evader-centered frame, so the follow mode keeps the rays visually
 * anchored.
 */

export interface Camera {
  center: [number, number];
  scale: number; // pixels per world unit
  width: number;
  height: number;
  followEvader: boolean;
}

export function makeCamera(width: number, height: number): Camera {
  return { center: [0, 0], scale: 3, width, height, followEvader: true };
}

export function worldToScreen(cam: Camera, p: [number, number]): [number, number] {
  return [
    cam.width / 2 + (p[0] - cam.center[0]) * cam.scale,
    cam.height / 2 - (p[1] - cam.center[1]) * cam.scale,
  ];
}

export function screenToWorld(cam: Camera, s: [number, number]): [number, number] {
  return [
    cam.center[0] + (s[0] - cam.width / 2) / cam.scale,
    cam.center[1] - (s[1] - cam.height / 2) / cam.scale,
  ];
}

/** Choose a scale so all points fit with a margin, keeping the center. */
export function fitPoints(cam: Camera, points: [number, number][], margin = 40): void {
  if (points.length === 0) return;
  let extent = 1;
  for (const p of points) {
    extent = Math.max(
      extent,
      Math.abs(p[0] - cam.center[0]),
      Math.abs(p[1] - cam.center[1]),
    );
  }
  const usable = Math.min(cam.width, cam.height) / 2 - margin;
  cam.scale = Math.max(0.05, usable / extent);
}

export function updateCenter(cam: Camera, evader: [number, number]): void {
  if (cam.followEvader) cam.center = [evader[0], evader[1]];
}
