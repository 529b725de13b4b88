import { describe, expect, it } from "vitest";
import {
  fitPoints,
  makeCamera,
  screenToWorld,
  updateCenter,
  worldToScreen,
} from "../src/camera.js";

describe("camera transform", () => {
  it("maps the center to the middle of the canvas", () => {
    const cam = makeCamera(800, 600);
    cam.center = [10, -5];
    expect(worldToScreen(cam, [10, -5])).toEqual([400, 300]);
  });

  it("flips y: world up is screen up (smaller pixel y)", () => {
    const cam = makeCamera(800, 600);
    const [, syAbove] = worldToScreen(cam, [0, 10]);
    const [, syBelow] = worldToScreen(cam, [0, -10]);
    expect(syAbove).toBeLessThan(300);
    expect(syBelow).toBeGreaterThan(300);
  });

  it("screenToWorld inverts worldToScreen", () => {
    const cam = makeCamera(640, 480);
    cam.center = [3.2, -7.5];
    cam.scale = 4.5;
    for (const p of [[0, 0], [12.5, -3], [-80, 44]] as [number, number][]) {
      const back = screenToWorld(cam, worldToScreen(cam, p));
      expect(back[0]).toBeCloseTo(p[0], 10);
      expect(back[1]).toBeCloseTo(p[1], 10);
    }
  });

  it("follow mode tracks the evader, fixed mode does not", () => {
    const cam = makeCamera(800, 600);
    updateCenter(cam, [50, 60]);
    expect(cam.center).toEqual([50, 60]);
    cam.followEvader = false;
    updateCenter(cam, [99, 99]);
    expect(cam.center).toEqual([50, 60]);
  });

  it("fitPoints keeps every point on the canvas", () => {
    const cam = makeCamera(800, 600);
    const pts: [number, number][] = [[90, -10], [-90, 30], [10, 90], [-90, -90]];
    fitPoints(cam, pts);
    for (const p of pts) {
      const [sx, sy] = worldToScreen(cam, p);
      expect(sx).toBeGreaterThanOrEqual(0);
      expect(sx).toBeLessThanOrEqual(800);
      expect(sy).toBeGreaterThanOrEqual(0);
      expect(sy).toBeLessThanOrEqual(600);
    }
  });
});
