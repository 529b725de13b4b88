import { describe, expect, it } from "vitest";
import { DRAG_FULL_SCALE_PX, emptyInput, inputToAction } from "../src/input.js";

describe("input mapping", () => {
  it("no input means a zero action", () => {
    expect(inputToAction(emptyInput(), 1)).toEqual([0, 0]);
  });

  it("a held arrow runs at full speed on its axis", () => {
    const input = emptyInput();
    input.keys.add("ArrowRight");
    expect(inputToAction(input, 1)).toEqual([1, 0]);
    expect(inputToAction(input, 0.7)).toEqual([0.7, 0]);
  });

  it("WASD matches the arrows and diagonals use the full box", () => {
    const input = emptyInput();
    input.keys.add("w");
    input.keys.add("d");
    expect(inputToAction(input, 1)).toEqual([1, 1]);
  });

  it("opposite keys cancel", () => {
    const input = emptyInput();
    input.keys.add("ArrowLeft");
    input.keys.add("ArrowRight");
    expect(inputToAction(input, 1)).toEqual([0, 0]);
  });

  it("drag is proportional and saturates at the limit", () => {
    const input = emptyInput();
    input.drag = { dx: DRAG_FULL_SCALE_PX / 2, dy: 0 };
    expect(inputToAction(input, 1)[0]).toBeCloseTo(0.5, 10);
    input.drag = { dx: 10 * DRAG_FULL_SCALE_PX, dy: -10 * DRAG_FULL_SCALE_PX };
    expect(inputToAction(input, 1)).toEqual([1, 1]);
  });

  it("screen-down drag means world-down motion", () => {
    const input = emptyInput();
    input.drag = { dx: 0, dy: DRAG_FULL_SCALE_PX };
    expect(inputToAction(input, 1)).toEqual([0, -1]);
  });

  it("keys take precedence over an active drag", () => {
    const input = emptyInput();
    input.drag = { dx: -DRAG_FULL_SCALE_PX, dy: 0 };
    input.keys.add("ArrowUp");
    expect(inputToAction(input, 1)).toEqual([0, 1]);
  });
});
