/**
 * Keyboard / pointer state to per-tick evader actions.
 *
 * Held arrow keys or WASD command full speed along the chosen axes;
 * a pointer drag commands a velocity proportional to the drag vector,
 * saturating at the speed limit.  No input means a zero action.  All
 * clamping here is cosmetic — the server clamps authoritatively.
 */

export interface PointerDrag {
  dx: number; // screen px, x right
  dy: number; // screen px, y down
}

export interface InputState {
  keys: Set<string>;
  drag: PointerDrag | null;
}

export function emptyInput(): InputState {
  return { keys: new Set(), drag: null };
}

const KEY_DIRS: Record<string, [number, number]> = {
  ArrowRight: [1, 0],
  ArrowLeft: [-1, 0],
  ArrowUp: [0, 1],
  ArrowDown: [0, -1],
  d: [1, 0],
  a: [-1, 0],
  w: [0, 1],
  s: [0, -1],
};

/** Pixels of drag that correspond to full speed. */
export const DRAG_FULL_SCALE_PX = 80;

/**
 * Map the current input to an action vector under the box speed limit.
 * Keys dominate an active drag; each axis saturates independently.
 */
export function inputToAction(input: InputState, uMax: number): [number, number] {
  let ux = 0;
  let uy = 0;
  let keyed = false;
  for (const key of input.keys) {
    const dir = KEY_DIRS[key];
    if (dir) {
      ux += dir[0];
      uy += dir[1];
      keyed = true;
    }
  }
  if (keyed) {
    return [clamp(ux, 1) * uMax, clamp(uy, 1) * uMax];
  }
  if (input.drag) {
    // screen y points down, world y up
    const fx = input.drag.dx / DRAG_FULL_SCALE_PX;
    const fy = -input.drag.dy / DRAG_FULL_SCALE_PX;
    return [clamp(fx, 1) * uMax, clamp(fy, 1) * uMax];
  }
  return [0, 0];
}

function clamp(v: number, lim: number): number {
  return Math.max(-lim, Math.min(lim, v));
}
