/** Affine map between the pointer canvas and the virtual master workspace. */

import type { Vec2 } from './protocol.js';

export interface CanvasRect {
  width: number;
  height: number;
}

export interface WorkspaceRect {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

/** The desk-scale master workspace; scaled by the coupling onto the arm. */
export const DEFAULT_MASTER_WORKSPACE: WorkspaceRect = {
  xMin: 0.0,
  xMax: 0.32,
  yMin: 0.0,
  yMax: 0.12,
};

export interface MappedPointer {
  pos: Vec2;
  clamped: boolean;
}

export class WorkspaceMapping {
  constructor(
    public canvas: CanvasRect,
    public workspace: WorkspaceRect = DEFAULT_MASTER_WORKSPACE,
  ) {}

  /** Canvas pixel to master workspace position. Canvas y grows downward,
   * workspace y upward. Out-of-canvas pointers clamp to the border. */
  pointerToMaster(px: number, py: number): MappedPointer {
    const { width, height } = this.canvas;
    const w = this.workspace;
    const clamped = px < 0 || px > width || py < 0 || py > height;
    const cx = Math.min(Math.max(px, 0), width);
    const cy = Math.min(Math.max(py, 0), height);
    const x = w.xMin + (cx / width) * (w.xMax - w.xMin);
    const y = w.yMin + (1 - cy / height) * (w.yMax - w.yMin);
    return { pos: [x, y], clamped };
  }

  /** Inverse map, for drawing the master cursor echo. */
  masterToPointer(pos: Vec2): Vec2 {
    const { width, height } = this.canvas;
    const w = this.workspace;
    const px = ((pos[0] - w.xMin) / (w.xMax - w.xMin)) * width;
    const py = (1 - (pos[1] - w.yMin) / (w.yMax - w.yMin)) * height;
    return [px, py];
  }
}
