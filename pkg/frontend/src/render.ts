/** Canvas rendering of the board: points, disks, overlays.
 *
 * Disk radii are exactly 1 in world units; their screen size comes only
 * from the viewport transform, so verified packings never overlap beyond
 * antialiasing.
 */

import type { BoardState } from "./state";
import { Viewport, worldToScreen } from "./transform";
import type { Pt } from "./types";

// Rectangle of the hard configuration, for the optional outline overlay.
const HOLE_R = 2 / Math.sqrt(3) - 1;
export const RECT_W = 2 + 4 * HOLE_R;
export const RECT_H = 1 + 3 * HOLE_R;

export interface Ctx2D {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  rect(x: number, y: number, w: number, h: number): void;
  fill(): void;
  stroke(): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  globalAlpha: number;
}

const COLORS = {
  background: "#fafafa",
  diskFill: "rgba(110, 160, 210, 0.35)",
  diskEdge: "#47708f",
  point: "#1d7a30",
  pointUncovered: "#c01f3c",
  pointSelected: "#222",
  overlay: "rgba(180, 60, 140, 0.35)",
  rectangle: "#666",
};

export function drawBoard(ctx: Ctx2D, vp: Viewport, board: BoardState): void {
  ctx.globalAlpha = 1;
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, vp.width, vp.height);

  if (board.showOverlay && board.overlay) {
    drawOverlay(ctx, vp, board);
  }
  if (board.showRectangle) {
    drawRectangle(ctx, vp);
  }

  for (const center of board.disks()) {
    drawDisk(ctx, vp, center);
  }

  const uncovered = board.uncoveredIndices();
  board.points.forEach((p, i) => {
    const [px, py] = worldToScreen(vp, p[0], p[1]);
    ctx.beginPath();
    ctx.arc(px, py, i === board.selected ? 6 : 4.5, 0, 2 * Math.PI);
    ctx.fillStyle = uncovered.has(i)
      ? COLORS.pointUncovered
      : i === board.selected
        ? COLORS.pointSelected
        : COLORS.point;
    ctx.fill();
  });
}

function drawDisk(ctx: Ctx2D, vp: Viewport, center: Pt): void {
  const [px, py] = worldToScreen(vp, center[0], center[1]);
  ctx.beginPath();
  ctx.arc(px, py, 1 * vp.scale, 0, 2 * Math.PI);
  ctx.fillStyle = COLORS.diskFill;
  ctx.fill();
  ctx.strokeStyle = COLORS.diskEdge;
  ctx.lineWidth = 1.2;
  ctx.stroke();
}

function drawRectangle(ctx: Ctx2D, vp: Viewport): void {
  const [x0, y0] = worldToScreen(vp, -RECT_W / 2, RECT_H / 2);
  ctx.strokeStyle = COLORS.rectangle;
  ctx.lineWidth = 1.5;
  ctx.strokeRect(x0, y0, RECT_W * vp.scale, RECT_H * vp.scale);
}

function drawOverlay(ctx: Ctx2D, vp: Viewport, board: BoardState): void {
  const raster = board.overlay!;
  const [x0, y0, x1, y1] = raster.bbox;
  const res = raster.res;
  const cellW = ((x1 - x0) / res) * vp.scale;
  const cellH = ((y1 - y0) / res) * vp.scale;
  ctx.fillStyle = COLORS.overlay;
  for (let row = 0; row < res; row++) {
    for (let col = 0; col < res; col++) {
      if (raster.mask[row][col]) {
        const wx = x0 + (col / res) * (x1 - x0);
        const wy = y1 - (row / res) * (y1 - y0);
        const [px, py] = worldToScreen(vp, wx, wy);
        ctx.fillRect(px, py, cellW + 0.5, cellH + 0.5);
      }
    }
  }
}
