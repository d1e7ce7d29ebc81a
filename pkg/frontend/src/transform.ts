/** World-to-screen mapping with fixed aspect ratio, zoom and pan.
 *
 * World units are unit-disk radii; +y is up in world space and down on
 * screen. Optional grid snapping helps reproduce lattice layouts by hand.
 */

export interface Viewport {
  centerX: number;
  centerY: number;
  scale: number; // pixels per world unit
  width: number;
  height: number;
}

export function defaultViewport(width: number, height: number): Viewport {
  return { centerX: 0, centerY: 0, scale: Math.min(width, height) / 8, width, height };
}

export function worldToScreen(v: Viewport, x: number, y: number): [number, number] {
  return [v.width / 2 + (x - v.centerX) * v.scale, v.height / 2 - (y - v.centerY) * v.scale];
}

export function screenToWorld(v: Viewport, px: number, py: number): [number, number] {
  return [v.centerX + (px - v.width / 2) / v.scale, v.centerY - (py - v.height / 2) / v.scale];
}

export function zoom(v: Viewport, factor: number, atPx?: number, atPy?: number): Viewport {
  const scale = Math.max(4, Math.min(4000, v.scale * factor));
  if (atPx === undefined || atPy === undefined) {
    return { ...v, scale };
  }
  // Keep the world point under the cursor fixed.
  const [wx, wy] = screenToWorld(v, atPx, atPy);
  const centerX = wx - (atPx - v.width / 2) / scale;
  const centerY = wy + (atPy - v.height / 2) / scale;
  return { ...v, scale, centerX, centerY };
}

export function pan(v: Viewport, dxPx: number, dyPx: number): Viewport {
  return {
    ...v,
    centerX: v.centerX - dxPx / v.scale,
    centerY: v.centerY + dyPx / v.scale,
  };
}

export function snapToGrid(x: number, y: number, step: number): [number, number] {
  if (step <= 0) return [x, y];
  return [Math.round(x / step) * step, Math.round(y / step) * step];
}
