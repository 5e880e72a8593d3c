import type { LayoutResult } from './types.js';

export interface Point {
  x: number;
  y: number;
}

/**
 * Even-odd point-in-polygon test. The polygon is implicitly closed: the
 * last vertex connects back to the first. A horizontal ray is cast towards
 * +x and crossings are counted; odd parity means inside.
 */
export function pointInPolygon(point: Point, vertices: readonly Point[]): boolean {
  let inside = false;
  const n = vertices.length;
  for (let i = 0, j = n - 1; i < n; j = i, i += 1) {
    const a = vertices[i];
    const b = vertices[j];
    if (a.y > point.y === b.y > point.y) {
      continue; // edge does not straddle the scanline
    }
    const crossX = a.x + ((point.y - a.y) * (b.x - a.x)) / (b.y - a.y);
    if (point.x < crossX) {
      inside = !inside;
    }
  }
  return inside;
}

/**
 * Node ids whose layout center falls inside the lasso polygon. Fewer than
 * three vertices cannot enclose anything and select nothing. When a set of
 * visible ids is given, hidden nodes are not eligible.
 */
export function lassoHitTest(
  polygon: readonly Point[],
  layout: LayoutResult,
  visible?: ReadonlySet<string>,
): string[] {
  if (polygon.length < 3) {
    return [];
  }
  const selected: string[] = [];
  for (const [id, node] of Object.entries(layout.nodes)) {
    if (visible !== undefined && !visible.has(id)) {
      continue;
    }
    if (pointInPolygon({ x: node.x, y: node.y }, polygon)) {
      selected.push(id);
    }
  }
  return selected;
}

/**
 * Gray level for a summary cell: linear from white (255) at zero to dark
 * gray (64) at the column maximum. A table with no entries stays white.
 */
export function colorForCount(value: number, max: number): number {
  if (!Number.isFinite(value) || !Number.isFinite(max) || value < 0 || max < 0) {
    throw new RangeError(`counts must be non-negative numbers, got value=${value} max=${max}`);
  }
  if (value > max) {
    throw new RangeError(`value ${value} exceeds max ${max}`);
  }
  if (max === 0) {
    return 255;
  }
  return Math.round(255 - (191 * value) / max);
}

export function grayCss(level: number): string {
  return `rgb(${level}, ${level}, ${level})`;
}
