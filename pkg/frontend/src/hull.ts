// Convex hulls for hyperedge blobs. An order-k hyperedge renders as the
// padded convex hull of its member nodes: the polygon is drawn with a wide
// round-joined stroke, which reads as a smooth closed shape even for one or
// two members.

export interface Point {
  x: number;
  y: number;
}

function cross(o: Point, a: Point, b: Point): number {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

export function convexHull(points: Point[]): Point[] {
  if (points.length <= 2) return [...points];
  const sorted = [...points].sort((p, q) => p.x - q.x || p.y - q.y);
  const lower: Point[] = [];
  for (const p of sorted) {
    while (lower.length >= 2 && cross(lower[lower.length - 2], lower[lower.length - 1], p) <= 0) {
      lower.pop();
    }
    lower.push(p);
  }
  const upper: Point[] = [];
  for (const p of [...sorted].reverse()) {
    while (upper.length >= 2 && cross(upper[upper.length - 2], upper[upper.length - 1], p) <= 0) {
      upper.pop();
    }
    upper.push(p);
  }
  lower.pop();
  upper.pop();
  return lower.concat(upper);
}

export function hullPath(points: Point[]): string {
  const hull = convexHull(points);
  if (hull.length === 0) return "";
  const [first, ...rest] = hull;
  const fmt = (v: number) => v.toFixed(1);
  let path = `M ${fmt(first.x)} ${fmt(first.y)}`;
  for (const p of rest) path += ` L ${fmt(p.x)} ${fmt(p.y)}`;
  return path + " Z";
}

export function centroid(points: Point[]): Point {
  const n = points.length;
  const sum = points.reduce((acc, p) => ({ x: acc.x + p.x, y: acc.y + p.y }), { x: 0, y: 0 });
  return { x: sum.x / n, y: sum.y / n };
}
