// Pure rendering: decomposition JSON in, SVG string out. No physics, no
// state; the same input always yields byte-identical markup, which is what
// the snapshot tests pin down.

import { centroid, hullPath, Point } from "./hull.js";
import { Decomposition } from "./types.js";

const WIDTH = 520;
const HEIGHT = 420;
const NODE_R = 16;

const EDGE_COLORS = ["#e4572e", "#2e86ab", "#57a773", "#9349bf", "#c29f2d", "#d05c7a"];

export function modePositions(modes: string[]): Map<string, Point> {
  const out = new Map<string, Point>();
  const cx = WIDTH / 2;
  const cy = HEIGHT / 2 - 10;
  const radius = Math.min(150, 60 + 18 * modes.length);
  modes.forEach((mode, i) => {
    const angle = (2 * Math.PI * i) / modes.length - Math.PI / 2;
    out.set(mode, {
      x: cx + radius * Math.cos(angle),
      y: cy + radius * Math.sin(angle),
    });
  });
  return out;
}

export function formatWeight(value: number): string {
  const rounded = Number(value.toPrecision(4));
  return String(rounded);
}

function monomialText(powers: Record<string, number>): string {
  return Object.keys(powers)
    .sort()
    .map((m) => (powers[m] === 1 ? m : `${m}^${powers[m]}`))
    .join("·");
}

export function renderGraph(view: Decomposition): string {
  const pos = modePositions(view.modes);
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
      `class="graph" data-hash="${view.hash}">`,
  );

  // hyperedges first (under the nodes); order >= 3 as padded hulls,
  // order 2 as straight edges, order 1 as a ring around the node
  view.edges.forEach((edge, idx) => {
    const color = EDGE_COLORS[idx % EDGE_COLORS.length];
    const points = edge.modes
      .map((m) => pos.get(m))
      .filter((p): p is Point => p !== undefined);
    if (points.length === 0) return;
    const label = formatWeight(edge.weight);
    const full = String(edge.weight);
    if (points.length === 1) {
      const p = points[0];
      parts.push(
        `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="${NODE_R + 8}" ` +
          `fill="none" stroke="${color}" stroke-width="3"><title>${full}</title></circle>`,
      );
      parts.push(text(p.x + NODE_R + 12, p.y - 6, label, color, full));
      return;
    }
    const path = hullPath(points);
    parts.push(
      `<path d="${path}" fill="${color}" fill-opacity="0.18" stroke="${color}" ` +
        `stroke-opacity="0.55" stroke-width="${points.length > 2 ? 34 : 22}" ` +
        `stroke-linejoin="round" stroke-linecap="round"><title>${full}</title></path>`,
    );
    const c = centroid(points);
    parts.push(text(c.x, c.y - 4, label, color, full));
  });

  // decorations as dashed badges attached to their modes
  view.decorations.forEach((deco, idx) => {
    const points = Object.keys(deco.monomial)
      .sort()
      .map((m) => pos.get(m))
      .filter((p): p is Point => p !== undefined);
    if (points.length === 0) return;
    const c = centroid(points);
    const bx = c.x + 40;
    const by = c.y + 40 + 14 * idx;
    for (const p of points) {
      parts.push(
        `<line x1="${bx.toFixed(1)}" y1="${by.toFixed(1)}" x2="${p.x.toFixed(1)}" ` +
          `y2="${p.y.toFixed(1)}" stroke="#777" stroke-dasharray="4 3" stroke-width="1"/>`,
      );
    }
    const label = `${formatWeight(deco.coeff)} ${monomialText(deco.monomial)}`;
    parts.push(
      `<g class="decoration"><rect x="${(bx - 34).toFixed(1)}" y="${(by - 11).toFixed(1)}" ` +
        `width="68" height="18" rx="4" fill="#fff" stroke="#777" stroke-dasharray="4 3"/>` +
        `${text(bx, by + 3, label, "#444", String(deco.coeff))}</g>`,
    );
  });

  // nodes on top; measured modes are gone from view.modes by construction
  for (const mode of view.modes) {
    const p = pos.get(mode)!;
    parts.push(
      `<g class="mode"><circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="${NODE_R}" ` +
        `fill="#fdfdfd" stroke="#333" stroke-width="1.5"/>` +
        `${text(p.x, p.y + 4, mode, "#222")}</g>`,
    );
  }

  const status = view.terminal
    ? "terminal (momentum measurement)"
    : view.is_standard
      ? `standard hypergraph, order ${view.order}`
      : `order ${view.order} with decorations`;
  parts.push(text(WIDTH / 2, HEIGHT - 12, status, "#555"));
  parts.push("</svg>");
  return parts.join("\n");
}

function text(x: number, y: number, content: string, fill: string, title?: string): string {
  const t = title ? `<title>${title}</title>` : "";
  return (
    `<text x="${x.toFixed(1)}" y="${y.toFixed(1)}" text-anchor="middle" ` +
    `font-size="12" fill="${fill}">${t}${escapeXml(content)}</text>`
  );
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
