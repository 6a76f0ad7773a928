import { describe, expect, it } from "vitest";

import { convexHull, hullPath } from "../src/hull.js";
import { formatWeight, modePositions, renderGraph } from "../src/render.js";
import { Decomposition } from "../src/types.js";

function view(partial: Partial<Decomposition>): Decomposition {
  return {
    modes: ["A", "B", "C", "D"],
    edges: [],
    decorations: [],
    constant: 0,
    order: 0,
    is_standard: true,
    terminal: false,
    measurements: [],
    history_length: 0,
    hash: "h0",
    ...partial,
  };
}

const FIG2A = view({
  edges: [
    { modes: ["A", "D"], weight: 2 },
    { modes: ["A", "B", "C"], weight: 1 },
  ],
  order: 3,
});

describe("convex hull", () => {
  it("drops interior points", () => {
    const hull = convexHull([
      { x: 0, y: 0 },
      { x: 4, y: 0 },
      { x: 0, y: 4 },
      { x: 1, y: 1 },
    ]);
    expect(hull).toHaveLength(3);
  });

  it("keeps degenerate inputs", () => {
    expect(convexHull([{ x: 1, y: 2 }])).toHaveLength(1);
    expect(hullPath([])).toBe("");
    expect(hullPath([{ x: 0, y: 0 }, { x: 2, y: 0 }])).toBe("M 0.0 0.0 L 2.0 0.0 Z");
  });
});

describe("graph rendering", () => {
  it("is a pure function of the decomposition", () => {
    expect(renderGraph(FIG2A)).toBe(renderGraph(FIG2A));
  });

  it("matches the pinned snapshot", () => {
    expect(renderGraph(FIG2A)).toMatchSnapshot();
  });

  it("renders every structural element", () => {
    const svg = renderGraph(
      view({
        edges: [
          { modes: ["B"], weight: -2 },
          { modes: ["A", "D"], weight: 2.5 },
          { modes: ["A", "B", "C"], weight: 1 },
        ],
        decorations: [{ monomial: { B: 2 }, coeff: 1 }],
        order: 3,
        is_standard: false,
      }),
    );
    expect(svg).toContain("data-hash=\"h0\"");
    expect((svg.match(/<g class="mode">/g) ?? []).length).toBe(4);
    expect(svg).toContain("stroke-dasharray");          // decoration badge
    expect(svg).toContain("order 3 with decorations"); // status line
    expect(svg).toContain("-2");                        // unary edge label
  });

  it("shows four significant digits with full precision on hover", () => {
    expect(formatWeight(2 * Math.exp(-1))).toBe("0.7358");
    const svg = renderGraph(
      view({ edges: [{ modes: ["A", "D"], weight: 2 * Math.exp(-1) }] }),
    );
    expect(svg).toContain(">0.7358<");
    expect(svg).toContain(`<title>${2 * Math.exp(-1)}</title>`);
  });

  it("marks terminal states", () => {
    const svg = renderGraph(view({ terminal: true, modes: ["B", "C"] }));
    expect(svg).toContain("terminal (momentum measurement)");
  });

  it("lays modes out deterministically", () => {
    const pos = modePositions(["A", "B", "C"]);
    expect(pos.get("A")).toEqual(modePositions(["A", "B", "C"]).get("A"));
    expect(pos.size).toBe(3);
  });
});
