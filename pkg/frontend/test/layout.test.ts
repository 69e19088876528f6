import { describe, expect, it } from "vitest";
import { layoutGraph } from "../src/layout.js";

describe("layoutGraph", () => {
  it("pins the treatment to the left edge and the outcome to the right", () => {
    const points = layoutGraph(["X", "Y", "B"], "X", "Y", {
      width: 640,
      height: 400,
      margin: 70,
    });

    expect(points.get("X")).toEqual({ x: 70, y: 200 });
    expect(points.get("Y")).toEqual({ x: 570, y: 200 });
  });

  it("places every vertex at a distinct position", () => {
    const names = ["X", "Y", "A", "B", "C", "D", "E", "F", "G"];
    const points = layoutGraph(names, "X", "Y");

    expect(points.size).toBe(names.length);
    const seen = new Set(
      [...points.values()].map((p) => `${p.x.toFixed(3)},${p.y.toFixed(3)}`),
    );
    expect(seen.size).toBe(names.length);
  });

  it("keeps interior vertices strictly between the pinned columns", () => {
    const points = layoutGraph(["X", "Y", "A", "B", "C", "D", "E"], "X", "Y", {
      width: 640,
      margin: 70,
    });

    for (const [name, p] of points) {
      if (name === "X" || name === "Y") {
        continue;
      }
      expect(p.x).toBeGreaterThan(70);
      expect(p.x).toBeLessThan(570);
    }
  });

  it("is deterministic and independent of input order", () => {
    const forward = layoutGraph(["X", "Y", "A", "B", "C"], "X", "Y");
    const shuffled = layoutGraph(["C", "B", "Y", "A", "X"], "X", "Y");

    expect(shuffled).toEqual(forward);
  });

  it("stacks few vertices in one column and overflows into more", () => {
    const one = layoutGraph(["X", "Y", "A", "B", "C", "D"], "X", "Y", {
      perColumn: 4,
    });
    const oneXs = new Set(
      ["A", "B", "C", "D"].map((v) => one.get(v)!.x.toFixed(3)),
    );
    expect(oneXs.size).toBe(1);

    const two = layoutGraph(["X", "Y", "A", "B", "C", "D", "E"], "X", "Y", {
      perColumn: 4,
    });
    const twoXs = new Set(
      ["A", "B", "C", "D", "E"].map((v) => two.get(v)!.x.toFixed(3)),
    );
    expect(twoXs.size).toBe(2);
  });

  it("handles a graph with only the two endpoints", () => {
    const points = layoutGraph(["X", "Y"], "X", "Y");

    expect(points.size).toBe(2);
  });
});
