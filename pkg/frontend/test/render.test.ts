import { describe, expect, it } from "vitest";
import { buildViewModel } from "../src/model.js";
import { el, renderGraph, toSvgString, type SvgNode } from "../src/render.js";
import { loadView } from "./fixtures.js";

function lines(svg: SvgNode): SvgNode[] {
  return svg.children.filter((c) => c.tag === "line");
}

function groups(svg: SvgNode): SvgNode[] {
  return svg.children.filter((c) => c.tag === "g");
}

function lineWithClass(svg: SvgNode, cls: string): SvgNode {
  const found = lines(svg).find((l) =>
    String(l.attrs["class"]).split(" ").includes(cls),
  );
  if (!found) {
    throw new Error(`no line with class ${cls}`);
  }
  return found;
}

function groupFor(svg: SvgNode, vertex: string): SvgNode {
  const found = groups(svg).find((g) => g.attrs["data-vertex"] === vertex);
  if (!found) {
    throw new Error(`no vertex group for ${vertex}`);
  }
  return found;
}

describe("renderGraph", () => {
  it("draws one line per edge and one labelled group per vertex", () => {
    const model = buildViewModel(loadView("butterfly_after_b"));
    const svg = renderGraph(model);

    expect(svg.tag).toBe("svg");
    expect(svg.attrs["viewBox"]).toBe("0 0 640 400");
    expect(lines(svg)).toHaveLength(3);
    expect(groups(svg)).toHaveLength(3);
    const label = groupFor(svg, "B").children.find((c) => c.tag === "text");
    expect(label?.text).toBe("B");
  });

  it("highlights the probed edge in red on top of its kind style", () => {
    const svg = renderGraph(buildViewModel(loadView("butterfly_after_b")));

    const selected = lineWithClass(svg, "edge-selected");
    expect(String(selected.attrs["class"]).split(" ")).toEqual([
      "edge",
      "edge-uncertain",
      "edge-selected",
    ]);
    expect(selected.attrs["stroke"]).toBe("#d32f2f");
    expect(selected.attrs["stroke-width"]).toBe(2.6);
    expect(selected.attrs["stroke-dasharray"]).toBe("7 5");
  });

  it("distinguishes kinds by dash pattern", () => {
    const afterB = renderGraph(buildViewModel(loadView("butterfly_after_b")));
    expect(lineWithClass(afterB, "edge-candidate").attrs["stroke-dasharray"]).toBe(
      "2 5",
    );

    const emitted = renderGraph(buildViewModel(loadView("butterfly_emitted")));
    const kept = lineWithClass(emitted, "edge-kept");
    expect(kept.attrs["stroke"]).toBe("#37474f");
    expect(kept.attrs["stroke-dasharray"]).toBeUndefined();
    expect(lineWithClass(emitted, "edge-blocked").attrs["stroke-dasharray"]).toBe(
      "1 4",
    );
  });

  it("styles endpoints, conditioned, and candidate vertices", () => {
    const afterB = renderGraph(buildViewModel(loadView("butterfly_after_b")));
    expect(String(groupFor(afterB, "X").attrs["class"])).toContain(
      "vertex-endpoint",
    );
    expect(String(groupFor(afterB, "B").attrs["class"])).toContain(
      "vertex-candidate",
    );

    const mid = renderGraph(buildViewModel(loadView("butterfly_mid")));
    expect(String(groupFor(mid, "B").attrs["class"])).toContain(
      "vertex-conditioned",
    );
    const circle = groupFor(mid, "B").children.find((c) => c.tag === "circle");
    expect(circle?.attrs["fill"]).toBe("#fff9c4");
  });

  it("positions edge endpoints where the layout put the vertices", () => {
    const svg = renderGraph(buildViewModel(loadView("butterfly_initial")));

    const [line] = lines(svg);
    const xCircle = groupFor(svg, "X").children.find((c) => c.tag === "circle");
    const yCircle = groupFor(svg, "Y").children.find((c) => c.tag === "circle");
    expect(line?.attrs["x1"]).toBe(xCircle?.attrs["cx"]);
    expect(line?.attrs["y1"]).toBe(xCircle?.attrs["cy"]);
    expect(line?.attrs["x2"]).toBe(yCircle?.attrs["cx"]);
    expect(line?.attrs["y2"]).toBe(yCircle?.attrs["cy"]);
  });
});

describe("toSvgString", () => {
  it("serializes nested nodes with their attributes", () => {
    const node = el("svg", { width: 10 }, [
      el("line", { x1: 0, class: "edge" }),
    ]);

    expect(toSvgString(node)).toBe(
      '<svg width="10"><line x1="0" class="edge"></line></svg>',
    );
  });

  it("escapes markup in attribute values and text", () => {
    const node = el("text", { title: 'a"b<c>&' }, [], "x < & y");

    expect(toSvgString(node)).toBe(
      '<text title="a&quot;b&lt;c&gt;&amp;">x &lt; &amp; y</text>',
    );
  });
});
