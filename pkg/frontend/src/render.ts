/** SVG construction for the graph pane.
 *
 * Builders return plain descriptor objects so tests can assert on
 * structure; `toSvgString` serializes a descriptor for the page.
 */

import { layoutGraph, type Point } from "./layout.js";
import type { ViewModel, GraphEdge } from "./model.js";

export interface SvgNode {
  tag: string;
  attrs: Record<string, string | number>;
  children: SvgNode[];
  text?: string;
}

export function el(
  tag: string,
  attrs: Record<string, string | number> = {},
  children: SvgNode[] = [],
  text?: string,
): SvgNode {
  return { tag, attrs, children, text };
}

const EDGE_STYLE: Record<GraphEdge["kind"], Record<string, string | number>> = {
  kept: { stroke: "#37474f", "stroke-width": 1.8 },
  uncertain: { stroke: "#546e7a", "stroke-width": 1.8, "stroke-dasharray": "7 5" },
  candidate: { stroke: "#90a4ae", "stroke-width": 1.5, "stroke-dasharray": "2 5" },
  blocked: { stroke: "#cfd8dc", "stroke-width": 1.2, "stroke-dasharray": "1 4" },
};

const SELECTED_STYLE = { stroke: "#d32f2f", "stroke-width": 2.6 };

const VERTEX_RADIUS = 16;

function edgeLine(edge: GraphEdge, points: Map<string, Point>): SvgNode {
  const a = points.get(edge.a);
  const b = points.get(edge.b);
  if (!a || !b) {
    throw new Error(`edge ${edge.a}-${edge.b} has an unplaced endpoint`);
  }
  const classes = ["edge", `edge-${edge.kind}`];
  const style: Record<string, string | number> = { ...EDGE_STYLE[edge.kind] };
  if (edge.selected) {
    classes.push("edge-selected");
    Object.assign(style, SELECTED_STYLE);
  }
  return el("line", {
    class: classes.join(" "),
    x1: a.x,
    y1: a.y,
    x2: b.x,
    y2: b.y,
    ...style,
  });
}

function vertexGroup(name: string, model: ViewModel, p: Point): SvgNode {
  const classes = ["vertex"];
  let fill = "#ffffff";
  let stroke = "#455a64";
  if (name === model.x || name === model.y) {
    classes.push("vertex-endpoint");
    fill = "#e3f2fd";
    stroke = "#1565c0";
  }
  if (model.conditioned.includes(name)) {
    classes.push("vertex-conditioned");
    fill = "#fff9c4";
    stroke = "#f9a825";
  }
  if (model.candidates.includes(name)) {
    classes.push("vertex-candidate");
    fill = "#fce4ec";
    stroke = "#ad1457";
  }
  return el("g", { class: classes.join(" "), "data-vertex": name }, [
    el("circle", {
      cx: p.x,
      cy: p.y,
      r: VERTEX_RADIUS,
      fill,
      stroke,
      "stroke-width": 1.6,
    }),
    el(
      "text",
      {
        x: p.x,
        y: p.y,
        "text-anchor": "middle",
        "dominant-baseline": "central",
        "font-size": 13,
        "font-family": "system-ui, sans-serif",
      },
      [],
      name,
    ),
  ]);
}

export function renderGraph(
  model: ViewModel,
  width = 640,
  height = 400,
): SvgNode {
  const points = layoutGraph(model.vertices, model.x, model.y, {
    width,
    height,
  });
  const edges = model.edges.map((edge) => edgeLine(edge, points));
  const vertices = model.vertices.map((name) => {
    const p = points.get(name);
    if (!p) {
      throw new Error(`vertex ${name} was not placed`);
    }
    return vertexGroup(name, model, p);
  });
  return el(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      viewBox: `0 0 ${width} ${height}`,
      width,
      height,
      role: "img",
    },
    [...edges, ...vertices],
  );
}

function escapeAttr(value: string): string {
  return value
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function escapeText(value: string): string {
  return value.replaceAll("&", "&amp;").replaceAll("<", "&lt;");
}

export function toSvgString(node: SvgNode): string {
  const attrs = Object.entries(node.attrs)
    .map(([key, value]) => ` ${key}="${escapeAttr(String(value))}"`)
    .join("");
  const inner =
    (node.text !== undefined ? escapeText(node.text) : "") +
    node.children.map(toSvgString).join("");
  return `<${node.tag}${attrs}>${inner}</${node.tag}>`;
}
