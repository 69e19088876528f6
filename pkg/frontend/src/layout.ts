/** Deterministic layered layout: treatment pinned left, outcome pinned
 * right, everything else spread in columns between them.  The same view
 * always lays out the same way, so the picture stays put across steps.
 */

export interface Point {
  x: number;
  y: number;
}

export interface LayoutOptions {
  width?: number;
  height?: number;
  margin?: number;
  perColumn?: number;
}

export function layoutGraph(
  vertices: string[],
  x: string,
  y: string,
  options: LayoutOptions = {},
): Map<string, Point> {
  const width = options.width ?? 640;
  const height = options.height ?? 400;
  const margin = options.margin ?? 70;
  const perColumn = options.perColumn ?? 4;

  const points = new Map<string, Point>();
  points.set(x, { x: margin, y: height / 2 });
  points.set(y, { x: width - margin, y: height / 2 });

  const others = vertices.filter((v) => v !== x && v !== y).sort();
  if (others.length === 0) {
    return points;
  }
  const columns = Math.ceil(others.length / perColumn);
  const rows = Math.ceil(others.length / columns);
  const innerLeft = margin + (width - 2 * margin) / (columns + 1);
  const columnGap = (width - 2 * margin) / (columns + 1);
  others.forEach((name, i) => {
    const column = Math.floor(i / rows);
    const row = i % rows;
    const rowsInColumn = Math.min(rows, others.length - column * rows);
    points.set(name, {
      x: innerLeft + column * columnGap,
      y: (height * (row + 1)) / (rowsInColumn + 1),
    });
  });
  return points;
}
