/** Pure derivation of what the page shows from a session view.
 *
 * Everything here is computed from the server's JSON alone; the client
 * never re-implements any engine logic.
 */

import type {
  FinishView,
  Pair,
  PendingQuery,
  QueueEntryView,
  SessionView,
} from "./types.js";

const IDENTIFIER = /^[A-Za-z_][A-Za-z0-9_]*$/;

export type EdgeKind = "kept" | "uncertain" | "blocked" | "candidate";

export interface GraphEdge {
  a: string;
  b: string;
  kind: EdgeKind;
  /** The edge the pending question is about, highlighted in the pane. */
  selected: boolean;
}

export interface QueueBadge {
  set: string;
  mincut: string;
}

export interface ViewModel {
  x: string;
  y: string;
  vertices: string[];
  conditioned: string[];
  candidates: string[];
  edges: GraphEdge[];
  pending: PendingQuery | null;
  mincut: string;
  queue: QueueBadge[];
  emitted: string[][];
  finished: FinishView | null;
}

export function formatSet(members: Iterable<string>): string {
  return `{${[...members].join(",")}}`;
}

export function mincutLabel(mincut: number | "inf"): string {
  return mincut === "inf" ? "∞" : String(mincut);
}

function normalize(a: string, b: string): Pair {
  return a <= b ? [a, b] : [b, a];
}

function samePair(edge: Pair, other: Pair | null): boolean {
  if (other === null) {
    return false;
  }
  const [a, b] = normalize(edge[0], edge[1]);
  const [c, d] = normalize(other[0], other[1]);
  return a === c && b === d;
}

/** Stronger knowledge wins when a pair appears in several roles. */
const KIND_RANK: Record<EdgeKind, number> = {
  kept: 0,
  uncertain: 1,
  blocked: 2,
  candidate: 3,
};

export function buildViewModel(view: SessionView): ViewModel {
  const state = view.working_state;
  const probe = view.probe ?? { edge: null, vertices: [] };
  const probeEdge = probe.edge;

  const edgeByPair = new Map<string, GraphEdge>();
  const addEdge = (pair: Pair, kind: EdgeKind) => {
    const [a, b] = normalize(pair[0], pair[1]);
    const key = `${a}|${b}`;
    const existing = edgeByPair.get(key);
    if (existing && KIND_RANK[existing.kind] <= KIND_RANK[kind]) {
      return;
    }
    edgeByPair.set(key, {
      a,
      b,
      kind,
      selected: samePair([a, b], probeEdge),
    });
  };
  for (const pair of state.b_yes) {
    addEdge(pair, "kept");
  }
  for (const pair of state.uncertain) {
    addEdge(pair, "uncertain");
  }
  for (const pair of state.b_no) {
    addEdge(pair, "blocked");
  }
  // A freshly named common cause is linked to both ends of the edge it
  // may expand, until its follow-up questions resolve it.
  if (probeEdge !== null) {
    for (const candidate of probe.vertices) {
      for (const end of probeEdge) {
        addEdge([candidate, end], "candidate");
      }
    }
  }

  const vertices = new Set<string>([view.x, view.y]);
  for (const v of state.s) {
    vertices.add(v);
  }
  for (const edge of edgeByPair.values()) {
    vertices.add(edge.a);
    vertices.add(edge.b);
  }
  for (const v of probe.vertices) {
    vertices.add(v);
  }

  return {
    x: view.x,
    y: view.y,
    vertices: [...vertices].sort(),
    conditioned: [...state.s].sort(),
    candidates: [...probe.vertices].sort(),
    edges: [...edgeByPair.values()].sort((p, q) =>
      p.a === q.a ? (p.b < q.b ? -1 : 1) : p.a < q.a ? -1 : 1,
    ),
    pending: view.pending_query,
    mincut: mincutLabel(state.mincut),
    queue: view.queue.map((entry: QueueEntryView) => ({
      set: formatSet(entry.s),
      mincut: mincutLabel(entry.mincut),
    })),
    emitted: view.emitted_sets,
    finished: view.finished,
  };
}

/** Parse a typed vertex name; throws with a message fit for inline display. */
export function parseVertexName(text: string): string {
  const name = text.trim();
  if (name === "") {
    throw new Error("type a vertex name");
  }
  if (!IDENTIFIER.test(name)) {
    throw new Error(`${JSON.stringify(name)} is not a vertex name`);
  }
  return name;
}

/** Parse mediator sets typed as "{A,B}; {C}" (or "none" / empty for none). */
export function parseMediatorSets(text: string): string[][] {
  const trimmed = text.trim();
  if (trimmed === "" || trimmed.toLowerCase() === "none") {
    return [];
  }
  const sets: string[][] = [];
  for (const chunk of trimmed.split(";")) {
    const body = chunk.trim().replace(/^\{/, "").replace(/\}$/, "").trim();
    if (body === "") {
      throw new Error("empty set in the list; separate sets with ';'");
    }
    const members: string[] = [];
    for (const part of body.split(",")) {
      const name = part.trim();
      if (!IDENTIFIER.test(name)) {
        throw new Error(`${JSON.stringify(name)} is not a vertex name`);
      }
      if (!members.includes(name)) {
        members.push(name);
      }
    }
    sets.push(members.sort());
  }
  return sets;
}
