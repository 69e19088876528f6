/** JSON shapes served by the session API. */

export type Pair = [string, string];

export interface CommonCauseQuery {
  kind: "common_cause";
  a: string;
  b: string;
  t: string[];
}

export interface IsObservedQuery {
  kind: "is_observed";
  v: string;
}

export interface FindMediatorQuery {
  kind: "find_mediator";
  a: string;
  b: string;
  cause: string;
  base: string[];
}

export type Query = CommonCauseQuery | IsObservedQuery | FindMediatorQuery;

export interface CommonCauseAnswer {
  kind: "common_cause";
  vertex: string | null;
  unblockable: boolean;
}

export interface IsObservedAnswer {
  kind: "is_observed";
  observed: boolean;
}

export interface FindMediatorAnswer {
  kind: "find_mediator";
  sets: string[][];
}

export type Answer = CommonCauseAnswer | IsObservedAnswer | FindMediatorAnswer;

export interface PendingQuery {
  query_id: string;
  query: Query;
  question: string;
}

export interface WorkingStateView {
  s: string[];
  b_yes: Pair[];
  b_no: Pair[];
  uncertain: Pair[];
  mincut: number | "inf";
}

export interface QueueEntryView {
  s: string[];
  b_yes: Pair[];
  b_no: Pair[];
  mincut: number | "inf";
}

export interface ProbeView {
  edge: Pair | null;
  vertices: string[];
}

export interface FinishView {
  reason: string;
  exhausted: boolean;
  sufficient_sets: string[][];
}

export interface SessionView {
  session_id: string;
  x: string;
  y: string;
  algorithm: string;
  config: {
    minimal_only: boolean;
    strategy: string;
    max_states: number;
    max_vertices: number;
  };
  pending_query: PendingQuery | null;
  working_state: WorkingStateView;
  queue: QueueEntryView[];
  probe: ProbeView | null;
  emitted_sets: string[][];
  finished: FinishView | null;
}

export interface CreateSessionRequest {
  x: string;
  y: string;
  algorithm?: string;
  config?: Record<string, unknown>;
}
