// JSON shapes served by the semantic-unit HTTP API.

export interface TermJson {
  resource?: string;
  literal?: string;
  datatype?: string | null;
  language?: string | null;
}

export interface TripleJson {
  subject: string;
  predicate: string;
  object: TermJson;
}

export interface MindMapNodeJson {
  id: string;
  label: string;
  resource: string | null;
}

export interface MindMapEdgeJson {
  from: string;
  to: string;
  label: string;
}

export interface MindMapJson {
  nodes: MindMapNodeJson[];
  edges: MindMapEdgeJson[];
}

export interface UnitView {
  gupri: string;
  unit_class: string;
  kind: string;
  label: string;
  subject: string | null;
  subject_label?: string;
  members: string[];
  negated: boolean;
  category: string | null;
  schema_ref: string | null;
  mindmap?: MindMapJson;
  slot_values?: Record<string, TermJson[]>;
  data_graph_triples?: TripleJson[];
  containing: Record<string, string[]>;
  containers: { gupri: string; kind: string; label: string }[];
  revised_by: string[];
  metadata: { creator: string; created: string; last_updated: string };
}

export interface NavNodeJson {
  gupri: string;
  label: string;
  kind: string;
  revisit: boolean;
  children: NavNodeJson[];
}

export interface SlotInfo {
  name: string;
  kind: "resource" | "literal";
  datatype: string | null;
  display: boolean;
}

export interface UnitClassInfo {
  iri: string;
  count: number;
  kind: string | null;
  description: string | null;
  slots: SlotInfo[] | null;
  negatable: boolean;
}

export interface Page<T> {
  items: T[];
  next_cursor: string | null;
  total: number;
}

export interface QuestionCreated {
  gupri: string;
  boolean_mode: boolean;
  join_vars: string[];
  select_vars: string[];
}

export interface ResultRow {
  bindings: Record<string, TermJson>;
  units: string[];
}

export interface FacetSummaryJson {
  unit_classes: Record<string, number>;
  categories: Record<string, number>;
  negated: Record<string, number>;
  created: Record<string, number>;
  slot_ranges: Record<string, { min: string; max: string }>;
  slot_classes: Record<string, Record<string, number>>;
}

export interface ZoomUnitsJson {
  level: string;
  units: string[];
}

export interface ZoomTriplesJson {
  level: string;
  triples: TripleJson[];
}

export type ZoomLevel =
  | "triples"
  | "statements"
  | "items"
  | "item-groups"
  | "whole-graph";

export const ZOOM_LEVELS: ZoomLevel[] = [
  "triples",
  "statements",
  "items",
  "item-groups",
  "whole-graph",
];

export interface ApiErrorBody {
  code: string;
  message: string;
  details: string[];
}
