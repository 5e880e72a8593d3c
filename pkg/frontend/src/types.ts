// Response shapes of the HTTP API, mirroring the server's interface document.

export type Asil = '-' | 'QM' | 'A' | 'B' | 'C' | 'D';
export type SecComponent = 'severity' | 'exposure' | 'controllability';
export type TraceMode = 'undirected' | 'forward';

export interface ProjectMeta {
  project_id: string;
  name: string;
  system: string;
  department: string;
  in_charge: string;
  location: string;
}

export interface ProjectEntry {
  meta: ProjectMeta;
  nodes: number;
  links: number;
  revision: number;
}

export interface ProjectList {
  projects: ProjectEntry[];
}

export interface GraphNode {
  id: string;
  name: string;
  type: string;
  asil: string;
  severity: string;
  exposure: string;
  controllability: string;
}

export interface GraphLink {
  source: string;
  target: string;
  relation: string;
}

export interface Graph {
  meta: ProjectMeta;
  nodes: GraphNode[];
  links: GraphLink[];
}

export interface LayoutNode {
  x: number;
  y: number;
  r: number;
  group: string;
}

export interface LayoutGroup {
  key: string;
  label: string;
  cx: number;
  cy: number;
  R: number;
  members: string[];
}

export interface LayoutResult {
  project: string;
  nodes: Record<string, LayoutNode>;
  groups: LayoutGroup[];
  hulls: Record<string, Array<[number, number]>>;
  groupBy?: string;
  sizeBy?: string;
  colorBy?: string;
  seed?: number;
}

export interface NeighborsResponse {
  project: string;
  node: GraphNode;
  neighbors: GraphNode[];
}

export interface SearchResponse {
  project: string;
  query: string;
  matches: GraphNode[];
}

export interface ChecksResponse {
  project: string;
  revision: number;
  results: Record<string, string[]>;
}

export interface PathDescription {
  nodes: string[];
  links: GraphLink[];
}

export interface TraceStep {
  id: string;
  name: string;
  type: string;
  asil: string;
  severity: string;
  exposure: string;
  controllability: string;
}

export interface TraceFlag {
  node_id: string;
  component: SecComponent;
  actual: string;
  expected: string;
  from_node: string;
}

export interface TraceResponse {
  project: string;
  mode: TraceMode;
  found: boolean;
  path: PathDescription | null;
  steps: TraceStep[];
  asils: string[];
  flags: TraceFlag[];
}

export interface SummaryRow {
  label: string;
  counts: Record<string, number>;
  shared: number;
}

export interface SummaryTable {
  projects: string[];
  types: SummaryRow[];
  relations: SummaryRow[];
  asils: SummaryRow[];
}

export interface SharedProjection {
  type: string;
  asil: string;
  severity: string;
  exposure: string;
  controllability: string;
  degree: number;
  neighbor_ids: string[];
  by_relation: Record<string, number>;
}

export interface SharedNode {
  id: string;
  name: string;
  asil_conflict: boolean;
  per_project: Record<string, SharedProjection>;
}

export interface SharedResponse {
  projects: string[];
  nodes: SharedNode[];
  links: GraphLink[];
  subgraph: Graph;
  layout: LayoutResult;
}

export interface ApiErrorBody {
  error: {
    code: string;
    message: string;
  };
  report?: unknown;
}
