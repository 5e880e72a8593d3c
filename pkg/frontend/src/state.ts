import type { GraphNode, TraceMode } from './types.js';

export type TabName = 'nodes' | 'links' | 'trace';

export interface Filters {
  types: Set<string>;
  relations: Set<string>;
  asils: Set<string>;
  degreeMin: number | null;
  degreeMax: number | null;
}

export function emptyFilters(): Filters {
  return { types: new Set(), relations: new Set(), asils: new Set(), degreeMin: null, degreeMax: null };
}

export interface PanelState {
  projectId: string;
  selected: Set<string>;
  hovered: string | null;
  filters: Filters;
  tab: TabName;
  traceSource: string | null;
  traceDestination: string | null;
  traceMode: TraceMode;
}

function freshPanel(projectId: string): PanelState {
  return {
    projectId,
    selected: new Set(),
    hovered: null,
    filters: emptyFilters(),
    tab: 'nodes',
    traceSource: null,
    traceDestination: null,
    traceMode: 'undirected',
  };
}

/**
 * Client-side session state. Panel order is always a permutation of the
 * loaded project ids, and a panel's selection only ever contains ids that
 * exist in that project.
 */
export class ViewState {
  private panels = new Map<string, PanelState>();
  private order: string[] = [];

  loadProjects(projectIds: string[]): void {
    const unique = new Set(projectIds);
    if (unique.size !== projectIds.length) {
      throw new Error('duplicate project ids');
    }
    for (const id of projectIds) {
      if (!this.panels.has(id)) {
        this.panels.set(id, freshPanel(id));
      }
    }
    for (const id of [...this.panels.keys()]) {
      if (!unique.has(id)) {
        this.panels.delete(id);
      }
    }
    this.order = this.order.filter((id) => unique.has(id));
    for (const id of projectIds) {
      if (!this.order.includes(id)) {
        this.order.push(id);
      }
    }
  }

  panelOrder(): string[] {
    return [...this.order];
  }

  panel(projectId: string): PanelState {
    const state = this.panels.get(projectId);
    if (state === undefined) {
      throw new Error(`project ${projectId} is not loaded`);
    }
    return state;
  }

  /** Move the panel at `from` so it sits at index `to`; everything else shifts. */
  movePanel(from: number, to: number): void {
    if (from < 0 || from >= this.order.length || to < 0 || to >= this.order.length) {
      throw new RangeError(`panel index out of range: ${from} -> ${to}`);
    }
    const [moved] = this.order.splice(from, 1);
    this.order.splice(to, 0, moved);
  }

  toggleSelected(projectId: string, nodeId: string, validIds: ReadonlySet<string>): boolean {
    if (!validIds.has(nodeId)) {
      throw new Error(`node ${nodeId} is not part of project ${projectId}`);
    }
    const panel = this.panel(projectId);
    if (panel.selected.has(nodeId)) {
      panel.selected.delete(nodeId);
      return false;
    }
    panel.selected.add(nodeId);
    return true;
  }

  addSelected(projectId: string, nodeIds: Iterable<string>, validIds: ReadonlySet<string>): void {
    const panel = this.panel(projectId);
    for (const id of nodeIds) {
      if (validIds.has(id)) {
        panel.selected.add(id);
      }
    }
  }

  clearPanel(projectId: string): void {
    const panel = this.panel(projectId);
    panel.selected.clear();
    panel.hovered = null;
    panel.filters = emptyFilters();
  }

  encodeUrl(): string {
    const params = new URLSearchParams();
    if (this.order.length > 0) {
      params.set('projects', this.order.join(','));
    }
    const query = params.toString();
    return query ? `?${query}` : '';
  }

  static decodeUrl(search: string): string[] {
    const params = new URLSearchParams(search);
    const raw = params.get('projects');
    if (raw === null || raw.trim() === '') {
      return [];
    }
    return raw
      .split(',')
      .map((id) => id.trim())
      .filter((id) => id.length > 0);
  }
}

/**
 * Apply the active filter set to a node list. A node survives only if it
 * matches every active dimension; inactive dimensions (empty sets, null
 * bounds) do not constrain.
 */
export function applyFilters(
  nodes: readonly GraphNode[],
  degrees: ReadonlyMap<string, number>,
  filters: Filters,
): GraphNode[] {
  return nodes.filter((node) => {
    if (filters.types.size > 0 && !filters.types.has(node.type)) {
      return false;
    }
    if (filters.asils.size > 0 && !filters.asils.has(node.asil)) {
      return false;
    }
    const degree = degrees.get(node.id) ?? 0;
    if (filters.degreeMin !== null && degree < filters.degreeMin) {
      return false;
    }
    if (filters.degreeMax !== null && degree > filters.degreeMax) {
      return false;
    }
    return true;
  });
}

/** Node degrees from a link list, both endpoints counted. */
export function degreesFromLinks(links: readonly { source: string; target: string }[]): Map<string, number> {
  const degrees = new Map<string, number>();
  for (const link of links) {
    degrees.set(link.source, (degrees.get(link.source) ?? 0) + 1);
    degrees.set(link.target, (degrees.get(link.target) ?? 0) + 1);
  }
  return degrees;
}
