import type {
  ChecksResponse,
  Graph,
  LayoutResult,
  NeighborsResponse,
  ProjectList,
  SearchResponse,
  SharedResponse,
  SummaryTable,
  TraceMode,
  TraceResponse,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export interface LayoutOptions {
  groupBy?: string;
  sizeBy?: string;
  colorBy?: string;
  seed?: number;
  pinned?: Record<string, [number, number]>;
}

function encodePinned(pinned: Record<string, [number, number]>): string {
  return Object.entries(pinned)
    .map(([key, [x, y]]) => `${key}:${x}:${y}`)
    .join(',');
}

/** Thin typed wrapper over the workbench HTTP routes. */
export class ApiClient {
  constructor(private readonly baseUrl: string = '') {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    const body = await response.json();
    if (!response.ok) {
      const error = (body as { error?: { code?: string; message?: string } }).error;
      throw new ApiError(
        response.status,
        error?.code ?? 'UNKNOWN',
        error?.message ?? `request to ${path} failed with ${response.status}`,
      );
    }
    return body as T;
  }

  private getJson<T>(path: string, params?: Record<string, string>): Promise<T> {
    const query = params ? new URLSearchParams(params).toString() : '';
    return this.request<T>(query ? `${path}?${query}` : path);
  }

  listProjects(): Promise<ProjectList> {
    return this.getJson('/api/projects');
  }

  getGraph(project: string): Promise<Graph> {
    return this.getJson(`/api/projects/${encodeURIComponent(project)}/graph`);
  }

  getLayout(project: string, options: LayoutOptions = {}): Promise<LayoutResult> {
    const params: Record<string, string> = {};
    if (options.groupBy !== undefined) params.groupBy = options.groupBy;
    if (options.sizeBy !== undefined) params.sizeBy = options.sizeBy;
    if (options.colorBy !== undefined) params.colorBy = options.colorBy;
    if (options.seed !== undefined) params.seed = String(options.seed);
    if (options.pinned !== undefined && Object.keys(options.pinned).length > 0) {
      params.pinned = encodePinned(options.pinned);
    }
    return this.getJson(`/api/projects/${encodeURIComponent(project)}/layout`, params);
  }

  getNeighbors(project: string, nodeId: string, relation?: string): Promise<NeighborsResponse> {
    const params = relation ? { relation } : undefined;
    return this.getJson(
      `/api/projects/${encodeURIComponent(project)}/nodes/${encodeURIComponent(nodeId)}/neighbors`,
      params,
    );
  }

  search(project: string, query: string): Promise<SearchResponse> {
    return this.getJson(`/api/projects/${encodeURIComponent(project)}/nodes/search`, { q: query });
  }

  runChecks(
    project: string,
    options: { checks?: string[]; types?: string[]; degreeMin?: number; degreeMax?: number } = {},
  ): Promise<ChecksResponse> {
    const params: Record<string, string> = {};
    if (options.checks) params.checks = options.checks.join(',');
    if (options.types) params.types = options.types.join(',');
    if (options.degreeMin !== undefined) params.degreeMin = String(options.degreeMin);
    if (options.degreeMax !== undefined) params.degreeMax = String(options.degreeMax);
    return this.getJson(`/api/projects/${encodeURIComponent(project)}/checks`, params);
  }

  trace(project: string, source: string, destination: string, mode: TraceMode): Promise<TraceResponse> {
    return this.request(`/api/projects/${encodeURIComponent(project)}/trace`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ source, destination, mode }),
    });
  }

  getSummary(projects: string[]): Promise<SummaryTable> {
    return this.getJson('/api/summary', { projects: projects.join(',') });
  }

  getShared(projects: string[]): Promise<SharedResponse> {
    return this.getJson('/api/compare/shared', { projects: projects.join(',') });
  }

  async exportSharedCsv(projects: string[]): Promise<string> {
    const response = await fetch(
      `${this.baseUrl}/api/export/csv?projects=${encodeURIComponent(projects.join(','))}`,
      { method: 'POST' },
    );
    if (!response.ok) {
      const body = (await response.json()) as { error?: { code?: string; message?: string } };
      throw new ApiError(response.status, body.error?.code ?? 'UNKNOWN', body.error?.message ?? 'export failed');
    }
    return response.text();
  }
}

/**
 * Monotone ticket counter for in-flight requests. A response is applied
 * only when its ticket is still the newest one issued; anything older has
 * been superseded by later user input and is discarded.
 */
export class RequestSequencer {
  private latest = 0;

  next(): number {
    this.latest += 1;
    return this.latest;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.latest;
  }
}

/** Trailing-edge debounce; used to keep hover-driven detail fetches calm. */
export function debounce<Args extends unknown[]>(
  fn: (...args: Args) => void,
  delayMs: number,
): (...args: Args) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: Args) => {
    if (timer !== undefined) {
      clearTimeout(timer);
    }
    timer = setTimeout(() => {
      timer = undefined;
      fn(...args);
    }, delayMs);
  };
}
