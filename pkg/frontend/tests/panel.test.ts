import { afterEach, beforeEach, describe, expect, test, vi } from 'vitest';
import { ApiClient } from '../src/api.js';
import { lassoHitTest } from '../src/geometry.js';
import { ProjectPanel } from '../src/panel.js';
import { emptyFilters, type PanelState } from '../src/state.js';
import type { Graph, LayoutResult, TraceResponse } from '../src/types.js';
import { flushAsync, loadFixture, stubFetch, type FetchHandler, type FetchStub } from './helpers.js';

const GRAPH = loadFixture<Graph>('graph_F1.json');
const LAYOUT = loadFixture<LayoutResult>('layout_F1.json');
const TRACE = loadFixture<TraceResponse>('trace_F1_n1_n6.json');

function neighborsFor(nodeId: string) {
  const ids = new Set<string>();
  for (const link of GRAPH.links) {
    if (link.source === nodeId) ids.add(link.target);
    if (link.target === nodeId) ids.add(link.source);
  }
  return {
    project: 'F1',
    node: GRAPH.nodes.find((node) => node.id === nodeId),
    neighbors: GRAPH.nodes.filter((node) => ids.has(node.id)),
  };
}

function backend(onTrace?: (body: { source: string; destination: string; mode: string }) => unknown): FetchHandler {
  return (url, init) => {
    const { pathname } = new URL(url, 'http://unit.test');
    if (pathname === '/api/projects/F1/graph') {
      return GRAPH;
    }
    if (pathname === '/api/projects/F1/layout') {
      return LAYOUT;
    }
    const neighbors = pathname.match(/^\/api\/projects\/F1\/nodes\/([^/]+)\/neighbors$/);
    if (neighbors !== null) {
      return neighborsFor(decodeURIComponent(neighbors[1]));
    }
    if (pathname === '/api/projects/F1/trace') {
      const body = JSON.parse(String(init?.body));
      return onTrace ? onTrace(body) : TRACE;
    }
    throw { status: 404, body: { error: { code: 'NOT_FOUND', message: pathname } } };
  };
}

function freshState(): PanelState {
  return {
    projectId: 'F1',
    selected: new Set(),
    hovered: null,
    filters: emptyFilters(),
    tab: 'nodes',
    traceSource: null,
    traceDestination: null,
    traceMode: 'undirected',
  };
}

function circleFor(panel: ProjectPanel, nodeId: string): SVGCircleElement {
  const circle = panel.element.querySelector<SVGCircleElement>(`circle[data-node-id="${nodeId}"]`);
  if (circle === null) {
    throw new Error(`no circle for ${nodeId}`);
  }
  return circle;
}

function highlightedIds(panel: ProjectPanel, className: string): string[] {
  return [...panel.element.querySelectorAll(`circle.${className}`)]
    .map((circle) => circle.getAttribute('data-node-id') ?? '')
    .sort();
}

async function mountPanel(handler: FetchHandler): Promise<{ panel: ProjectPanel; stub: FetchStub }> {
  const stub = stubFetch(handler);
  const panel = new ProjectPanel(new ApiClient(), { state: freshState() });
  document.body.appendChild(panel.element);
  await panel.init();
  return { panel, stub };
}

let stub: FetchStub | null = null;

beforeEach(() => {
  vi.useFakeTimers();
});

afterEach(() => {
  stub?.restore();
  stub = null;
  document.body.replaceChildren();
  vi.useRealTimers();
});

describe('ProjectPanel scene and selection', () => {
  test('init draws one circle per node and a nodes table', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;
    expect(panel.element.querySelectorAll('circle.node')).toHaveLength(8);
    expect(panel.element.querySelectorAll('.tab-content tbody tr')).toHaveLength(8);
    expect(panel.nodeIds().size).toBe(8);
  });

  test('clicking a node toggles its selection membership', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;
    const circle = circleFor(panel, 'n3');

    circle.dispatchEvent(new MouseEvent('click'));
    expect(panel.state.selected.has('n3')).toBe(true);
    expect(circle.classList.contains('selected')).toBe(true);

    circle.dispatchEvent(new MouseEvent('click'));
    expect(panel.state.selected.has('n3')).toBe(false);
    expect(circle.classList.contains('selected')).toBe(false);
  });

  test('table row clicks toggle the same selection', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;
    const row = panel.element.querySelector<HTMLTableRowElement>('tbody tr[data-row-id="n5"]');
    row?.click();
    expect(panel.state.selected.has('n5')).toBe(true);
    expect(row?.classList.contains('selected')).toBe(true);
  });

  test('hovering highlights exactly the backend-reported neighbors', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;

    circleFor(panel, 'n2').dispatchEvent(new MouseEvent('mouseenter'));
    await vi.advanceTimersByTimeAsync(150);

    expect(highlightedIds(panel, 'neighbor')).toEqual(['n1', 'n3', 'n8']);
    expect(panel.element.querySelector('.details')?.textContent).toContain('n1, n3, n8');

    circleFor(panel, 'n2').dispatchEvent(new MouseEvent('mouseleave'));
    expect(highlightedIds(panel, 'neighbor')).toEqual([]);
  });

  test('a quick hover sweep only fetches details for the final node', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;
    const before = stub.calls.length;

    circleFor(panel, 'n2').dispatchEvent(new MouseEvent('mouseenter'));
    await vi.advanceTimersByTimeAsync(50);
    circleFor(panel, 'n1').dispatchEvent(new MouseEvent('mouseenter'));
    await vi.advanceTimersByTimeAsync(150);

    const neighborCalls = stub.calls.slice(before).filter((call) => call.url.includes('/neighbors'));
    expect(neighborCalls).toHaveLength(1);
    expect(neighborCalls[0].url).toContain('/nodes/n1/');
    expect(highlightedIds(panel, 'neighbor')).toEqual(['n2']);
  });
});

describe('ProjectPanel lasso', () => {
  function drag(svg: SVGSVGElement, points: Array<[number, number]>): void {
    const [first, ...rest] = points;
    svg.dispatchEvent(new MouseEvent('pointerdown', { clientX: first[0], clientY: first[1] }));
    for (const [x, y] of rest) {
      svg.dispatchEvent(new MouseEvent('pointermove', { clientX: x, clientY: y }));
    }
    svg.dispatchEvent(new MouseEvent('pointerup'));
  }

  test('lasso adds exactly the hit-test ids to the selection', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;
    const svg = panel.element.querySelector('svg');
    expect(svg).not.toBeNull();

    const outline: Array<[number, number]> = [
      [500, 300],
      [700, 300],
      [700, 500],
      [500, 500],
    ];
    drag(svg as SVGSVGElement, outline);

    const expected = lassoHitTest(
      outline.map(([x, y]) => ({ x, y })),
      LAYOUT,
    ).sort();
    expect(expected).toHaveLength(8); // the whole fixture sits in this window
    expect([...panel.state.selected].sort()).toEqual(expected);
  });

  test('a lasso around empty space selects nothing', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;
    const svg = panel.element.querySelector('svg') as SVGSVGElement;
    drag(svg, [
      [0, 0],
      [40, 0],
      [40, 40],
      [0, 40],
    ]);
    expect(panel.state.selected.size).toBe(0);
  });

  test('filtered-out nodes are not lasso eligible', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;
    panel.setTypeFilter(['MB']);
    const svg = panel.element.querySelector('svg') as SVGSVGElement;
    drag(svg, [
      [500, 300],
      [700, 300],
      [700, 500],
      [500, 500],
    ]);
    expect([...panel.state.selected].sort()).toEqual(['n2', 'n7']);
  });
});

describe('ProjectPanel filters', () => {
  test('the nodes table never shows a node excluded by the filters', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;

    panel.setTypeFilter(['MB']);
    const rows = [...panel.element.querySelectorAll<HTMLTableRowElement>('.tab-content tbody tr')];
    expect(rows.map((row) => row.dataset.rowId).sort()).toEqual(['n2', 'n7']);

    const hidden = highlightedIds(panel, 'filtered-out');
    expect(hidden).toEqual(['n1', 'n3', 'n4', 'n5', 'n6', 'n8']);
  });

  test('a degree window filters both table and scene', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;
    panel.setDegreeFilter(2, 3);
    const rows = [...panel.element.querySelectorAll<HTMLTableRowElement>('.tab-content tbody tr')];
    expect(rows.map((row) => row.dataset.rowId).sort()).toEqual(['n2', 'n3', 'n4', 'n5']);
  });
});

describe('ProjectPanel trace tab', () => {
  function openTrace(panel: ProjectPanel): void {
    panel.element.querySelector<HTMLButtonElement>('button[data-tab="trace"]')?.click();
  }

  function pick(panel: ProjectPanel, role: string, value: string): void {
    const select = panel.element.querySelector<HTMLSelectElement>(`select[data-role="${role}"]`);
    if (select === null) {
      throw new Error(`no ${role} select`);
    }
    select.value = value;
    select.dispatchEvent(new Event('change'));
  }

  function traceCalls(calls: Array<{ url: string }>): number {
    return calls.filter((call) => call.url.includes('/trace')).length;
  }

  test('one request per endpoint triple; strip, heatmap, and overlay render from it', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;
    openTrace(panel);

    pick(panel, 'source', 'n1');
    expect(traceCalls(stub.calls)).toBe(0); // destination still missing

    pick(panel, 'destination', 'n6');
    expect(traceCalls(stub.calls)).toBe(1);
    await flushAsync();

    expect(panel.element.querySelectorAll('.trace-cell')).toHaveLength(6);
    expect(panel.element.querySelectorAll('td.mismatch')).toHaveLength(1);
    expect(highlightedIds(panel, 'on-path')).toEqual(['n1', 'n2', 'n3', 'n4', 'n5', 'n6']);

    pick(panel, 'destination', 'n6'); // unchanged triple, no new request
    expect(traceCalls(stub.calls)).toBe(1);

    pick(panel, 'mode', 'forward');
    expect(traceCalls(stub.calls)).toBe(2);
  });

  test('a stale trace response never overwrites a newer one', async () => {
    const pending = new Map<string, (body: unknown) => void>();
    const handler = backend((body) => {
      return new Promise((resolve) => {
        pending.set(body.destination, resolve as (body: unknown) => void);
      });
    });
    const mounted = await mountPanel(handler);
    stub = mounted.stub;
    const { panel } = mounted;
    openTrace(panel);

    pick(panel, 'source', 'n1');
    pick(panel, 'destination', 'n6'); // request A
    pick(panel, 'destination', 'n5'); // request B supersedes A
    expect(pending.size).toBe(2);

    const shortTrace: TraceResponse = {
      ...TRACE,
      steps: TRACE.steps.slice(0, 5),
      asils: TRACE.asils.slice(0, 5),
      path: { nodes: TRACE.path!.nodes.slice(0, 5), links: TRACE.path!.links.slice(0, 4) },
    };
    pending.get('n5')!(shortTrace);
    await flushAsync();
    expect(panel.element.querySelectorAll('.trace-cell')).toHaveLength(5);

    pending.get('n6')!(TRACE);
    await flushAsync();
    expect(panel.element.querySelectorAll('.trace-cell')).toHaveLength(5); // A was discarded
  });

  test('an unreachable pair renders the missing-path note', async () => {
    const handler = backend(() => ({
      project: 'F1',
      mode: 'undirected',
      found: false,
      path: null,
      steps: [],
      asils: [],
      flags: [],
    }));
    const mounted = await mountPanel(handler);
    stub = mounted.stub;
    const { panel } = mounted;
    openTrace(panel);
    pick(panel, 'source', 'n1');
    pick(panel, 'destination', 'n7');
    await flushAsync();
    expect(panel.element.querySelector('.trace-missing')?.textContent).toMatch(/No path/);
  });
});

describe('ProjectPanel context menu', () => {
  test('offers exactly the four documented actions', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;
    circleFor(panel, 'n2').dispatchEvent(new MouseEvent('contextmenu'));
    const labels = [...panel.element.querySelectorAll('.context-menu button')].map(
      (button) => button.textContent,
    );
    expect(labels).toEqual(['Select', 'Select Connections', 'Set as Source', 'Set as Destination']);
  });

  test('Select Connections pulls the neighbor set into the selection', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;
    circleFor(panel, 'n2').dispatchEvent(new MouseEvent('contextmenu'));
    const buttons = [...panel.element.querySelectorAll<HTMLButtonElement>('.context-menu button')];
    buttons.find((button) => button.textContent === 'Select Connections')?.click();
    await flushAsync();
    expect([...panel.state.selected].sort()).toEqual(['n1', 'n3', 'n8']);
    expect(panel.element.querySelector('.context-menu')).toBeNull(); // menu closes
  });

  test('Set as Source and Set as Destination feed the trace endpoints', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;

    circleFor(panel, 'n1').dispatchEvent(new MouseEvent('contextmenu'));
    [...panel.element.querySelectorAll<HTMLButtonElement>('.context-menu button')]
      .find((button) => button.textContent === 'Set as Source')
      ?.click();
    expect(panel.state.traceSource).toBe('n1');

    circleFor(panel, 'n6').dispatchEvent(new MouseEvent('contextmenu'));
    [...panel.element.querySelectorAll<HTMLButtonElement>('.context-menu button')]
      .find((button) => button.textContent === 'Set as Destination')
      ?.click();
    expect(panel.state.traceDestination).toBe('n6');
    expect(stub.calls.filter((call) => call.url.includes('/trace'))).toHaveLength(1);
  });
});

describe('ProjectPanel reset', () => {
  test('reset clears selection and filters and redraws every node', async () => {
    const mounted = await mountPanel(backend());
    stub = mounted.stub;
    const { panel } = mounted;
    circleFor(panel, 'n3').dispatchEvent(new MouseEvent('click'));
    panel.setTypeFilter(['MB']);
    expect(panel.state.selected.size).toBe(1);

    panel.element.querySelector<HTMLButtonElement>('.reset-button')?.click();
    await flushAsync();

    expect(panel.state.selected.size).toBe(0);
    expect(panel.state.filters.types.size).toBe(0);
    expect(highlightedIds(panel, 'filtered-out')).toEqual([]);
    expect(panel.element.querySelectorAll('.tab-content tbody tr')).toHaveLength(8);
  });
});
