import { ApiClient } from './api.js';
import { ProjectPanel } from './panel.js';
import { renderScene, type SceneHandles } from './render.js';
import { ViewState } from './state.js';
import type { SharedNode, SharedResponse } from './types.js';

/**
 * Compare View: one panel per loaded project plus the Shared panel built
 * from the /compare/shared response. Hovering a shared node anywhere
 * cross-highlights the same id in every project panel where it appears,
 * using the per-project neighborhood data the backend embedded.
 */
export class CompareView {
  readonly element: HTMLElement;
  readonly viewState: ViewState;

  private readonly api: ApiClient;
  private readonly panels = new Map<string, ProjectPanel>();
  private shared: SharedResponse | null = null;
  private sharedById = new Map<string, SharedNode>();
  private sharedScene: SceneHandles | null = null;
  private readonly panelsHost: HTMLElement;
  private readonly sharedHost: HTMLElement;

  constructor(api: ApiClient, viewState: ViewState = new ViewState()) {
    this.api = api;
    this.viewState = viewState;
    this.element = document.createElement('section');
    this.element.className = 'compare-view';
    this.panelsHost = document.createElement('div');
    this.panelsHost.className = 'panels';
    this.sharedHost = document.createElement('aside');
    this.sharedHost.className = 'shared-panel';
    this.element.append(this.panelsHost, this.sharedHost);
  }

  async load(projectIds: string[]): Promise<void> {
    this.viewState.loadProjects(projectIds);
    this.shared = await this.api.getShared(projectIds);
    this.sharedById = new Map(this.shared.nodes.map((node) => [node.id, node]));

    this.panels.clear();
    this.panelsHost.replaceChildren();
    for (const projectId of this.viewState.panelOrder()) {
      const panel = new ProjectPanel(this.api, {
        state: this.viewState.panel(projectId),
        onHover: (nodeId) => this.crossHighlight(nodeId),
      });
      this.panels.set(projectId, panel);
      this.attachHeaderDrag(panel);
      this.panelsHost.appendChild(panel.element);
    }
    await Promise.all([...this.panels.values()].map((panel) => panel.init()));
    this.renderSharedPanel();
  }

  panel(projectId: string): ProjectPanel {
    const panel = this.panels.get(projectId);
    if (panel === undefined) {
      throw new Error(`no panel for project ${projectId}`);
    }
    return panel;
  }

  sharedCount(): number {
    return this.shared?.nodes.length ?? 0;
  }

  /** Reorder both the view state and the DOM; panels keep all their data. */
  movePanel(from: number, to: number): void {
    this.viewState.movePanel(from, to);
    for (const projectId of this.viewState.panelOrder()) {
      const panel = this.panels.get(projectId);
      if (panel) {
        this.panelsHost.appendChild(panel.element); // append re-inserts in order
      }
    }
  }

  private attachHeaderDrag(panel: ProjectPanel): void {
    const handle = panel.element.querySelector<HTMLElement>('.drag-handle');
    if (handle === null) {
      return;
    }
    handle.draggable = true;
    handle.addEventListener('dragstart', (event) => {
      event.dataTransfer?.setData('text/plain', panel.state.projectId);
    });
    panel.element.addEventListener('dragover', (event) => event.preventDefault());
    panel.element.addEventListener('drop', (event) => {
      event.preventDefault();
      const draggedId = event.dataTransfer?.getData('text/plain');
      if (!draggedId || draggedId === panel.state.projectId) {
        return;
      }
      const order = this.viewState.panelOrder();
      const from = order.indexOf(draggedId);
      const to = order.indexOf(panel.state.projectId);
      if (from >= 0 && to >= 0) {
        this.movePanel(from, to);
      }
    });
  }

  private renderSharedPanel(): void {
    if (this.shared === null) {
      return;
    }
    const header = document.createElement('header');
    header.className = 'shared-header';
    const title = document.createElement('h2');
    title.textContent = `Shared (${this.shared.nodes.length})`;
    title.dataset.count = String(this.shared.nodes.length);
    header.appendChild(title);

    const scene = renderScene(this.shared.layout, {
      onHover: (nodeId) => this.crossHighlight(nodeId),
    });
    this.sharedScene = scene;

    const list = document.createElement('ul');
    list.className = 'shared-list';
    for (const node of this.shared.nodes) {
      const item = document.createElement('li');
      item.dataset.nodeId = node.id;
      item.textContent = `${node.id} ${node.name}`;
      if (node.asil_conflict) {
        item.classList.add('asil-conflict');
        item.title = 'ASIL differs between projects';
      }
      item.addEventListener('mouseenter', () => this.crossHighlight(node.id));
      item.addEventListener('mouseleave', () => this.crossHighlight(null));
      list.appendChild(item);
    }

    const linkNote = document.createElement('p');
    linkNote.className = 'shared-links';
    linkNote.textContent = `${this.shared.links.length} shared links`;

    this.sharedHost.replaceChildren(header, scene.svg, list, linkNote);
  }

  /**
   * Highlight `nodeId` in every project panel where the backend reports it
   * present, and its per-project neighbors alongside. Null clears.
   */
  crossHighlight(nodeId: string | null): void {
    for (const panel of this.panels.values()) {
      panel.clearHighlight('cross-highlight');
      panel.clearHighlight('cross-neighbor');
    }
    this.sharedScene?.clearHighlight('cross-highlight');
    if (nodeId === null) {
      return;
    }
    const shared = this.sharedById.get(nodeId);
    if (shared === undefined) {
      return; // only shared ids cross panels
    }
    this.sharedScene?.highlight(new Set([nodeId]), 'cross-highlight');
    for (const [projectId, projection] of Object.entries(shared.per_project)) {
      const panel = this.panels.get(projectId);
      if (panel === undefined) {
        continue;
      }
      panel.highlight(new Set([nodeId]), 'cross-highlight');
      panel.highlight(new Set(projection.neighbor_ids), 'cross-neighbor');
    }
  }
}
