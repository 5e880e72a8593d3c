import { ApiClient } from './api.js';
import { CompareView } from './compareView.js';
import { ProjectPanel } from './panel.js';
import { renderSummary } from './summaryView.js';
import { ViewState } from './state.js';

type ViewName = 'dashboard' | 'summary' | 'compare';

/**
 * Application shell: project picker, the three views, and shareable URL
 * state (loaded project ids in panel order).
 */
export class App {
  private readonly api: ApiClient;
  private readonly root: HTMLElement;
  private readonly viewState = new ViewState();
  private projectIds: string[] = [];
  private view: ViewName = 'dashboard';
  private readonly content: HTMLElement;

  constructor(root: HTMLElement, api: ApiClient = new ApiClient()) {
    this.root = root;
    this.api = api;
    this.content = document.createElement('main');

    const nav = document.createElement('nav');
    nav.className = 'app-nav';
    for (const view of ['dashboard', 'summary', 'compare'] as const) {
      const button = document.createElement('button');
      button.type = 'button';
      button.textContent = view[0].toUpperCase() + view.slice(1);
      button.dataset.view = view;
      button.addEventListener('click', () => void this.show(view));
      nav.appendChild(button);
    }
    this.root.replaceChildren(nav, this.content);
  }

  async start(search: string = window.location.search): Promise<void> {
    const fromUrl = ViewState.decodeUrl(search);
    if (fromUrl.length > 0) {
      this.projectIds = fromUrl;
    } else {
      const listing = await this.api.listProjects();
      this.projectIds = listing.projects.map((entry) => entry.meta.project_id);
    }
    this.viewState.loadProjects(this.projectIds);
    await this.show(this.projectIds.length >= 2 ? 'compare' : 'dashboard');
  }

  private pushUrl(): void {
    const query = this.viewState.encodeUrl();
    try {
      history.replaceState(null, '', query || window.location.pathname);
    } catch {
      // environments without history management simply skip URL sync
    }
  }

  async show(view: ViewName): Promise<void> {
    this.view = view;
    for (const button of this.root.querySelectorAll<HTMLButtonElement>('.app-nav button')) {
      button.classList.toggle('active', button.dataset.view === view);
    }
    this.content.replaceChildren();
    if (view === 'dashboard') {
      await this.showDashboard();
    } else if (view === 'summary') {
      await this.showSummary();
    } else {
      await this.showCompare();
    }
    this.pushUrl();
  }

  private async showDashboard(): Promise<void> {
    for (const projectId of this.viewState.panelOrder()) {
      const panel = new ProjectPanel(this.api, { state: this.viewState.panel(projectId) });
      this.content.appendChild(panel.element);
      await panel.init();
    }
  }

  private async showSummary(): Promise<void> {
    if (this.projectIds.length === 0) {
      return;
    }
    const table = await this.api.getSummary(this.viewState.panelOrder());
    this.content.appendChild(renderSummary(table));
  }

  private async showCompare(): Promise<void> {
    if (this.projectIds.length < 2) {
      const note = document.createElement('p');
      note.textContent = 'Load at least two projects to compare.';
      this.content.appendChild(note);
      return;
    }
    const compare = new CompareView(this.api, this.viewState);
    this.content.appendChild(compare.element);
    await compare.load(this.viewState.panelOrder());
  }

  currentView(): ViewName {
    return this.view;
  }
}

const mount = typeof document !== 'undefined' ? document.getElementById('app') : null;
if (mount !== null) {
  const app = new App(mount);
  void app.start();
}
