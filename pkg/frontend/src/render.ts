import type { LayoutResult } from './types.js';
import type { Point } from './geometry.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

const GROUP_PALETTE = [
  '#4e79a7', '#f28e2b', '#e15759', '#76b7b2', '#59a14f',
  '#edc948', '#b07aa1', '#ff9da7', '#9c755f', '#bab0ac',
];

export interface SceneCallbacks {
  onHover?: (nodeId: string | null) => void;
  onClick?: (nodeId: string, event: MouseEvent) => void;
  onContextMenu?: (nodeId: string, event: MouseEvent) => void;
  onLasso?: (polygon: Point[]) => void;
  onGroupDrag?: (groupKey: string, cx: number, cy: number) => void;
}

export interface SceneHandles {
  svg: SVGSVGElement;
  highlight: (ids: ReadonlySet<string>, className: string) => void;
  clearHighlight: (className: string) => void;
}

function svgElement<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG_NS, tag);
}

function svgPoint(svg: SVGSVGElement, event: MouseEvent): Point {
  const rect = svg.getBoundingClientRect();
  let viewX = 0;
  let viewY = 0;
  let viewWidth = 0;
  let viewHeight = 0;
  const raw = svg.getAttribute('viewBox');
  if (raw !== null) {
    const parts = raw.trim().split(/[\s,]+/).map(Number);
    if (parts.length === 4 && parts.every(Number.isFinite)) {
      [viewX, viewY, viewWidth, viewHeight] = parts;
    }
  }
  const scaleX = rect.width > 0 && viewWidth > 0 ? viewWidth / rect.width : 1;
  const scaleY = rect.height > 0 && viewHeight > 0 ? viewHeight / rect.height : 1;
  return {
    x: viewX + (event.clientX - rect.left) * scaleX,
    y: viewY + (event.clientY - rect.top) * scaleY,
  };
}

/**
 * Vector scene for one project panel, drawn straight from the server's
 * layout result: convex hulls underneath, then node circles, then group
 * labels. Node circles carry data-node-id so interaction layers and tests
 * can address them.
 */
export function renderScene(
  layout: LayoutResult,
  callbacks: SceneCallbacks = {},
  viewBox: [number, number, number, number] = [0, 0, 1200, 800],
): SceneHandles {
  const svg = svgElement('svg');
  svg.setAttribute('viewBox', viewBox.join(' '));
  svg.setAttribute('class', 'scene');
  svg.setAttribute('data-project', layout.project);

  const hullLayer = svgElement('g');
  hullLayer.setAttribute('class', 'hulls');
  const nodeLayer = svgElement('g');
  nodeLayer.setAttribute('class', 'nodes');
  const labelLayer = svgElement('g');
  labelLayer.setAttribute('class', 'labels');
  svg.append(hullLayer, nodeLayer, labelLayer);

  const colorByGroup = new Map<string, string>();
  layout.groups.forEach((group, index) => {
    colorByGroup.set(group.key, GROUP_PALETTE[index % GROUP_PALETTE.length]);
  });

  for (const group of layout.groups) {
    const hull = layout.hulls[group.key];
    if (hull && hull.length >= 3) {
      const polygon = svgElement('polygon');
      polygon.setAttribute('points', hull.map(([x, y]) => `${x},${y}`).join(' '));
      polygon.setAttribute('class', 'hull');
      polygon.setAttribute('data-group', group.key);
      hullLayer.appendChild(polygon);
    }
    const label = svgElement('text');
    label.textContent = group.label;
    label.setAttribute('x', String(group.cx));
    label.setAttribute('y', String(group.cy - group.R - 4));
    label.setAttribute('class', 'group-label');
    label.setAttribute('data-group', group.key);
    if (callbacks.onGroupDrag) {
      attachGroupDrag(svg, label, group.key, callbacks.onGroupDrag);
    }
    labelLayer.appendChild(label);
  }

  for (const [id, node] of Object.entries(layout.nodes)) {
    const circle = svgElement('circle');
    circle.setAttribute('cx', String(node.x));
    circle.setAttribute('cy', String(node.y));
    circle.setAttribute('r', String(node.r));
    circle.setAttribute('fill', colorByGroup.get(node.group) ?? '#888888');
    circle.setAttribute('class', 'node');
    circle.setAttribute('data-node-id', id);
    circle.setAttribute('data-group', node.group);
    circle.addEventListener('mouseenter', () => callbacks.onHover?.(id));
    circle.addEventListener('mouseleave', () => callbacks.onHover?.(null));
    circle.addEventListener('click', (event) => callbacks.onClick?.(id, event));
    circle.addEventListener('contextmenu', (event) => {
      event.preventDefault();
      callbacks.onContextMenu?.(id, event);
    });
    nodeLayer.appendChild(circle);
  }

  if (callbacks.onLasso) {
    attachLasso(svg, callbacks.onLasso);
  }

  return {
    svg,
    highlight: (ids, className) => {
      for (const circle of svg.querySelectorAll<SVGCircleElement>('circle.node')) {
        circle.classList.toggle(className, ids.has(circle.getAttribute('data-node-id') ?? ''));
      }
    },
    clearHighlight: (className) => {
      for (const circle of svg.querySelectorAll<SVGCircleElement>('circle.node')) {
        circle.classList.remove(className);
      }
    },
  };
}

/** Free-form lasso: drag on the background collects the polygon outline. */
function attachLasso(svg: SVGSVGElement, onLasso: (polygon: Point[]) => void): void {
  let vertices: Point[] = [];
  let trail: SVGPolylineElement | null = null;

  svg.addEventListener('pointerdown', (event) => {
    if ((event.target as Element).classList.contains('node')) {
      return; // node clicks are selection, not lasso
    }
    vertices = [svgPoint(svg, event)];
    trail = svgElement('polyline');
    trail.setAttribute('class', 'lasso-trail');
    svg.appendChild(trail);
  });
  svg.addEventListener('pointermove', (event) => {
    if (trail === null) {
      return;
    }
    vertices.push(svgPoint(svg, event));
    trail.setAttribute('points', vertices.map((p) => `${p.x},${p.y}`).join(' '));
  });
  svg.addEventListener('pointerup', () => {
    if (trail === null) {
      return;
    }
    trail.remove();
    trail = null;
    onLasso(vertices);
    vertices = [];
  });
}

function attachGroupDrag(
  svg: SVGSVGElement,
  label: SVGTextElement,
  groupKey: string,
  onGroupDrag: (groupKey: string, cx: number, cy: number) => void,
): void {
  let dragging = false;
  let last: Point | null = null;
  label.addEventListener('pointerdown', (event) => {
    dragging = true;
    last = svgPoint(svg, event);
    event.stopPropagation(); // keep the lasso out of group drags
  });
  svg.addEventListener('pointermove', (event) => {
    if (dragging) {
      last = svgPoint(svg, event);
    }
  });
  svg.addEventListener('pointerup', () => {
    if (dragging && last !== null) {
      dragging = false;
      onGroupDrag(groupKey, last.x, last.y);
      last = null;
    }
  });
}

/**
 * Rasterize the panel's vector scene for image export. Resolves to a PNG
 * data URL drawn from the serialized SVG.
 */
export function exportSceneAsPng(svg: SVGSVGElement, width = 1200, height = 800): Promise<string> {
  const markup = new XMLSerializer().serializeToString(svg);
  const blobUrl = URL.createObjectURL(new Blob([markup], { type: 'image/svg+xml' }));
  return new Promise((resolve, reject) => {
    const image = new Image();
    image.onload = () => {
      const canvas = document.createElement('canvas');
      canvas.width = width;
      canvas.height = height;
      const context = canvas.getContext('2d');
      if (context === null) {
        URL.revokeObjectURL(blobUrl);
        reject(new Error('canvas 2d context unavailable'));
        return;
      }
      context.fillStyle = '#ffffff';
      context.fillRect(0, 0, width, height);
      context.drawImage(image, 0, 0, width, height);
      URL.revokeObjectURL(blobUrl);
      resolve(canvas.toDataURL('image/png'));
    };
    image.onerror = () => {
      URL.revokeObjectURL(blobUrl);
      reject(new Error('failed to load serialized scene'));
    };
    image.src = blobUrl;
  });
}
