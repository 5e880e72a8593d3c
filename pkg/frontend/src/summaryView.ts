import { colorForCount, grayCss } from './geometry.js';
import type { SummaryRow, SummaryTable } from './types.js';

function tableMax(table: SummaryTable): number {
  let max = 0;
  const sections = [table.types, table.relations, table.asils];
  for (const rows of sections) {
    for (const row of rows) {
      for (const value of Object.values(row.counts)) {
        max = Math.max(max, value);
      }
      max = Math.max(max, row.shared);
    }
  }
  return max;
}

function shadedCell(value: number, max: number): HTMLTableCellElement {
  const td = document.createElement('td');
  td.textContent = String(value);
  const level = colorForCount(value, max);
  td.style.backgroundColor = grayCss(level);
  if (level < 140) {
    td.style.color = '#ffffff'; // keep dark cells legible
  }
  td.dataset.level = String(level);
  return td;
}

function renderSection(
  heading: string,
  rows: SummaryRow[],
  projects: string[],
  max: number,
): HTMLElement {
  const section = document.createElement('section');
  section.className = 'summary-section';
  const title = document.createElement('h3');
  title.textContent = heading;
  section.appendChild(title);

  const table = document.createElement('table');
  table.className = 'summary-table';
  const head = table.createTHead().insertRow();
  for (const label of ['', ...projects, 'S']) {
    const th = document.createElement('th');
    th.textContent = label;
    head.appendChild(th);
  }

  const body = table.createTBody();
  const totals = new Map<string, number>(projects.map((p) => [p, 0]));
  let sharedTotal = 0;
  for (const row of rows) {
    const tr = body.insertRow();
    const th = document.createElement('th');
    th.textContent = row.label;
    tr.appendChild(th);
    for (const project of projects) {
      const value = row.counts[project] ?? 0;
      totals.set(project, (totals.get(project) ?? 0) + value);
      tr.appendChild(shadedCell(value, max));
    }
    tr.appendChild(shadedCell(row.shared, max));
    sharedTotal += row.shared;
  }

  const totalRow = table.createTFoot().insertRow();
  totalRow.className = 'summary-total';
  const th = document.createElement('th');
  th.textContent = 'Total';
  totalRow.appendChild(th);
  for (const project of projects) {
    const td = document.createElement('td');
    td.textContent = String(totals.get(project) ?? 0);
    totalRow.appendChild(td);
  }
  const sharedTd = document.createElement('td');
  sharedTd.textContent = String(sharedTotal);
  totalRow.appendChild(sharedTd);

  section.appendChild(table);
  return section;
}

/**
 * Summary View: element-type, relation, and ASIL count tables with one
 * column per project plus the shared column, shaded white-to-gray against
 * the largest count in the whole table.
 */
export function renderSummary(table: SummaryTable): HTMLElement {
  const container = document.createElement('section');
  container.className = 'summary-view';
  const max = tableMax(table);
  container.append(
    renderSection('Element types', table.types, table.projects, max),
    renderSection('Relations', table.relations, table.projects, max),
    renderSection('ASIL', table.asils, table.projects, max),
  );
  return container;
}
