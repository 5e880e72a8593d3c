export interface Column<Row> {
  key: string;
  label: string;
  value: (row: Row) => string | number;
}

export type SortDirection = 'asc' | 'desc';

/**
 * Stable, total reorder of rows by one column. Equal keys keep their
 * relative input order; numbers compare numerically, everything else as
 * strings.
 */
export function sortRows<Row>(
  rows: readonly Row[],
  column: Column<Row>,
  direction: SortDirection,
): Row[] {
  const sign = direction === 'asc' ? 1 : -1;
  const decorated = rows.map((row, index) => ({ row, index, key: column.value(row) }));
  decorated.sort((a, b) => {
    let order: number;
    if (typeof a.key === 'number' && typeof b.key === 'number') {
      order = a.key === b.key ? 0 : a.key < b.key ? -1 : 1;
    } else {
      order = String(a.key).localeCompare(String(b.key));
    }
    if (order !== 0) {
      return sign * order;
    }
    return a.index - b.index; // stability under the hood, explicit on purpose
  });
  return decorated.map((entry) => entry.row);
}

export interface TableHandles<Row> {
  table: HTMLTableElement;
  /** Re-render the body with new rows, keeping header and sort handlers. */
  setRows: (rows: readonly Row[]) => void;
}

export interface TableOptions<Row> {
  columns: Column<Row>[];
  rowId: (row: Row) => string;
  onRowClick?: (id: string, event: MouseEvent) => void;
}

/** Plain datatable: clickable headers toggle a stable sort on that column. */
export function createTable<Row>(rows: readonly Row[], options: TableOptions<Row>): TableHandles<Row> {
  const table = document.createElement('table');
  table.className = 'datatable';
  const head = table.createTHead();
  const headRow = head.insertRow();
  const body = table.createTBody();

  let current: Row[] = [...rows];
  let sortKey: string | null = null;
  let direction: SortDirection = 'asc';

  const renderBody = () => {
    body.replaceChildren();
    for (const row of current) {
      const tr = body.insertRow();
      tr.dataset.rowId = options.rowId(row);
      for (const column of options.columns) {
        const td = tr.insertCell();
        td.textContent = String(column.value(row));
      }
      if (options.onRowClick) {
        tr.addEventListener('click', (event) => options.onRowClick?.(tr.dataset.rowId ?? '', event));
      }
    }
  };

  for (const column of options.columns) {
    const th = document.createElement('th');
    th.textContent = column.label;
    th.dataset.key = column.key;
    th.addEventListener('click', () => {
      direction = sortKey === column.key && direction === 'asc' ? 'desc' : 'asc';
      sortKey = column.key;
      current = sortRows(current, column, direction);
      renderBody();
    });
    headRow.appendChild(th);
  }

  renderBody();
  return {
    table,
    setRows: (next) => {
      current = [...next];
      if (sortKey !== null) {
        const column = options.columns.find((c) => c.key === sortKey);
        if (column) {
          current = sortRows(current, column, direction);
        }
      }
      renderBody();
    },
  };
}
