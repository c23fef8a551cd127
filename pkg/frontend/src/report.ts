/**
 * Profile view-models.
 *
 * Deliberately free of business logic: every number shown on screen is
 * a field of the report document. Kill statuses are never recomputed
 * here, only selected and grouped for display.
 */

import { OperatorAggregate, Report, ReportMutant } from "./api.js";

/** Per-operator aggregates, verbatim from the report. */
export function operatorRows(report: Report): OperatorAggregate[] {
  return report.operators;
}

/** Mutants the detector missed; these are the product. */
export function survivors(report: Report): ReportMutant[] {
  return report.mutants.filter((m) => m.status === "survived");
}

export interface GridRow {
  operator: string;
  mutants: ReportMutant[];
}

/** Kill-matrix grid: mutants grouped by operator, report order kept. */
export function killGrid(report: Report): GridRow[] {
  const order: string[] = [];
  const rows = new Map<string, ReportMutant[]>();
  for (const mutant of report.mutants) {
    if (!rows.has(mutant.operator)) {
      rows.set(mutant.operator, []);
      order.push(mutant.operator);
    }
    rows.get(mutant.operator)!.push(mutant);
  }
  return order.map((operator) => ({ operator, mutants: rows.get(operator)! }));
}

export interface Totals {
  mutants: number;
  killed: number;
  survived: number;
  error: number;
  skipped: number;
}

/** Sums of the report's own aggregate fields (no recounting mutants). */
export function totals(report: Report): Totals {
  const sum = (pick: (o: OperatorAggregate) => number) =>
    report.operators.reduce((acc, op) => acc + pick(op), 0);
  return {
    mutants: sum((o) => o.total),
    killed: sum((o) => o.killed),
    survived: sum((o) => o.survived),
    error: sum((o) => o.error),
    skipped: sum((o) => o.skipped),
  };
}

export function statusBadge(status: ReportMutant["status"]): string {
  return (
    {
      killed: "badge-killed",
      survived: "badge-survived",
      error: "badge-error",
      skipped: "badge-skipped",
      pending: "badge-skipped",
    } as const
  )[status];
}
