/**
 * The four standard figures over a run export, rendered server-side to SVG:
 *   price-series   — primary price path with the slot MEV draws
 *   market-share   — redeemed-ticket share per holder
 *   holder-profit  — accumulated earnings, costs and net per holder
 *   mev-capture    — cumulative protocol revenue vs cumulative available MEV
 */

import * as echarts from "echarts";
import type { EChartsOption } from "echarts";
import type { RunExport, TradeRow } from "./data";

export const FIGURE_KINDS = [
  "price-series",
  "market-share",
  "holder-profit",
  "mev-capture",
] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

const PALETTE = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2"];

function round(x: number, digits = 6): number {
  const f = 10 ** digits;
  return Math.round(x * f) / f;
}

export function priceSeriesOption(run: RunExport): EChartsOption {
  const slots = run.slots.map((s) => s.slot);
  const price = run.slots.map((s) => {
    const p = s.quoted_price ?? s.clearing_price;
    return p === null ? null : round(p);
  });
  const mev = run.slots.map((s) => round(s.mev_available));
  return {
    color: PALETTE,
    title: { text: "Primary price per slot" },
    legend: { data: ["price", "available MEV"], top: 28 },
    xAxis: { type: "category", name: "slot", data: slots },
    yAxis: { type: "value", name: "value" },
    series: [
      { name: "price", type: "line", showSymbol: false, connectNulls: true, data: price },
      {
        name: "available MEV",
        type: "line",
        showSymbol: false,
        lineStyle: { opacity: 0.35 },
        data: mev,
      },
    ],
  };
}

export function marketShares(trades: TradeRow[]): Map<number, number> {
  const counts = new Map<number, number>();
  let total = 0;
  for (const t of trades) {
    if (t.venue === "redemption" && t.seller_id !== null) {
      counts.set(t.seller_id, (counts.get(t.seller_id) ?? 0) + 1);
      total += 1;
    }
  }
  if (total === 0) {
    throw new Error("market-share figure needs at least one redemption row");
  }
  return new Map([...counts.entries()].map(([id, c]) => [id, c / total]));
}

export function marketShareOption(run: RunExport): EChartsOption {
  const shares = marketShares(run.trades);
  const holders = run.summary.holders.map((h) => h.id);
  const data = holders.map((id) => round(shares.get(id) ?? 0));
  return {
    color: PALETTE,
    title: { text: "Redeemed-ticket market share" },
    xAxis: { type: "category", name: "holder", data: holders.map((h) => `#${h}`) },
    yAxis: { type: "value", name: "share", max: 1 },
    series: [{ name: "share", type: "bar", data }],
  };
}

export function holderProfitOption(run: RunExport): EChartsOption {
  const holders = run.summary.holders;
  return {
    color: PALETTE,
    title: { text: "Holder earnings and costs" },
    legend: { data: ["earnings", "costs", "net"], top: 28 },
    xAxis: { type: "category", name: "holder", data: holders.map((h) => `#${h.id}`) },
    yAxis: { type: "value", name: "value" },
    series: [
      { name: "earnings", type: "bar", data: holders.map((h) => round(h.accumulated_earnings)) },
      { name: "costs", type: "bar", data: holders.map((h) => round(h.accumulated_costs)) },
      {
        name: "net",
        type: "bar",
        data: holders.map((h) => round(h.accumulated_earnings - h.accumulated_costs)),
      },
    ],
  };
}

export function mevCaptureOption(run: RunExport): EChartsOption {
  const revenueBySlot = new Map<number, number>();
  const availableBySlot = new Map<number, number>();
  for (const t of run.trades) {
    if (t.venue === "primary") {
      revenueBySlot.set(t.slot, (revenueBySlot.get(t.slot) ?? 0) + t.price);
    } else if (t.venue === "refund") {
      revenueBySlot.set(t.slot, (revenueBySlot.get(t.slot) ?? 0) - t.price);
    } else if (t.venue === "redemption" && t.mev_available !== null) {
      availableBySlot.set(t.slot, (availableBySlot.get(t.slot) ?? 0) + t.mev_available);
    }
  }
  const slots = run.slots.map((s) => s.slot);
  let revenue = revenueBySlot.get(0) ?? 0;
  let available = 0;
  const cumRevenue: number[] = [];
  const cumAvailable: number[] = [];
  for (const slot of slots) {
    revenue += revenueBySlot.get(slot) ?? 0;
    available += availableBySlot.get(slot) ?? 0;
    cumRevenue.push(round(revenue));
    cumAvailable.push(round(available));
  }
  return {
    color: PALETTE,
    title: { text: "Cumulative protocol capture vs available MEV" },
    legend: { data: ["protocol revenue", "available MEV"], top: 28 },
    xAxis: { type: "category", name: "slot", data: slots },
    yAxis: { type: "value", name: "cumulative value" },
    series: [
      { name: "protocol revenue", type: "line", showSymbol: false, data: cumRevenue },
      { name: "available MEV", type: "line", showSymbol: false, data: cumAvailable },
    ],
  };
}

const BUILDERS: Record<FigureKind, (run: RunExport) => EChartsOption> = {
  "price-series": priceSeriesOption,
  "market-share": marketShareOption,
  "holder-profit": holderProfitOption,
  "mev-capture": mevCaptureOption,
};

export function figureOption(kind: FigureKind, run: RunExport): EChartsOption {
  const builder = BUILDERS[kind];
  if (!builder) {
    throw new Error(`unknown figure kind: ${kind}`);
  }
  return builder(run);
}

/** Render one figure to a standalone SVG string (no DOM required). */
export function renderFigure(
  kind: FigureKind,
  run: RunExport,
  size: { width: number; height: number } = { width: 900, height: 520 },
): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: size.width,
    height: size.height,
  });
  try {
    chart.setOption({ animation: false, ...figureOption(kind, run) });
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}
