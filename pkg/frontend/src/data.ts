/**
 * Loading and validation of simulation run exports:
 * trades.csv, slots.csv and summary.json written by the simulator CLI.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";
import Papa from "papaparse";

export class MissingColumnError extends Error {
  constructor(
    public readonly file: string,
    public readonly columns: string[],
  ) {
    super(`${file}: missing required column(s): ${columns.join(", ")}`);
    this.name = "MissingColumnError";
  }
}

export type Venue = "primary" | "secondary" | "refund" | "redemption";

export interface TradeRow {
  slot: number;
  venue: Venue;
  ticket_id: number;
  buyer_id: number | null;
  seller_id: number | null;
  price: number;
  mev_available: number | null;
  mev_extracted: number | null;
}

export interface SlotRow {
  slot: number;
  quoted_price: number | null;
  clearing_price: number | null;
  mev_available: number;
  volatility: number;
  redeemer_id: number | null;
  outstanding: number;
}

export interface HolderSummary {
  id: number;
  tier: string;
  available_funds: number;
  mev_capture_rate: number;
  accumulated_earnings: number;
  accumulated_costs: number;
}

export interface RunSummary {
  config: Record<string, unknown>;
  seed: number;
  metrics: Record<string, number>;
  protocol_revenue: number;
  total_mev_available: number;
  unfilled_slots: number;
  holders: HolderSummary[];
}

export interface RunExport {
  trades: TradeRow[];
  slots: SlotRow[];
  summary: RunSummary;
}

export const TRADES_COLUMNS = [
  "slot",
  "venue",
  "ticket_id",
  "buyer_id",
  "seller_id",
  "price",
  "mev_available",
  "mev_extracted",
] as const;

export const SLOTS_COLUMNS = [
  "slot",
  "quoted_price",
  "clearing_price",
  "mev_available",
  "volatility",
  "redeemer_id",
  "outstanding",
] as const;

function parseCsv(
  file: string,
  text: string,
  required: readonly string[],
): Record<string, string>[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  const missing = required.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new MissingColumnError(file, missing);
  }
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new Error(`${file}: parse error at row ${first.row}: ${first.message}`);
  }
  return parsed.data;
}

const optInt = (v: string): number | null => (v === "" ? null : Number.parseInt(v, 10));
const optFloat = (v: string): number | null => (v === "" ? null : Number.parseFloat(v));

export function parseTrades(text: string, file = "trades.csv"): TradeRow[] {
  return parseCsv(file, text, TRADES_COLUMNS).map((row) => ({
    slot: Number.parseInt(row.slot, 10),
    venue: row.venue as Venue,
    ticket_id: Number.parseInt(row.ticket_id, 10),
    buyer_id: optInt(row.buyer_id),
    seller_id: optInt(row.seller_id),
    price: Number.parseFloat(row.price),
    mev_available: optFloat(row.mev_available),
    mev_extracted: optFloat(row.mev_extracted),
  }));
}

export function parseSlots(text: string, file = "slots.csv"): SlotRow[] {
  return parseCsv(file, text, SLOTS_COLUMNS).map((row) => ({
    slot: Number.parseInt(row.slot, 10),
    quoted_price: optFloat(row.quoted_price),
    clearing_price: optFloat(row.clearing_price),
    mev_available: Number.parseFloat(row.mev_available),
    volatility: Number.parseFloat(row.volatility),
    redeemer_id: optInt(row.redeemer_id),
    outstanding: Number.parseInt(row.outstanding, 10),
  }));
}

const SUMMARY_KEYS = ["config", "metrics", "holders", "protocol_revenue", "total_mev_available"];

export function parseSummary(text: string, file = "summary.json"): RunSummary {
  const data = JSON.parse(text) as RunSummary;
  const missing = SUMMARY_KEYS.filter((k) => !(k in data));
  if (missing.length > 0) {
    throw new MissingColumnError(file, missing);
  }
  return data;
}

/** Read a full export directory produced by the simulator's `run` command. */
export function loadRunExport(dir: string): RunExport {
  return {
    trades: parseTrades(readFileSync(join(dir, "trades.csv"), "utf8")),
    slots: parseSlots(readFileSync(join(dir, "slots.csv"), "utf8")),
    summary: parseSummary(readFileSync(join(dir, "summary.json"), "utf8")),
  };
}
