import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import {
  FIGURE_KINDS,
  figureOption,
  marketShares,
  renderFigure,
} from "../src/charts";
import {
  MissingColumnError,
  loadRunExport,
  parseSlots,
  parseSummary,
  parseTrades,
} from "../src/data";

const FIXTURE = join(dirname(fileURLToPath(import.meta.url)), "fixtures", "preset1");

const run = loadRunExport(FIXTURE);

describe("export loading", () => {
  it("parses the full fixture export", () => {
    expect(run.slots).toHaveLength(1000);
    expect(run.trades.length).toBeGreaterThan(1000);
    expect(run.summary.holders).toHaveLength(10);
    expect(run.summary.config.preset).toBe("simple-fpa");
    expect(run.summary.metrics.largest_market_share).toBeGreaterThan(0);
  });

  it("parses optional columns as null", () => {
    const primary = run.trades.find((t) => t.venue === "primary");
    expect(primary).toBeDefined();
    expect(primary!.seller_id).toBeNull();
    expect(primary!.mev_available).toBeNull();
    const redemption = run.trades.find((t) => t.venue === "redemption");
    expect(redemption!.mev_available).not.toBeNull();
    expect(redemption!.seller_id).not.toBeNull();
  });

  it("fails with a named-column error on a truncated trades.csv", () => {
    const text = readFileSync(join(FIXTURE, "trades.csv"), "utf8");
    const truncated = text
      .split("\n")
      .map((line) => line.split(",").slice(0, 3).join(","))
      .join("\n");
    expect(() => parseTrades(truncated)).toThrowError(MissingColumnError);
    expect(() => parseTrades(truncated)).toThrowError(/buyer_id/);
    expect(() => parseSlots(truncated)).toThrowError(/quoted_price/);
  });

  it("fails on a summary missing required keys", () => {
    expect(() => parseSummary("{}")).toThrowError(MissingColumnError);
    expect(() => parseSummary('{"config": {}}')).toThrowError(/metrics/);
  });
});

describe("figure data", () => {
  it("market shares sum to one over redeemers", () => {
    const shares = marketShares(run.trades);
    const total = [...shares.values()].reduce((a, b) => a + b, 0);
    expect(total).toBeCloseTo(1.0, 9);
    const largest = Math.max(...shares.values());
    expect(largest).toBeCloseTo(run.summary.metrics.largest_market_share, 6);
  });

  it("throws when no redemptions exist", () => {
    expect(() => marketShares(run.trades.filter((t) => t.venue === "primary"))).toThrowError(
      /redemption/,
    );
  });

  it("builds an option object for every figure kind", () => {
    for (const kind of FIGURE_KINDS) {
      const option = figureOption(kind, run);
      expect(option.series).toBeDefined();
    }
  });
});

describe("SVG rendering", () => {
  it("renders all four figure kinds without error", () => {
    for (const kind of FIGURE_KINDS) {
      const svg = renderFigure(kind, run);
      expect(svg.startsWith("<svg")).toBe(true);
      expect(svg).toContain("</svg>");
      expect(svg.length).toBeGreaterThan(1000);
    }
  });

  it("renders deterministically up to instance ids", () => {
    // each renderer instance gets a fresh zr<N> id prefix; content is stable
    const normalize = (svg: string) =>
      svg.replace(/zr\d+-cls-\d+/g, "zr-cls").replace(/zr\d+/g, "zr");
    const a = normalize(renderFigure("market-share", run));
    const b = normalize(renderFigure("market-share", run));
    expect(a).toBe(b);
  });
});
