export {
  FIGURE_KINDS,
  figureOption,
  holderProfitOption,
  marketShareOption,
  marketShares,
  mevCaptureOption,
  priceSeriesOption,
  renderFigure,
} from "./charts";
export type { FigureKind } from "./charts";
export {
  MissingColumnError,
  SLOTS_COLUMNS,
  TRADES_COLUMNS,
  loadRunExport,
  parseSlots,
  parseSummary,
  parseTrades,
} from "./data";
export type {
  HolderSummary,
  RunExport,
  RunSummary,
  SlotRow,
  TradeRow,
  Venue,
} from "./data";
