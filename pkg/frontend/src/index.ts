export { CSV_COLUMNS, SCHEMA_VERSION, SchemaError, parseCsv, extractPoints } from "./schema.js";
export { PRESETS, render, buildPanels, loadRows, type PlotSpec } from "./plot.js";
export { renderSvg } from "./svg.js";
export { main, buildSpec } from "./cli.js";
