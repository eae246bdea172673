export { plotScaling, scalingSeries, SCALING_COLUMNS } from "./scaling.js";
export { plotBias, biasSeries, BIAS_COLUMNS } from "./bias.js";
export { parseCsv, requireColumns, SchemaMismatch, EmptyInput } from "./csv.js";
