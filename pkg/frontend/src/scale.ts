/** Linear and log10 axis scales with round-step tick placement. */

export interface Scale {
  (value: number): number;
  ticks: number[];
  label(value: number): string;
}

function roundStep(span: number, count: number): number {
  const raw = span / Math.max(1, count);
  const power = Math.pow(10, Math.floor(Math.log10(raw)));
  const unit = raw / power;
  const nice = unit >= 5 ? 10 : unit >= 2 ? 5 : unit >= 1 ? 2 : 1;
  return nice * power;
}

export function linear(
  lo: number,
  hi: number,
  rangeLo: number,
  rangeHi: number,
  tickCount = 6,
): Scale {
  if (!(hi > lo)) {
    // Degenerate data domain; widen symmetrically so the plot stays usable.
    const pad = lo === 0 ? 1 : Math.abs(lo) * 0.5;
    lo -= pad;
    hi += pad;
  }
  const step = roundStep(hi - lo, tickCount);
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  const decimals = Math.max(0, -Math.floor(Math.log10(step) + 1e-9));
  const scale = ((value: number) =>
    rangeLo + ((value - lo) / (hi - lo)) * (rangeHi - rangeLo)) as Scale;
  scale.ticks = ticks;
  scale.label = (value) => value.toFixed(decimals);
  return scale;
}

/** Log10 scale over positive values; ticks at decades. */
export function log10(
  lo: number,
  hi: number,
  rangeLo: number,
  rangeHi: number,
): Scale {
  if (!(lo > 0) || !(hi > lo)) {
    throw new Error(`log scale needs 0 < lo < hi, got [${lo}, ${hi}]`);
  }
  const logLo = Math.log10(lo);
  const logHi = Math.log10(hi);
  const ticks: number[] = [];
  for (let k = Math.ceil(logLo - 1e-9); k <= logHi + 1e-9; k += 1) {
    ticks.push(Math.pow(10, k));
  }
  const scale = ((value: number) =>
    rangeLo + ((Math.log10(value) - logLo) / (logHi - logLo)) * (rangeHi - rangeLo)) as Scale;
  scale.ticks = ticks;
  scale.label = (value) => {
    const k = Math.round(Math.log10(value));
    return k >= 0 && k <= 3 ? Math.pow(10, k).toFixed(0) : `1e${k}`;
  };
  return scale;
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const value of values) {
    if (value < lo) lo = value;
    if (value > hi) hi = value;
  }
  return [lo, hi];
}
