/** Deterministic SVG primitives: scales, ticks, paths, axes.
 *
 * Rendering is a pure function of the input numbers; coordinates are
 * emitted with fixed precision and nothing here consults the clock or
 * any randomness.
 */

export function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  const s = Number(v.toPrecision(6));
  return Object.is(s, -0) ? "0" : String(s);
}

export interface Scale {
  (v: number): number;
  ticks(): number[];
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
  tickCount = 5
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  scale.ticks = () => niceTicks(d0, d1, tickCount);
  return scale;
}

export function logScale(
  domain: [number, number],
  range: [number, number]
): Scale {
  const d0 = Math.log10(domain[0]);
  const d1 = Math.log10(domain[1]);
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((v: number) =>
    r0 + ((Math.log10(Math.max(v, 1e-300)) - d0) / span) * (r1 - r0)) as Scale;
  scale.ticks = () => {
    const out: number[] = [];
    for (let e = Math.ceil(d0); e <= Math.floor(d1); e++) {
      out.push(Number(`1e${e}`));
    }
    return out;
  };
  return scale;
}

export function niceTicks(lo: number, hi: number, count: number): number[] {
  const span = hi - lo || 1;
  const rawStep = span / Math.max(count, 1);
  const mag = 10 ** Math.floor(Math.log10(rawStep));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (rawStep <= m * mag) {
      step = m * mag;
      break;
    }
  }
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

export function tickLabel(v: number, log: boolean): string {
  if (log) {
    const e = Math.round(Math.log10(v));
    return `1e${e}`;
  }
  return fmt(v);
}

export function polyline(
  xs: number[],
  ys: number[],
  sx: Scale,
  sy: Scale
): string {
  const parts: string[] = [];
  let pen = false;
  for (let i = 0; i < xs.length; i++) {
    if (!Number.isFinite(xs[i]) || !Number.isFinite(ys[i])) {
      pen = false;
      continue;
    }
    parts.push(`${pen ? "L" : "M"}${fmt(sx(xs[i]))} ${fmt(sy(ys[i]))}`);
    pen = true;
  }
  return parts.join("");
}

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  body = ""
): string {
  const rendered = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join(" ");
  return body === "" && tag !== "text"
    ? `<${tag} ${rendered}/>`
    : `<${tag} ${rendered}>${body}</${tag}>`;
}

export function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
