/** Data-derived annotation positions (no recomputation of physics). */

export interface SpectrumSeries {
  x: number[];
  energyByLabel: Map<string, number[]>;
}

/** Group a long-format spectrum table into per-label energy curves. */
export function groupSpectrum(
  x: number[],
  labels: string[],
  energies: number[]
): SpectrumSeries {
  const xs: number[] = [];
  const seen = new Set<number>();
  for (const v of x) {
    if (!seen.has(v)) {
      seen.add(v);
      xs.push(v);
    }
  }
  const byLabel = new Map<string, number[]>();
  for (let i = 0; i < x.length; i++) {
    const label = labels[i];
    if (label === "") continue;
    if (!byLabel.has(label)) byLabel.set(label, new Array(xs.length).fill(NaN));
    const col = xs.indexOf(x[i]);
    byLabel.get(label)![col] = energies[i];
  }
  return { x: xs, energyByLabel: byLabel };
}

/**
 * Linear-interpolated zero of the gap between two labeled energy curves.
 * Returns null when the gap never changes sign.
 */
export function crossingPosition(
  spectrum: SpectrumSeries,
  labelA: string,
  labelB: string
): number | null {
  const a = spectrum.energyByLabel.get(labelA);
  const b = spectrum.energyByLabel.get(labelB);
  if (!a || !b) return null;
  for (let i = 1; i < spectrum.x.length; i++) {
    const g0 = a[i - 1] - b[i - 1];
    const g1 = a[i] - b[i];
    if (!Number.isFinite(g0) || !Number.isFinite(g1)) continue;
    if (g0 === 0) return spectrum.x[i - 1];
    if (Math.sign(g0) !== Math.sign(g1)) {
      const t = g0 / (g0 - g1);
      return spectrum.x[i - 1] + t * (spectrum.x[i] - spectrum.x[i - 1]);
    }
  }
  return null;
}

/** Parabolic-refined argmax of a sampled curve. */
export function peakPosition(x: number[], y: number[]): { x: number; y: number } {
  let k = 0;
  for (let i = 1; i < y.length; i++) if (y[i] > y[k]) k = i;
  if (k === 0 || k === y.length - 1) return { x: x[k], y: y[k] };
  const denom = y[k - 1] - 2 * y[k] + y[k + 1];
  if (denom === 0) return { x: x[k], y: y[k] };
  const shift = (0.5 * (y[k - 1] - y[k + 1])) / denom;
  const h = x[k + 1] - x[k];
  return { x: x[k] + shift * h, y: y[k] - 0.25 * (y[k - 1] - y[k + 1]) * shift };
}
