/** Histogram binning shared by the empirical counts and the analytic
 *  overlay, so mode comparisons are bin-for-bin. */

export interface Binned {
  binStart: number;
  binWidth: number;
  /** total mass per bin (counts or probabilities) */
  mass: number[];
}

export const TARGET_BINS = 48;

export function binWidthFor(lo: number, hi: number): number {
  return Math.max(1, Math.ceil((hi - lo + 1) / TARGET_BINS));
}

/** Bin (x, mass) pairs on a fixed grid anchored at `binStart`. */
export function binSeries(
  xs: number[],
  masses: number[],
  binStart: number,
  binWidth: number,
  nBins: number,
): Binned {
  const mass = new Array<number>(nBins).fill(0);
  for (let i = 0; i < xs.length; i++) {
    const x = xs[i]!;
    const m = masses[i]!;
    const b = Math.floor((x - binStart) / binWidth);
    if (b >= 0 && b < nBins) mass[b] = mass[b]! + m;
  }
  return { binStart, binWidth, mass };
}

export function modeBin(b: Binned): number {
  let best = 0;
  for (let i = 1; i < b.mass.length; i++) {
    if (b.mass[i]! > b.mass[best]!) best = i;
  }
  return best;
}

/** Shared grid covering both series, with the overlay's mode-comparison
 *  contract: empirical and analytic modes land within one bin when the
 *  distributions agree. */
export function sharedGrid(xsA: number[], xsB: number[]) {
  const lo = Math.min(...xsA, ...xsB);
  const hi = Math.max(...xsA, ...xsB);
  const width = binWidthFor(lo, hi);
  const nBins = Math.floor((hi - lo) / width) + 1;
  return { binStart: lo, binWidth: width, nBins };
}
