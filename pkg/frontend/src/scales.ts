// Pixel allocation and axis scales. Widths are integer pixels allocated by
// largest remainder so every drawn span stays within 1 px of exact
// proportionality and the total always matches the available span.

export function linearScale(domain: [number, number], range: [number, number]) {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  return (v: number) => span === 0 ? r0 : r0 + ((v - d0) / span) * (r1 - r0);
}

/**
 * Split `span` pixels among `counts` proportionally. Integer results sum to
 * `span` exactly; each entry differs from counts[i]/total*span by < 1 px.
 * Zero counts get zero pixels.
 */
export function allocatePixels(counts: number[], span: number): number[] {
  const total = counts.reduce((s, c) => s + c, 0);
  if (total <= 0 || span <= 0) return counts.map(() => 0);
  const exact = counts.map(c => (c / total) * span);
  const floors = exact.map(Math.floor);
  let leftover = span - floors.reduce((s, f) => s + f, 0);
  const order = exact
    .map((e, i) => ({ i, frac: e - floors[i] }))
    .sort((x, y) => y.frac - x.frac || x.i - y.i);
  const out = floors.slice();
  for (const { i } of order) {
    if (leftover <= 0) break;
    if (counts[i] > 0) {
      out[i] += 1;
      leftover -= 1;
    }
  }
  return out;
}

/** Cumulative offsets for stacked spans: [0, w0, w0+w1, ...]. */
export function stackOffsets(widths: number[]): number[] {
  const offsets = [0];
  for (const w of widths) offsets.push(offsets[offsets.length - 1] + w);
  return offsets;
}
