// Cluster colors come from the served payloads (blocks, graph nodes,
// silhouette clusters all carry hex strings). This mirror of the service
// palette exists only for things the service never colors directly:
// selection chips and KM curves, which must match the clicked blocks.

import type { Modality, SelectionAtom } from './types.js';

const PALETTE_A = ['#1b9e77', '#d95f02', '#7570b3', '#e7298a',
                   '#66a61e', '#e6ab02', '#a6761d', '#666666'];
const PALETTE_B = ['#386cb0', '#f0027f', '#fdc086', '#beaed4',
                   '#7fc97f', '#bf5b17', '#ffff99', '#f781bf'];

export function paletteColor(modality: Modality, cluster: number): string {
  const table = modality === 'a' ? PALETTE_A : PALETTE_B;
  return table[cluster % table.length];
}

/** A selection is colored like its first atom: block atoms take their own
 *  block color, ribbon atoms take the left-hand (modality a) block color. */
export function selectionColor(atoms: SelectionAtom[]): string {
  const first = atoms[0];
  if (!first) return '#999999';
  if (first.kind === 'block') return paletteColor(first.modality, first.cluster);
  return paletteColor('a', first.a);
}
