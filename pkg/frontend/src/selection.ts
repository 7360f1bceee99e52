// Client-side selection algebra over the served parallel-sets model.
//
// Every atom resolves to a set of contingency cells (a, b); a selection's
// patients are the union of its cells' members. Ribbon sizes in the payload
// are exact cell counts, so sizes and overlap checks need no extra
// endpoint and no client-side statistics: two selections overlap exactly
// when they share a cell with a nonzero count.

import type { ParallelSetsPayload, SelectionAtom } from './types.js';

function cellKey(a: number, b: number): string {
  return `${a}:${b}`;
}

export function atomKey(atom: SelectionAtom): string {
  return atom.kind === 'block'
    ? `block:${atom.modality}:${atom.cluster}`
    : `ribbon:${atom.a}:${atom.b}`;
}

export class SelectionModel {
  private cellCounts = new Map<string, number>();
  private kA: number;
  private kB: number;

  constructor(payload: ParallelSetsPayload) {
    this.kA = payload.blocks_a.length;
    this.kB = payload.blocks_b.length;
    for (const ribbon of payload.ribbons) {
      this.cellCounts.set(cellKey(ribbon.a, ribbon.b), ribbon.size);
    }
  }

  /** Cells an atom covers; zero-count cells are skipped. */
  cellsOf(atom: SelectionAtom): string[] {
    const cells: string[] = [];
    if (atom.kind === 'block' && atom.modality === 'a') {
      for (let b = 0; b < this.kB; b++) cells.push(cellKey(atom.cluster, b));
    } else if (atom.kind === 'block') {
      for (let a = 0; a < this.kA; a++) cells.push(cellKey(a, atom.cluster));
    } else {
      cells.push(cellKey(atom.a, atom.b));
    }
    return cells.filter(key => (this.cellCounts.get(key) ?? 0) > 0);
  }

  /** Union of cells over the atoms (absorption falls out of the union). */
  resolveCells(atoms: SelectionAtom[]): Set<string> {
    const cells = new Set<string>();
    for (const atom of atoms) {
      for (const key of this.cellsOf(atom)) cells.add(key);
    }
    return cells;
  }

  size(atoms: SelectionAtom[]): number {
    let total = 0;
    for (const key of this.resolveCells(atoms)) {
      total += this.cellCounts.get(key) ?? 0;
    }
    return total;
  }

  overlaps(atomsA: SelectionAtom[], atomsB: SelectionAtom[]): boolean {
    const cellsA = this.resolveCells(atomsA);
    for (const key of this.resolveCells(atomsB)) {
      if (cellsA.has(key)) return true;
    }
    return false;
  }
}

/** Toggle an atom in a list: present -> removed, absent -> appended. */
export function toggleAtom(atoms: SelectionAtom[],
                           atom: SelectionAtom): SelectionAtom[] {
  const key = atomKey(atom);
  const kept = atoms.filter(existing => atomKey(existing) !== key);
  return kept.length === atoms.length ? [...atoms, atom] : kept;
}
