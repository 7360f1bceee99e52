// ViewState: everything the panels need to render, plus the stale-view
// guard. A view fetched under revision R is discarded and refetched when
// the session revision has moved past R by the time it resolves.

import type { ApiClient } from './api.js';
import type {
  Modality,
  SelectionAtom,
  SurvivalPayload,
  ViewName,
} from './types.js';

export interface ActiveSelection {
  name: string;
  color: string;
  atoms: SelectionAtom[];
  size: number;
}

export interface ClusterParams {
  method: 'kmeans' | 'spectral' | 'community';
  k: number | null;
  seed: number;
  metric: 'euclidean' | 'pearson';
  threshold: number;
}

export const defaultParams = (): ClusterParams => ({
  method: 'kmeans', k: 2, seed: 0, metric: 'euclidean', threshold: 0.0,
});

export class ViewState {
  sessionId: string | null = null;
  revision = 0;
  phase = 'ingested';
  params: Record<Modality, ClusterParams> = {
    a: defaultParams(), b: defaultParams(),
  };
  selections = new Map<string, ActiveSelection>();
  lastSurvival: SurvivalPayload | null = null;
  lastPValueLiteral: string | null = null;

  constructor(private api: ApiClient) {}

  noteRevision(revision: number, phase?: string): void {
    if (revision > this.revision) this.revision = revision;
    if (phase) this.phase = phase;
  }

  /**
   * Fetch a view payload that is current as of the session revision at
   * resolve time. If the revision advanced while the request was in
   * flight, the stale payload is dropped and the fetch retried.
   */
  async fetchView<T>(view: ViewName): Promise<T> {
    if (!this.sessionId) throw new Error('no session');
    for (;;) {
      const asOf = this.revision;
      const payload = await this.api.getView<T>(this.sessionId, view);
      if (this.revision === asOf) return payload;
    }
  }
}

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  cancel(): void;
}

/** Trailing-edge debounce; the returned function also exposes cancel(). */
export function debounce<A extends unknown[]>(
    fn: (...args: A) => void, waitMs: number): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  const wrapped = (...args: A) => {
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      fn(...args);
    }, waitMs);
  };
  return Object.assign(wrapped, {
    cancel: () => {
      if (timer !== null) clearTimeout(timer);
      timer = null;
    },
  });
}
