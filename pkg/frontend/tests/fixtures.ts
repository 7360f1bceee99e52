// Shared payload fixtures for the suite. Sizes and colors are hand-picked
// so expected pixel widths, cell counts, and hex values can be asserted
// against independent arithmetic in the tests.

import type {
  GraphPayload,
  HeatmapPayload,
  ParallelSetsPayload,
  SilhouettePayload,
  SurvivalPayload,
} from '../src/types.js';

export const COLOR_A0 = '#1b9e77';
export const COLOR_A1 = '#d95f02';
export const COLOR_B0 = '#386cb0';
export const COLOR_B1 = '#f0027f';

/** 2x2 contingency over 8 patients: cells (0,0)=3 (0,1)=1 (1,0)=1 (1,1)=3. */
export function psetsPayload(): ParallelSetsPayload {
  return {
    n: 8,
    blocks_a: [
      { cluster: 0, size: 4, color: COLOR_A0 },
      { cluster: 1, size: 4, color: COLOR_A1 },
    ],
    blocks_b: [
      { cluster: 0, size: 4, color: COLOR_B0 },
      { cluster: 1, size: 4, color: COLOR_B1 },
    ],
    ribbons: [
      { a: 0, b: 0, size: 3 },
      { a: 0, b: 1, size: 1 },
      { a: 1, b: 0, size: 1 },
      { a: 1, b: 1, size: 3 },
    ],
  };
}

export function heatmapPayload(): HeatmapPayload {
  return {
    modality: 'a',
    feature_ids: ['g1', 'g2', 'g3'],
    sample_order: ['s0', 's1', 's2', 's3', 's4', 's5', 's6', 's7'],
    blocks: [
      { cluster: 0, start: 0, size: 4, color: COLOR_A0 },
      { cluster: 1, start: 4, size: 4, color: COLOR_A1 },
    ],
    values: [
      [0, 1, 2, 3, 4, 5, 6, 7],
      [7, 6, 5, 4, 3, 2, 1, 0],
      [1, 1, 2, 2, 3, 3, 4, 4],
    ],
  };
}

export function silhouettePayload(): SilhouettePayload {
  return {
    modality: 'a',
    mean: 0.45,
    clusters: [
      {
        cluster: 0, color: COLOR_A0, mean: 0.6,
        members: [{ id: 's0', s: 0.8 }, { id: 's1', s: 0.4 }],
      },
      {
        cluster: 1, color: COLOR_A1, mean: 0.3,
        members: [{ id: 's2', s: 0.7 }, { id: 's3', s: -0.1 }],
      },
    ],
  };
}

export function graphPayload(): GraphPayload {
  return {
    metric: 'euclidean',
    threshold: 0.3,
    nodes: [
      { id: 's0', cluster: 0, color: COLOR_A0 },
      { id: 's1', cluster: 0, color: COLOR_A0 },
      { id: 's2', cluster: 1, color: COLOR_A1 },
      { id: 's3', cluster: 1, color: COLOR_A1 },
    ],
    links: [
      { source: 's0', target: 's1', weight: 0.9 },
      { source: 's2', target: 's3', weight: 0.8 },
      { source: 's1', target: 's2', weight: 0.35 },
    ],
  };
}

export function survivalPayload(): SurvivalPayload {
  return {
    curves: [
      {
        label: 'sel_1', n_total: 4,
        times: [2, 4], n_at_risk: [4, 2], events: [1, 1],
        survival: [0.75, 0.375],
        variance: [0.01, 0.05],
        censor_times: [3],
        variance_saturated: false,
      },
      {
        label: 'sel_2', n_total: 4,
        times: [5], n_at_risk: [4], events: [1],
        survival: [0.75],
        variance: [0.02],
        censor_times: [6, 7],
        variance_saturated: false,
      },
    ],
    logrank: {
      labels: ['sel_1', 'sel_2'],
      observed: [2, 1], expected: [1.2, 1.8],
      statistic: 0.9, degrees_of_freedom: 1,
      p_value: 1e-5,
    },
    revision: 7,
    phase: 'integrated',
  };
}

/** Raw body whose p_value literal differs from what String(parsed) gives. */
export function survivalRawBody(): string {
  // JSON.stringify renders 1e-5 as 0.00001, so splice the literal in by hand
  const body = JSON.stringify(survivalPayload());
  return body.replace('"p_value":0.00001', '"p_value": 1e-05');
}
