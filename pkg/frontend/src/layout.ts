// Seeded force-directed placement for the similarity graph. Deterministic:
// the same payload and seed always give the same coordinates, so exported
// screenshots are reproducible. The physics is presentation-only; cluster
// structure comes entirely from the served edges.

import type { GraphPayload } from './types.js';

export interface NodePosition {
  id: string;
  x: number;
  y: number;
}

/** mulberry32: tiny deterministic PRNG, plenty for layout jitter. */
export function seededRandom(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const ITERATIONS = 150;
const REPULSION = 800.0;
const SPRING = 0.02;
const STEP = 0.85;

export function forceLayout(payload: GraphPayload, width: number,
                            height: number, seed = 42): NodePosition[] {
  const nodes = payload.nodes;
  const n = nodes.length;
  if (n === 0) return [];
  const rand = seededRandom(seed);
  const cx = width / 2;
  const cy = height / 2;
  const radius = Math.min(width, height) * 0.38;

  // initial placement: ring in node order plus seeded jitter
  const xs = new Float64Array(n);
  const ys = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    const angle = (2 * Math.PI * i) / n;
    xs[i] = cx + radius * Math.cos(angle) + (rand() - 0.5) * 10;
    ys[i] = cy + radius * Math.sin(angle) + (rand() - 0.5) * 10;
  }

  const index = new Map<string, number>();
  nodes.forEach((node, i) => index.set(node.id, i));
  const springs = payload.links
    .map(link => ({
      i: index.get(link.source)!,
      j: index.get(link.target)!,
      w: link.weight,
    }))
    .filter(s => s.i !== undefined && s.j !== undefined);

  const fx = new Float64Array(n);
  const fy = new Float64Array(n);
  for (let step = 0; step < ITERATIONS; step++) {
    fx.fill(0);
    fy.fill(0);
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let dx = xs[i] - xs[j];
        let dy = ys[i] - ys[j];
        let d2 = dx * dx + dy * dy;
        if (d2 < 1e-6) { dx = 0.01; dy = 0.01; d2 = 2e-4; }
        const push = REPULSION / d2;
        fx[i] += dx * push; fy[i] += dy * push;
        fx[j] -= dx * push; fy[j] -= dy * push;
      }
    }
    for (const { i, j, w } of springs) {
      const dx = xs[j] - xs[i];
      const dy = ys[j] - ys[i];
      const pull = SPRING * w;
      fx[i] += dx * pull; fy[i] += dy * pull;
      fx[j] -= dx * pull; fy[j] -= dy * pull;
    }
    const damp = STEP * (1 - step / ITERATIONS);
    for (let i = 0; i < n; i++) {
      xs[i] += Math.max(-8, Math.min(8, fx[i] * damp));
      ys[i] += Math.max(-8, Math.min(8, fy[i] * damp));
      xs[i] = Math.max(8, Math.min(width - 8, xs[i]));
      ys[i] = Math.max(8, Math.min(height - 8, ys[i]));
    }
  }

  return nodes.map((node, i) => ({ id: node.id, x: xs[i], y: ys[i] }));
}
