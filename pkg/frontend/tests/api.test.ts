// @vitest-environment jsdom
import { describe, expect, it } from 'vitest';
import { ApiClient, ApiError, extractPValueLiteral } from '../src/api.js';
import type { FetchFn } from '../src/api.js';
import { survivalRawBody } from './fixtures.js';

interface Call {
  url: string;
  init?: RequestInit;
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(
    typeof body === 'string' ? body : JSON.stringify(body),
    { status, headers: { 'content-type': 'application/json' } });
}

function recordingClient(responder: (call: Call) => Response) {
  const calls: Call[] = [];
  const fetchFn: FetchFn = async (url, init) => {
    const call = { url, init };
    calls.push(call);
    return responder(call);
  };
  return { client: new ApiClient('', fetchFn), calls };
}

describe('endpoint paths and bodies', () => {
  it('posts the three cohort files as multipart form fields', async () => {
    const { client, calls } = recordingClient(() =>
      jsonResponse({ session_id: 'S', revision: 0, phase: 'ingested',
                     summary: { samples: 4, features_a: 2, features_b: 2,
                                dropped: {} } }));
    const blob = new Blob(['x']);
    await client.createSession({ matrixA: blob, matrixB: blob, clinical: blob });
    expect(calls[0].url).toBe('/sessions');
    expect(calls[0].init?.method).toBe('POST');
    const form = calls[0].init?.body as FormData;
    expect([...form.keys()].sort()).toEqual(['clinical', 'matrix_a', 'matrix_b']);
  });

  it('addresses features, clustering, views, and selections per session', async () => {
    const { client, calls } = recordingClient(() => jsonResponse({}));
    await client.listFeatures('S', 'a', 0, 12);
    await client.setFeatures('S', 'b', ['g1', 'g2']);
    await client.cluster('S', 'a', { method: 'kmeans', k: 2, seed: 7 });
    await client.getView('S', 'parallel_sets');
    await client.defineSelection('S', 'sel_1',
      [{ kind: 'block', modality: 'a', cluster: 0 }]);

    expect(calls.map(c => c.url)).toEqual([
      '/sessions/S/features/a?offset=0&limit=12',
      '/sessions/S/features/b',
      '/sessions/S/cluster/a',
      '/sessions/S/views/parallel_sets',
      '/sessions/S/selections',
    ]);
    expect(JSON.parse(calls[1].init?.body as string))
      .toEqual({ features: ['g1', 'g2'] });
    expect(JSON.parse(calls[2].init?.body as string))
      .toEqual({ method: 'kmeans', k: 2, seed: 7 });
    expect(JSON.parse(calls[4].init?.body as string)).toEqual({
      name: 'sel_1',
      atoms: [{ kind: 'block', modality: 'a', cluster: 0 }],
    });
  });

  it('builds export URLs with the format query', () => {
    const { client } = recordingClient(() => jsonResponse({}));
    expect(client.exportUrl('S', 'heatmap_a', 'svg_data'))
      .toBe('/sessions/S/export/heatmap_a?format=svg_data');
    expect(client.exportUrl('S', 'survival', 'csv'))
      .toBe('/sessions/S/export/survival?format=csv');
  });
});

describe('error envelopes', () => {
  it('surfaces the service error code and status', async () => {
    const { client } = recordingClient(() => jsonResponse(
      { code: 'phase_violation', message: 'cluster both modalities first',
        detail: { phase: 'ingested' } },
      409));
    const failure = client.getView('S', 'parallel_sets');
    await expect(failure).rejects.toBeInstanceOf(ApiError);
    await failure.catch((err: ApiError) => {
      expect(err.code).toBe('phase_violation');
      expect(err.status).toBe(409);
      expect(err.message).toBe('cluster both modalities first');
    });
  });

  it('wraps a non-JSON failure body in a generic envelope', async () => {
    const { client } = recordingClient(() =>
      new Response('bad gateway', { status: 502 }));
    await client.getSession('S').catch((err: ApiError) => {
      expect(err.code).toBe('error');
      expect(err.message).toBe('bad gateway');
    });
  });
});

describe('in-flight cancellation', () => {
  function gatedFetch() {
    const pending: Array<(r: Response) => void> = [];
    const fetchFn: FetchFn = (_url, init) =>
      new Promise<Response>((resolve, reject) => {
        init?.signal?.addEventListener('abort',
          () => reject(new DOMException('Aborted', 'AbortError')));
        pending.push(resolve);
      });
    return { fetchFn, pending };
  }

  it('aborts the previous request for the same view', async () => {
    const { fetchFn, pending } = gatedFetch();
    const client = new ApiClient('', fetchFn);
    const first = client.getView('S', 'graph_a');
    const second = client.getView('S', 'graph_a');
    await expect(first).rejects.toMatchObject({ name: 'AbortError' });
    pending[1](jsonResponse({ nodes: [] }));
    await expect(second).resolves.toEqual({ nodes: [] });
  });

  it('leaves requests for other views running', async () => {
    const { fetchFn, pending } = gatedFetch();
    const client = new ApiClient('', fetchFn);
    const graphA = client.getView('S', 'graph_a');
    const graphB = client.getView('S', 'graph_b');
    pending[0](jsonResponse({ view: 'a' }));
    pending[1](jsonResponse({ view: 'b' }));
    await expect(graphA).resolves.toEqual({ view: 'a' });
    await expect(graphB).resolves.toEqual({ view: 'b' });
  });
});

describe('verbatim p-value extraction', () => {
  it('pulls the literal out of the raw body text', () => {
    expect(extractPValueLiteral('{"p_value": 1e-05}')).toBe('1e-05');
    expect(extractPValueLiteral('{"p_value":0.03125}')).toBe('0.03125');
    expect(extractPValueLiteral('{"p_value": 3.2e-16,"x":1}')).toBe('3.2e-16');
  });

  it('returns null when the test was skipped or absent', () => {
    expect(extractPValueLiteral('{"p_value": null}')).toBeNull();
    expect(extractPValueLiteral('{"statistic": 4}')).toBeNull();
  });

  it('keeps the exponent form the service sent', async () => {
    const raw = survivalRawBody();
    expect(raw).toContain('"p_value": 1e-05');
    const { client } = (() => {
      const fetchFn: FetchFn = async () => new Response(raw, { status: 200 });
      return { client: new ApiClient('', fetchFn) };
    })();
    const { payload, pValueLiteral } = await client.runSurvival('S', ['x', 'y']);
    expect(pValueLiteral).toBe('1e-05');
    // JSON.parse round-trips the value but loses the original spelling
    expect(payload.logrank?.p_value).toBe(1e-5);
    expect(String(payload.logrank?.p_value)).not.toBe('1e-05');
  });
});
