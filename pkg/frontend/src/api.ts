// Thin typed client for the service endpoints. Each view fetch is keyed so
// a newer request for the same view aborts the one still in flight.

import type {
  ClusterRequest,
  ClusterResult,
  ErrorEnvelope,
  FeaturePage,
  Modality,
  SelectionAtom,
  SelectionResult,
  SessionSummary,
  SetFeaturesResult,
  SurvivalPayload,
  ViewName,
} from './types.js';

export type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  code: string;
  status: number;
  detail: unknown;

  constructor(status: number, envelope: ErrorEnvelope) {
    super(envelope.message);
    this.code = envelope.code;
    this.status = status;
    this.detail = envelope.detail;
  }
}

/** Survival responses keep the raw body so the p-value literal can be
 *  displayed verbatim (JSON.parse would re-render the number). */
export interface SurvivalResponse {
  payload: SurvivalPayload;
  pValueLiteral: string | null;
}

export function extractPValueLiteral(rawBody: string): string | null {
  const match = rawBody.match(/"p_value"\s*:\s*([0-9eE+.-]+|null)/);
  if (!match || match[1] === 'null') return null;
  return match[1];
}

export class ApiClient {
  private base: string;
  private fetchFn: FetchFn;
  private inflight = new Map<string, AbortController>();

  constructor(baseUrl = '', fetchFn: FetchFn = (...args) => fetch(...args)) {
    this.base = baseUrl.replace(/\/$/, '');
    this.fetchFn = fetchFn;
  }

  /** Abort a previous request with the same key (per-view cancellation). */
  private signalFor(key: string | undefined): AbortSignal | undefined {
    if (!key) return undefined;
    this.inflight.get(key)?.abort();
    const controller = new AbortController();
    this.inflight.set(key, controller);
    return controller.signal;
  }

  private async request<T>(path: string, init: RequestInit = {},
                           cancelKey?: string): Promise<T> {
    const signal = this.signalFor(cancelKey);
    const response = await this.fetchFn(this.base + path, { ...init, signal });
    const body = await response.text();
    if (!response.ok) {
      throw new ApiError(response.status, parseEnvelope(body));
    }
    return JSON.parse(body) as T;
  }

  createSession(files: { matrixA: Blob; matrixB: Blob; clinical: Blob })
      : Promise<SessionSummary> {
    const form = new FormData();
    form.append('matrix_a', files.matrixA);
    form.append('matrix_b', files.matrixB);
    form.append('clinical', files.clinical);
    return this.request('/sessions', { method: 'POST', body: form });
  }

  getSession(sessionId: string): Promise<SessionSummary> {
    return this.request(`/sessions/${sessionId}`);
  }

  listFeatures(sessionId: string, modality: Modality, offset = 0,
               limit = 100): Promise<FeaturePage> {
    return this.request(
      `/sessions/${sessionId}/features/${modality}?offset=${offset}&limit=${limit}`);
  }

  setFeatures(sessionId: string, modality: Modality,
              features: string[] | string): Promise<SetFeaturesResult> {
    return this.request(`/sessions/${sessionId}/features/${modality}`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ features }),
    });
  }

  cluster(sessionId: string, modality: Modality,
          params: ClusterRequest): Promise<ClusterResult> {
    return this.request(`/sessions/${sessionId}/cluster/${modality}`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(params),
    });
  }

  getView<T>(sessionId: string, view: ViewName): Promise<T> {
    return this.request(`/sessions/${sessionId}/views/${view}`, {},
                        `view:${view}`);
  }

  defineSelection(sessionId: string, name: string,
                  atoms: SelectionAtom[]): Promise<SelectionResult> {
    return this.request(`/sessions/${sessionId}/selections`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ name, atoms }),
    });
  }

  async runSurvival(sessionId: string,
                    selections: string[]): Promise<SurvivalResponse> {
    const signal = this.signalFor('survival');
    const response = await this.fetchFn(
      `${this.base}/sessions/${sessionId}/survival`,
      {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ selections }),
        signal,
      });
    const body = await response.text();
    if (!response.ok) {
      throw new ApiError(response.status, parseEnvelope(body));
    }
    return {
      payload: JSON.parse(body) as SurvivalPayload,
      pValueLiteral: extractPValueLiteral(body),
    };
  }

  exportUrl(sessionId: string, view: string, format: 'svg_data' | 'csv'): string {
    return `${this.base}/sessions/${sessionId}/export/${view}?format=${format}`;
  }
}

function parseEnvelope(body: string): ErrorEnvelope {
  try {
    const parsed = JSON.parse(body);
    if (parsed && typeof parsed.code === 'string') {
      return parsed as ErrorEnvelope;
    }
  } catch {
    // fall through to the generic envelope
  }
  return { code: 'error', message: body || 'request failed', detail: null };
}
