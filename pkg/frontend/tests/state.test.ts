import { afterEach, describe, expect, it, vi } from 'vitest';
import type { ApiClient } from '../src/api.js';
import { ViewState, debounce, defaultParams } from '../src/state.js';

describe('ViewState revisions', () => {
  it('only moves the revision forward', () => {
    const state = new ViewState({} as ApiClient);
    state.noteRevision(3, 'clustered');
    state.noteRevision(2);
    expect(state.revision).toBe(3);
    expect(state.phase).toBe('clustered');
    state.noteRevision(5, 'integrated');
    expect(state.revision).toBe(5);
    expect(state.phase).toBe('integrated');
  });

  it('refetches a view that resolved under a stale revision', async () => {
    let state!: ViewState;
    const getView = vi.fn(async () => {
      // first response lands after the session moved on
      if (getView.mock.calls.length === 1) state.noteRevision(9);
      return { fetchedAt: getView.mock.calls.length };
    });
    state = new ViewState({ getView } as unknown as ApiClient);
    state.sessionId = 'S';

    const payload = await state.fetchView<{ fetchedAt: number }>('heatmap_a');
    expect(getView).toHaveBeenCalledTimes(2);
    expect(payload.fetchedAt).toBe(2);
  });

  it('returns a payload fetched at the current revision immediately', async () => {
    const getView = vi.fn(async () => ({ ok: true }));
    const state = new ViewState({ getView } as unknown as ApiClient);
    state.sessionId = 'S';
    state.noteRevision(4);
    await expect(state.fetchView('graph_b')).resolves.toEqual({ ok: true });
    expect(getView).toHaveBeenCalledTimes(1);
  });

  it('refuses to fetch views without a session', async () => {
    const state = new ViewState({} as ApiClient);
    await expect(state.fetchView('heatmap_a')).rejects.toThrow(/no session/);
  });

  it('starts each modality from the same defaults', () => {
    const state = new ViewState({} as ApiClient);
    expect(state.params.a).toEqual(defaultParams());
    state.params.a.k = 5;
    expect(state.params.b.k).toBe(2);
  });
});

describe('debounce', () => {
  afterEach(() => vi.useRealTimers());

  it('fires once, trailing edge, with the last arguments', () => {
    vi.useFakeTimers();
    const hits: number[] = [];
    const fn = debounce((v: number) => hits.push(v), 250);
    fn(1);
    vi.advanceTimersByTime(200);
    fn(2);
    vi.advanceTimersByTime(200);
    fn(3);
    expect(hits).toEqual([]);
    vi.advanceTimersByTime(250);
    expect(hits).toEqual([3]);
  });

  it('cancel drops the pending call', () => {
    vi.useFakeTimers();
    const fn = vi.fn();
    const wrapped = debounce(fn, 250);
    wrapped();
    wrapped.cancel();
    vi.advanceTimersByTime(1000);
    expect(fn).not.toHaveBeenCalled();
  });
});
