// Panel wiring for the single-page client. All analysis state changes
// round-trip through the service; this file only routes payloads between
// the API client, the selection algebra, and the renderers.

import { ApiClient, ApiError } from './api.js';
import { selectionColor } from './colors.js';
import { downloadPng, downloadSvg } from './export.js';
import { renderGraph } from './render/graph.js';
import { renderHeatmap } from './render/heatmap.js';
import { renderSurvival } from './render/km.js';
import { renderParallelSets } from './render/psets.js';
import { renderSilhouette } from './render/silhouette.js';
import { renderErrorPanel, renderInto } from './render/svg.js';
import { SelectionModel, toggleAtom } from './selection.js';
import { ViewState, debounce } from './state.js';
import type {
  GraphPayload,
  HeatmapPayload,
  Modality,
  ParallelSetsPayload,
  SelectionAtom,
  SilhouettePayload,
  ViewName,
} from './types.js';

const api = new ApiClient('');
const state = new ViewState(api);

let psetsModel: SelectionModel | null = null;
let draftAtoms: SelectionAtom[] = [];
const lastSvg = new Map<string, SVGSVGElement>();
// whether a feature list was posted for the modality this session; the
// service refuses to cluster a modality whose features were never set
const featuresApplied: Record<Modality, boolean> = { a: false, b: false };

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function setStatus(message: string, isError = false): void {
  const bar = el<HTMLDivElement>('status');
  bar.textContent = message;
  bar.classList.toggle('status-error', isError);
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  if (err instanceof DOMException && err.name === 'AbortError') return '';
  return err instanceof Error ? err.message : String(err);
}

async function guarded(label: string, action: () => Promise<void>): Promise<void> {
  try {
    await action();
  } catch (err) {
    const message = describe(err);
    if (message) setStatus(`${label} failed - ${message}`, true);
  }
}

// ---------------------------------------------------------------------------
// session + info line

function refreshInfo(): void {
  const info = el<HTMLDivElement>('session-info');
  if (!state.sessionId) {
    info.textContent = 'no session';
    return;
  }
  info.textContent =
    `session ${state.sessionId.slice(0, 8)} | phase ${state.phase} | revision ${state.revision}`;
}

async function createSession(): Promise<void> {
  const pick = (id: string): File => {
    const input = el<HTMLInputElement>(id);
    const file = input.files?.[0];
    if (!file) throw new Error(`choose a file for ${id.replace('file-', '')}`);
    return file;
  };
  const result = await api.createSession({
    matrixA: pick('file-matrix-a'),
    matrixB: pick('file-matrix-b'),
    clinical: pick('file-clinical'),
  });
  state.sessionId = result.session_id;
  state.revision = result.revision;
  state.phase = result.phase;
  psetsModel = null;
  draftAtoms = [];
  featuresApplied.a = false;
  featuresApplied.b = false;
  state.selections.clear();
  renderSelectionList();
  setStatus(`cohort loaded: ${result.summary.samples} samples`);
  refreshInfo();
  await Promise.all([loadFeaturePreview('a'), loadFeaturePreview('b')]);
}

async function loadFeaturePreview(modality: Modality): Promise<void> {
  if (!state.sessionId) return;
  const page = await api.listFeatures(state.sessionId, modality, 0, 12);
  el<HTMLDivElement>(`features-available-${modality}`).textContent =
    `${page.total} features (first ${page.feature_ids.length}: ` +
    `${page.feature_ids.join(', ')})`;
}

// ---------------------------------------------------------------------------
// features + clustering

async function allFeatureIds(modality: Modality): Promise<string[]> {
  const ids: string[] = [];
  for (;;) {
    const page = await api.listFeatures(state.sessionId!, modality,
                                        ids.length, 500);
    ids.push(...page.feature_ids);
    if (ids.length >= page.total || page.feature_ids.length === 0) break;
  }
  return ids;
}

async function postFeatures(modality: Modality) {
  const text = el<HTMLTextAreaElement>(`features-${modality}`).value.trim();
  // an empty entry means every feature; the service refuses an empty list,
  // so fetch the full id list and send it explicitly
  const features = text === '' ? await allFeatureIds(modality) : text;
  const result = await api.setFeatures(state.sessionId!, modality, features);
  state.noteRevision(result.revision, result.phase);
  featuresApplied[modality] = true;
  return result;
}

async function applyFeatures(modality: Modality): Promise<void> {
  if (!state.sessionId) throw new Error('create a session first');
  const result = await postFeatures(modality);
  const note = result.unmatched.length
    ? `${result.matched.length} matched, unmatched: ${result.unmatched.join(', ')}`
    : `${result.matched.length} features set`;
  setStatus(`modality ${modality}: ${note}`);
  refreshInfo();
  await refreshViews();
}

function readParams(modality: Modality): void {
  const params = state.params[modality];
  params.method = el<HTMLSelectElement>(`method-${modality}`).value as
    'kmeans' | 'spectral' | 'community';
  params.k = Number(el<HTMLInputElement>(`k-${modality}`).value) || null;
  params.seed = Number(el<HTMLInputElement>(`seed-${modality}`).value) || 0;
  params.metric = el<HTMLSelectElement>(`metric-${modality}`).value as
    'euclidean' | 'pearson';
  params.threshold = Number(el<HTMLInputElement>(`threshold-${modality}`).value) || 0;
}

async function runClustering(modality: Modality): Promise<void> {
  if (!state.sessionId) throw new Error('create a session first');
  if (!featuresApplied[modality]) await postFeatures(modality);
  readParams(modality);
  const params = state.params[modality];
  const result = await api.cluster(state.sessionId, modality, {
    method: params.method,
    k: params.method === 'community' ? undefined : params.k ?? undefined,
    seed: params.seed,
    metric: params.metric,
    threshold: params.threshold,
  });
  state.noteRevision(result.revision, result.phase);
  const sil = result.silhouette_mean === null
    ? '' : `, mean silhouette ${result.silhouette_mean.toFixed(3)}`;
  setStatus(`modality ${modality}: k=${result.k} ` +
            `(sizes ${result.cluster_sizes.join('/')})${sil}`);
  psetsModel = null;
  draftAtoms = [];
  state.selections.clear();
  renderSelectionList();
  refreshInfo();
  await refreshViews();
}

// ---------------------------------------------------------------------------
// views

async function refreshView(view: ViewName): Promise<void> {
  const panel = el<HTMLDivElement>(`panel-${view}`);
  try {
    if (view === 'parallel_sets') {
      const payload = await state.fetchView<ParallelSetsPayload>(view);
      psetsModel = new SelectionModel(payload);
      renderInto(panel, () => {
        const svg = renderParallelSets(payload, { onAtom: handleAtomClick });
        lastSvg.set(view, svg);
        return svg;
      });
    } else if (view.startsWith('heatmap')) {
      const payload = await state.fetchView<HeatmapPayload>(view);
      renderInto(panel, () => {
        const svg = renderHeatmap(payload);
        lastSvg.set(view, svg);
        return svg;
      });
    } else if (view.startsWith('silhouette')) {
      const payload = await state.fetchView<SilhouettePayload>(view);
      renderInto(panel, () => {
        const svg = renderSilhouette(payload);
        lastSvg.set(view, svg);
        return svg;
      });
    } else {
      const payload = await state.fetchView<GraphPayload>(view);
      renderInto(panel, () => {
        const svg = renderGraph(payload);
        lastSvg.set(view, svg);
        return svg;
      });
    }
  } catch (err) {
    const message = describe(err);
    if (message) renderErrorPanel(panel, message);
  }
}

const ALL_VIEWS: ViewName[] = [
  'heatmap_a', 'silhouette_a', 'graph_a',
  'heatmap_b', 'silhouette_b', 'graph_b',
  'parallel_sets',
];

async function refreshViews(): Promise<void> {
  // views only exist once both modalities are clustered
  if (!state.sessionId) return;
  if (state.phase !== 'clustered' && state.phase !== 'integrated') return;
  await Promise.all(ALL_VIEWS.map(view => refreshView(view)));
}

// threshold slider: debounced re-cluster + graph refetch, 250 ms
const thresholdRefetch: Record<Modality, (value: number) => void> = {
  a: debounce((value: number) => {
    el<HTMLInputElement>('threshold-a').value = String(value);
    void guarded('threshold update', () => runClustering('a'));
  }, 250),
  b: debounce((value: number) => {
    el<HTMLInputElement>('threshold-b').value = String(value);
    void guarded('threshold update', () => runClustering('b'));
  }, 250),
};

// ---------------------------------------------------------------------------
// selections

function handleAtomClick(atom: SelectionAtom): void {
  if (!psetsModel) return;
  const next = toggleAtom(draftAtoms, atom);
  // reject any draft that overlaps an existing selection before any
  // server call; the draft stays unchanged
  for (const existing of state.selections.values()) {
    if (next.length && psetsModel.overlaps(next, existing.atoms)) {
      setStatus(`overlaps selection "${existing.name}" - click rejected`, true);
      return;
    }
  }
  draftAtoms = next;
  renderDraft();
}

function renderDraft(): void {
  const readout = el<HTMLDivElement>('draft-readout');
  if (!psetsModel || draftAtoms.length === 0) {
    readout.textContent = 'draft: empty (click blocks or ribbons)';
    return;
  }
  const size = psetsModel.size(draftAtoms);
  const parts = draftAtoms.map(atom => atom.kind === 'block'
    ? `${atom.modality}:${atom.cluster}`
    : `r(${atom.a},${atom.b})`);
  readout.textContent = `draft: ${size} patients [${parts.join(' + ')}]`;
}

async function saveDraft(): Promise<void> {
  if (!state.sessionId) throw new Error('create a session first');
  if (!draftAtoms.length) throw new Error('draft selection is empty');
  const name = el<HTMLInputElement>('selection-name').value.trim()
    || `sel_${state.selections.size + 1}`;
  const result = await api.defineSelection(state.sessionId, name, draftAtoms);
  state.noteRevision(result.revision, result.phase);
  state.selections.set(name, {
    name,
    color: selectionColor(draftAtoms),
    atoms: draftAtoms,
    size: result.size ?? 0,
  });
  draftAtoms = [];
  renderDraft();
  renderSelectionList();
  refreshInfo();
  setStatus(`selection "${name}" saved (${result.size} patients)`);
}

async function removeSelection(name: string): Promise<void> {
  if (!state.sessionId) return;
  const result = await api.defineSelection(state.sessionId, name, []);
  state.noteRevision(result.revision, result.phase);
  state.selections.delete(name);
  renderSelectionList();
  refreshInfo();
}

function renderSelectionList(): void {
  const list = el<HTMLUListElement>('selection-list');
  list.replaceChildren();
  for (const selection of state.selections.values()) {
    const item = document.createElement('li');
    const chip = document.createElement('span');
    chip.className = 'chip';
    chip.style.background = selection.color;
    const label = document.createElement('span');
    label.textContent = ` ${selection.name} (${selection.size}) `;
    const remove = document.createElement('button');
    remove.textContent = 'x';
    remove.addEventListener('click', () =>
      void guarded('remove selection', () => removeSelection(selection.name)));
    item.append(chip, label, remove);
    list.appendChild(item);
  }
}

// ---------------------------------------------------------------------------
// survival

async function compareSurvival(): Promise<void> {
  if (!state.sessionId) throw new Error('create a session first');
  const names = [...state.selections.keys()];
  if (!names.length) throw new Error('save at least one selection');
  const { payload, pValueLiteral } = await api.runSurvival(state.sessionId, names);
  state.noteRevision(payload.revision, payload.phase);
  state.lastSurvival = payload;
  state.lastPValueLiteral = pValueLiteral;
  const colors: Record<string, string> = {};
  for (const selection of state.selections.values()) {
    colors[selection.name] = selection.color;
  }
  renderInto(el<HTMLDivElement>('panel-survival'), () => {
    const svg = renderSurvival(payload, { colors, pValueLiteral });
    lastSvg.set('survival', svg);
    return svg;
  });
  refreshInfo();
}

// ---------------------------------------------------------------------------
// exports

function wireExports(): void {
  for (const button of document.querySelectorAll<HTMLButtonElement>('button[data-export]')) {
    button.addEventListener('click', () => {
      const [view, format] = button.dataset.export!.split('|');
      const svg = lastSvg.get(view);
      if (!svg) {
        setStatus(`no rendered ${view} view to export`, true);
        return;
      }
      if (format === 'svg') downloadSvg(svg, `${view}.svg`);
      else void downloadPng(svg, `${view}.png`).catch(
        err => setStatus(describe(err), true));
    });
  }
}

// ---------------------------------------------------------------------------

export function wireApp(): void {
  el<HTMLButtonElement>('btn-create-session').addEventListener('click',
    () => void guarded('create session', createSession));
  for (const modality of ['a', 'b'] as Modality[]) {
    el<HTMLButtonElement>(`btn-features-${modality}`).addEventListener('click',
      () => void guarded('set features', () => applyFeatures(modality)));
    el<HTMLButtonElement>(`btn-cluster-${modality}`).addEventListener('click',
      () => void guarded('clustering', () => runClustering(modality)));
    el<HTMLInputElement>(`threshold-slider-${modality}`).addEventListener('input',
      event => thresholdRefetch[modality](
        Number((event.target as HTMLInputElement).value)));
  }
  el<HTMLButtonElement>('btn-save-selection').addEventListener('click',
    () => void guarded('save selection', saveDraft));
  el<HTMLButtonElement>('btn-survival').addEventListener('click',
    () => void guarded('survival comparison', compareSurvival));
  wireExports();
  renderDraft();
  refreshInfo();
}

function boot(): void {
  // only self-wire inside the real shell; tests import modules directly
  if (document.getElementById('btn-create-session')) wireApp();
}

if (typeof document !== 'undefined') {
  if (document.readyState !== 'loading') boot();
  else document.addEventListener('DOMContentLoaded', boot);
}
