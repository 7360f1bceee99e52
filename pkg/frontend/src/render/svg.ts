// Small SVG DOM helpers shared by the view renderers.

export const SVG_NS = 'http://www.w3.org/2000/svg';

export type Attrs = Record<string, string | number>;

export function svgEl<K extends keyof SVGElementTagNameMap>(
    tag: K, attrs: Attrs = {}): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

export function svgRoot(width: number, height: number): SVGSVGElement {
  const svg = svgEl('svg', {
    width, height, viewBox: `0 0 ${width} ${height}`,
    xmlns: SVG_NS,
  });
  return svg;
}

export function svgText(content: string, attrs: Attrs = {}): SVGTextElement {
  const el = svgEl('text', { 'font-size': 11, 'font-family': 'sans-serif', ...attrs });
  el.textContent = content;
  return el;
}

/** Replace a panel's contents with an error card; views never go blank. */
export function renderErrorPanel(container: HTMLElement, message: string): void {
  container.replaceChildren();
  const card = document.createElement('div');
  card.className = 'error-panel';
  card.setAttribute('role', 'alert');
  const title = document.createElement('strong');
  title.textContent = 'view failed';
  const body = document.createElement('div');
  body.textContent = message;
  card.append(title, body);
  container.appendChild(card);
}

/** Guard a renderer: any thrown payload/shape problem becomes the panel. */
export function renderInto(container: HTMLElement,
                           build: () => SVGSVGElement): void {
  try {
    const svg = build();
    container.replaceChildren(svg);
  } catch (err) {
    renderErrorPanel(container, err instanceof Error ? err.message : String(err));
  }
}
