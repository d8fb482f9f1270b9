/** Small DOM construction helpers shared by the views. */

export const SVG_NS = "http://www.w3.org/2000/svg";

type AttrValue = string | number;

export function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, AttrValue> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [name, value] of Object.entries(attrs)) {
    node.setAttribute(name, String(value));
  }
  return node;
}

export function htmlEl<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

export function clearChildren(node: Element): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

/** Inline error banner every view uses to surface API failures. */
export function errorBanner(message: string): HTMLElement {
  const banner = htmlEl("div", "error-banner");
  banner.setAttribute("role", "alert");
  banner.textContent = message;
  return banner;
}
