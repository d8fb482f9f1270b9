/** The client's only configuration is the service base URL. */

export interface Config {
  baseUrl: string;
}

declare global {
  interface Window {
    GNNSCOPE_BASE_URL?: string;
  }
}

/** Resolve the base URL: explicit argument, then a global set by the host
 * page, then the data attribute on the mount element, then same-origin. */
export function resolveConfig(mount?: Element | null, explicit?: string): Config {
  if (explicit !== undefined) return { baseUrl: stripSlash(explicit) };
  if (typeof window !== "undefined" && window.GNNSCOPE_BASE_URL !== undefined) {
    return { baseUrl: stripSlash(window.GNNSCOPE_BASE_URL) };
  }
  const attr = mount?.getAttribute("data-base-url");
  if (attr) return { baseUrl: stripSlash(attr) };
  return { baseUrl: "" };
}

function stripSlash(url: string): string {
  return url.endsWith("/") ? url.slice(0, -1) : url;
}
