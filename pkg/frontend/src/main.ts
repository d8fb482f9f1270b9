/** Browser entry point: mount the app on #app (or the body). */

import { App } from "./app.js";
import { resolveConfig } from "./config.js";

function boot(): void {
  const mount = document.getElementById("app") ?? document.body;
  void App.boot(mount as HTMLElement, resolveConfig(mount)).catch((failure) => {
    const banner = document.createElement("div");
    banner.className = "error-banner";
    banner.setAttribute("role", "alert");
    banner.textContent = `failed to start: ${String(failure)}`;
    mount.appendChild(banner);
  });
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", boot);
} else {
  boot();
}
