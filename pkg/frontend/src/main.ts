// Hash-routed single-page client for the portal API.

import { ApiClient } from "./api.js";
import { parse, render } from "./markup.js";
import { DEFAULT_QUERY } from "./query.js";
import {
  DirtyGuard,
  FragmentGate,
  Route,
  SessionState,
  decodeRoute,
  encodeRoute,
} from "./state.js";
import {
  AppContext,
  browserView,
  editorView,
  glossaryView,
  labworkView,
  loginView,
} from "./views.js";

// tiny self-test with known-good pairs; the full corpus runs in vitest.
// only a renderer that reproduces the server bytes may serve previews.
const PARITY_PROBES: Array<[string, string]> = [
  ["plain text", "<p>plain text</p>"],
  [
    "$\\frac{\\lambda}{2}$",
    "<math><mfrac><mrow><mi>λ</mi></mrow><mrow><mn>2</mn></mrow></mfrac></math>",
  ],
  ["a<b", "<p>a&lt;b</p>"],
];

function clientRendererUsable(): boolean {
  try {
    return PARITY_PROBES.every(([source, html]) => render(parse(source), "html_mathml") === html);
  } catch {
    return false;
  }
}

function start(): void {
  const api = new ApiClient(
    (window as unknown as { BELNET_API_BASE?: string }).BELNET_API_BASE ?? "",
  );
  const ctx: AppContext = {
    api,
    session: new SessionState(),
    gate: new FragmentGate(),
    dirty: new DirtyGuard(),
    clientPreviewEnabled: clientRendererUsable(),
    navigate(route: Route) {
      if (!ctx.dirty.confirmLeave(() => window.confirm("discard unsaved changes?"))) {
        return;
      }
      window.location.hash = encodeRoute(route);
    },
  };

  const outlet = document.getElementById("app")!;
  const navState = () => {
    document.getElementById("nav-session")!.textContent = ctx.session.authenticated
      ? `tier ceiling: ${ctx.session.maxTier}`
      : "anonymous (open tier)";
    (document.getElementById("nav-logout") as HTMLButtonElement).hidden =
      !ctx.session.authenticated;
  };

  const show = () => {
    const route = decodeRoute(window.location.hash || "#/browser");
    switch (route.kind) {
      case "browser":
        browserView(outlet, ctx, route.query);
        break;
      case "editor":
        editorView(outlet, ctx, route.resourceId);
        break;
      case "glossary":
        glossaryView(outlet, ctx, route.prefix);
        break;
      case "labwork":
        labworkView(outlet, ctx, route.id);
        break;
      case "login":
        loginView(outlet, ctx);
        break;
    }
    navState();
  };

  window.addEventListener("hashchange", show);
  document.getElementById("nav-logout")!.addEventListener("click", async () => {
    try {
      await api.logout();
    } finally {
      ctx.session.logout();
      api.token = null;
      ctx.navigate({ kind: "browser", query: { ...DEFAULT_QUERY } });
      navState();
    }
  });

  show();
}

document.addEventListener("DOMContentLoaded", start);
