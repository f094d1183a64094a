// The five screens: browser, editor, glossary, labwork, login.
// Direct DOM construction; shared app context wires API, session, routing.

import { ApiClient, ApiError, Resource, ResourcePage, SpectrumSummary } from "./api.js";
import { spectrumChart } from "./chart.js";
import * as clientMarkup from "./markup.js";
import { BrowserQuery, DEFAULT_QUERY, toApiParams } from "./query.js";
import {
  DirtyGuard,
  FragmentGate,
  Route,
  SessionState,
  filterVisibleRows,
} from "./state.js";

export interface AppContext {
  api: ApiClient;
  session: SessionState;
  gate: FragmentGate;
  dirty: DirtyGuard;
  navigate(route: Route): void;
  /** set by main.ts when the client renderer has passed the parity corpus */
  clientPreviewEnabled: boolean;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  html = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (html) node.innerHTML = html;
  return node;
}

function banner(root: HTMLElement, kind: "error" | "info" | "stale", text: string): void {
  const note = el("div", { class: `banner ${kind}` });
  note.textContent = text;
  root.prepend(note);
  if (kind !== "stale") setTimeout(() => note.remove(), 6000);
}

function errorText(err: unknown): string {
  if (err instanceof ApiError) return err.body.message ?? err.body.error;
  return String(err);
}

// -- browser -------------------------------------------------------------

export function browserView(root: HTMLElement, ctx: AppContext, query: BrowserQuery): void {
  root.innerHTML = `
    <section class="toolbar">
      <input id="filter-text" placeholder="filter title/body" value="${
        query.q ? clientMarkup.escapeHtml(query.q) : ""
      }">
      <select id="sort-field">
        ${["updated_at", "created_at", "title"]
          .map((f) => `<option value="${f}"${f === query.sort ? " selected" : ""}>${f}</option>`)
          .join("")}
      </select>
      <button id="sort-dir">${query.dir === "asc" ? "ascending" : "descending"}</button>
      <button id="new-resource">new resource</button>
    </section>
    <section id="resource-list" class="region"><p>loading…</p></section>
  `;

  const listRegion = root.querySelector<HTMLElement>("#resource-list")!;
  const requery = (next: Partial<BrowserQuery>) => {
    ctx.navigate({ kind: "browser", query: { ...query, ...next, offset: 0 } });
  };

  root.querySelector<HTMLInputElement>("#filter-text")!.addEventListener("change", (e) => {
    requery({ q: (e.target as HTMLInputElement).value || null });
  });
  root.querySelector<HTMLSelectElement>("#sort-field")!.addEventListener("change", (e) => {
    requery({ sort: (e.target as HTMLSelectElement).value });
  });
  root.querySelector<HTMLButtonElement>("#sort-dir")!.addEventListener("click", () => {
    requery({ dir: query.dir === "asc" ? "desc" : "asc" });
  });
  root.querySelector<HTMLButtonElement>("#new-resource")!.addEventListener("click", () => {
    ctx.navigate({ kind: "editor", resourceId: "new" });
  });

  void refreshList(listRegion, ctx, query);
}

async function refreshList(
  region: HTMLElement,
  ctx: AppContext,
  query: BrowserQuery,
): Promise<void> {
  const params = toApiParams(query);
  const cacheKey = params.toString();
  const generation = ctx.gate.issue("resource-list");
  const cached = ctx.session.cachedFragment("resource-list", cacheKey);
  try {
    const fragment = await ctx.api.fragment("resource-list", params, cached?.etag ?? null);
    if (!ctx.gate.accept("resource-list", generation)) return; // stale response
    const payload = (fragment?.payload ?? cached?.payload) as ResourcePage;
    if (fragment) {
      ctx.session.storeFragment("resource-list", cacheKey, fragment.etag, fragment.payload);
    }
    renderList(region, ctx, query, payload);
  } catch (err) {
    if (!ctx.gate.accept("resource-list", generation)) return;
    if (cached) {
      renderList(region, ctx, query, cached.payload as ResourcePage);
      banner(region, "stale", `showing cached list: ${errorText(err)}`);
    } else {
      region.innerHTML = "";
      banner(region, "error", errorText(err));
    }
  }
}

function renderList(
  region: HTMLElement,
  ctx: AppContext,
  query: BrowserQuery,
  page: ResourcePage,
): void {
  // defense in depth: the ceiling applies even to cached payloads
  const rows = filterVisibleRows(page.items, ctx.session.maxTier);
  if (!rows.length) {
    region.innerHTML = `<p class="empty">no matching resources (total 0)</p>`;
    return;
  }
  const body = rows
    .map(
      (r) => `
      <tr data-id="${r.id}">
        <td><a href="#/editor/${encodeURIComponent(r.id)}">${clientMarkup.escapeHtml(
          r.title,
        )}</a></td>
        <td>${r.tier}</td>
        <td>r${r.current_revision}</td>
        <td>${r.updated_at.slice(0, 19)}</td>
      </tr>`,
    )
    .join("");
  region.innerHTML = `
    <table class="resources">
      <thead><tr><th>title</th><th>tier</th><th>rev</th><th>updated</th></tr></thead>
      <tbody>${body}</tbody>
    </table>
    <p class="count">total ${page.total_count}, showing ${rows.length} from offset ${
      query.offset
    }</p>
  `;
}

// -- editor ----------------------------------------------------------------

export function editorView(root: HTMLElement, ctx: AppContext, resourceId: string): void {
  root.innerHTML = `
    <section class="editor">
      <div class="fields">
        <input id="ed-title" placeholder="title">
        <select id="ed-tier">
          <option value="open">open</option>
          <option value="limited">limited</option>
          <option value="restricted">restricted</option>
        </select>
        <button id="ed-save" disabled>save</button>
        <button id="ed-archive" hidden>archive</button>
        <span id="ed-status"></span>
      </div>
      <div class="panes">
        <textarea id="ed-body" rows="14" spellcheck="false"></textarea>
        <div id="ed-preview" class="preview region"></div>
      </div>
      <div id="ed-history" class="region"></div>
    </section>
  `;

  const title = root.querySelector<HTMLInputElement>("#ed-title")!;
  const tier = root.querySelector<HTMLSelectElement>("#ed-tier")!;
  const body = root.querySelector<HTMLTextAreaElement>("#ed-body")!;
  const preview = root.querySelector<HTMLElement>("#ed-preview")!;
  const save = root.querySelector<HTMLButtonElement>("#ed-save")!;
  const archiveBtn = root.querySelector<HTMLButtonElement>("#ed-archive")!;
  const status = root.querySelector<HTMLElement>("#ed-status")!;

  let expectedRevision = 0;
  let parseOk = true;
  const isNew = resourceId === "new";

  const setStatus = (text: string, isError = false) => {
    status.textContent = text;
    status.className = isError ? "error" : "";
  };

  const refreshPreview = async () => {
    const source = body.value;
    if (ctx.clientPreviewEnabled) {
      try {
        preview.innerHTML = clientMarkup.render(clientMarkup.parse(source), "html_mathml");
        parseOk = true;
        setStatus("parsed (client preview)");
      } catch (err) {
        parseOk = false;
        if (err instanceof clientMarkup.ParseError) {
          setStatus(`markup error at ${err.line}:${err.column}: expected ${err.expected}`, true);
        } else {
          setStatus(String(err), true);
        }
      }
    } else {
      try {
        const rendered = await ctx.api.renderMarkup(source);
        preview.innerHTML = rendered.html_mathml;
        parseOk = true;
        setStatus("parsed (server preview)");
      } catch (err) {
        parseOk = false;
        if (err instanceof ApiError && err.body.position) {
          const pos = err.body.position;
          setStatus(`markup error at ${pos.line}:${pos.column}`, true);
          jumpToPosition(body, pos.line, pos.column);
        } else {
          setStatus(errorText(err), true);
        }
      }
    }
    save.disabled = !parseOk;
  };

  let debounce: ReturnType<typeof setTimeout> | null = null;
  const markDirty = () => {
    ctx.dirty.markDirty();
    if (debounce) clearTimeout(debounce);
    debounce = setTimeout(refreshPreview, 350);
  };
  body.addEventListener("input", markDirty);
  title.addEventListener("input", () => ctx.dirty.markDirty());

  save.addEventListener("click", async () => {
    try {
      let saved: Resource;
      if (isNew) {
        saved = await ctx.api.createResource({
          title: title.value,
          body: body.value,
          tier: tier.value,
          taxonomy_ids: [],
        });
      } else {
        saved = await ctx.api.updateResource(resourceId, {
          expected_revision: expectedRevision,
          title: title.value,
          body: body.value,
          tier: tier.value,
        });
      }
      ctx.dirty.markClean();
      setStatus(`saved revision ${saved.current_revision}`);
      if (isNew) {
        ctx.navigate({ kind: "editor", resourceId: saved.id });
      } else {
        expectedRevision = saved.current_revision;
        void loadHistory();
      }
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        const reload = window.confirm(
          "someone else saved a newer revision; reload their version? " +
            "(your text stays in the editor if you cancel)",
        );
        if (reload) {
          ctx.dirty.markClean();
          void loadResource();
        }
      } else if (err instanceof ApiError && err.status === 422 && err.body.position) {
        const pos = err.body.position;
        setStatus(`markup error at ${pos.line}:${pos.column}`, true);
        jumpToPosition(body, pos.line, pos.column);
      } else {
        setStatus(errorText(err), true);
      }
    }
  });

  archiveBtn.addEventListener("click", async () => {
    if (!window.confirm("archive this resource? it disappears from listings")) return;
    try {
      await ctx.api.archiveResource(resourceId);
      ctx.dirty.markClean();
      ctx.navigate({ kind: "browser", query: { ...DEFAULT_QUERY } });
    } catch (err) {
      setStatus(errorText(err), true);
    }
  });

  const loadHistory = async () => {
    const history = root.querySelector<HTMLElement>("#ed-history")!;
    try {
      const revisions = await ctx.api.history(resourceId);
      history.innerHTML =
        "<h3>history</h3>" +
        revisions
          .map(
            (r) =>
              `<div class="rev">r${r.index} · ${clientMarkup.escapeHtml(r.title)} · ${
                r.timestamp.slice(0, 19)
              }</div>`,
          )
          .join("");
    } catch {
      history.innerHTML = "";
    }
  };

  const loadResource = async () => {
    try {
      const resource = await ctx.api.getResource(resourceId);
      title.value = resource.title;
      tier.value = resource.tier;
      body.value = resource.body;
      expectedRevision = resource.current_revision;
      archiveBtn.hidden = resource.archived;
      await refreshPreview();
      await loadHistory();
    } catch (err) {
      setStatus(errorText(err), true);
    }
  };

  if (isNew) {
    void refreshPreview();
  } else {
    archiveBtn.hidden = false;
    void loadResource();
  }
}

function jumpToPosition(area: HTMLTextAreaElement, line: number, column: number): void {
  const lines = area.value.split("\n");
  let offset = 0;
  for (let i = 0; i < Math.min(line - 1, lines.length); i++) offset += lines[i].length + 1;
  offset += column - 1;
  area.focus();
  area.setSelectionRange(offset, offset + 1);
}

// -- glossary -----------------------------------------------------------------

export function glossaryView(root: HTMLElement, ctx: AppContext, prefix: string): void {
  root.innerHTML = `
    <section class="toolbar">
      <input id="gl-prefix" placeholder="term prefix" value="${clientMarkup.escapeHtml(prefix)}">
    </section>
    <section id="glossary-panel" class="region"><p>loading…</p></section>
  `;
  root.querySelector<HTMLInputElement>("#gl-prefix")!.addEventListener("change", (e) => {
    ctx.navigate({ kind: "glossary", prefix: (e.target as HTMLInputElement).value });
  });

  const region = root.querySelector<HTMLElement>("#glossary-panel")!;
  const params = new URLSearchParams({ prefix });
  const generation = ctx.gate.issue("glossary-panel");
  ctx.api
    .fragment("glossary-panel", params, null)
    .then((fragment) => {
      if (!ctx.gate.accept("glossary-panel", generation) || !fragment) return;
      const entries = (fragment.payload as { entries: Array<Record<string, string>> }).entries;
      if (!entries.length) {
        region.innerHTML = `<p class="empty">no terms</p>`;
        return;
      }
      region.innerHTML = entries
        .map(
          (entry) => `
          <div class="term">
            <h3>${clientMarkup.escapeHtml(entry.term)}</h3>
            <div class="definition">${renderDefinition(entry.definition)}</div>
            ${entry.application_area
              ? `<p class="area">applies to: ${clientMarkup.escapeHtml(entry.application_area)}</p>`
              : ""}
            ${entry.deviation_notes
              ? `<p class="notes">${clientMarkup.escapeHtml(entry.deviation_notes)}</p>`
              : ""}
          </div>`,
        )
        .join("");
    })
    .catch((err) => banner(region, "error", errorText(err)));
}

function renderDefinition(source: string): string {
  try {
    return clientMarkup.render(clientMarkup.parse(source), "html_mathml");
  } catch {
    return clientMarkup.escapeHtml(source);
  }
}

// -- lab work --------------------------------------------------------------------

export function labworkView(root: HTMLElement, ctx: AppContext, id: string): void {
  root.innerHTML = `<section id="labwork" class="region"><p>loading…</p></section>`;
  const region = root.querySelector<HTMLElement>("#labwork")!;
  ctx.api
    .labwork(id)
    .then((work) => {
      region.innerHTML = `
        <h2>${clientMarkup.escapeHtml(work.title)}</h2>
        <p>${clientMarkup.escapeHtml(work.summary)}</p>
        <div class="tool spectrum-tool">
          <h3>spectrum</h3>
          <input type="file" id="lw-file">
          <label>live time, s <input id="lw-live" type="number" value="60" min="0.001"></label>
          <label><input type="checkbox" id="lw-log"> log scale</label>
          <div id="lw-chart"></div>
          <p id="lw-summary"></p>
        </div>
        ${work.tools.includes("attenuation-fit") ? attenuationFormHtml() : ""}
        ${work.tools.includes("relative-activity") ? activityFormHtml() : ""}
        ${work.tools.includes("check") ? checkFormHtml() : ""}
      `;
      wireSpectrumTool(region, ctx);
      if (work.tools.includes("attenuation-fit")) wireAttenuationForm(region, ctx);
      if (work.tools.includes("relative-activity")) wireActivityForm(region, ctx);
      if (work.tools.includes("check")) wireCheckForm(region, ctx);
    })
    .catch((err) => banner(region, "error", errorText(err)));
}

function wireSpectrumTool(region: HTMLElement, ctx: AppContext): void {
  const file = region.querySelector<HTMLInputElement>("#lw-file")!;
  const live = region.querySelector<HTMLInputElement>("#lw-live")!;
  const log = region.querySelector<HTMLInputElement>("#lw-log")!;
  const chart = region.querySelector<HTMLElement>("#lw-chart")!;
  const summary = region.querySelector<HTMLElement>("#lw-summary")!;
  let lastSpectrum: SpectrumSummary | null = null;

  const draw = () => {
    if (!lastSpectrum) return;
    chart.innerHTML = spectrumChart(lastSpectrum.channels, {
      logScale: log.checked,
      useEnergy: lastSpectrum.has_energies,
    });
  };

  const upload = async () => {
    if (!file.files?.length) return;
    try {
      lastSpectrum = await ctx.api.uploadSpectrum(file.files[0], Number(live.value));
      summary.textContent =
        `${lastSpectrum.channel_count} channels, total ${lastSpectrum.total_counts} counts` +
        (lastSpectrum.window
          ? `, window ${lastSpectrum.window.value} ± ${lastSpectrum.window.sigma.toFixed(2)}`
          : "");
      draw();
    } catch (err) {
      summary.textContent = errorText(err);
    }
  };

  file.addEventListener("change", () => void upload());
  live.addEventListener("change", () => void upload());
  log.addEventListener("change", draw);
}

function attenuationFormHtml(): string {
  return `
    <div class="tool">
      <h3>attenuation fit</h3>
      <p>one <code>thickness counts [sigma]</code> row per line</p>
      <textarea id="att-points" rows="6">0 1000\n1 607\n2 368\n3 223\n4 135</textarea>
      <button id="att-run">fit</button>
      <p id="att-result"></p>
    </div>`;
}

function wireAttenuationForm(region: HTMLElement, ctx: AppContext): void {
  const points = region.querySelector<HTMLTextAreaElement>("#att-points")!;
  const result = region.querySelector<HTMLElement>("#att-result")!;
  region.querySelector<HTMLButtonElement>("#att-run")!.addEventListener("click", async () => {
    const rows = points.value
      .split("\n")
      .map((line) => line.trim())
      .filter((line) => line && !line.startsWith("#"))
      .map((line) => line.split(/\s+/).map(Number));
    try {
      const fit = await ctx.api.fitAttenuation(
        rows.map(([thickness, counts, sigma]) => ({ thickness, counts, sigma })),
      );
      result.innerHTML =
        `μ = ${fit.mu.value.toPrecision(6)} ± ${fit.mu.sigma.toPrecision(3)} / ${
          fit.thickness_unit
        }, ` +
        `N₀ = ${fit.n0.value.toPrecision(6)} ± ${fit.n0.sigma.toPrecision(3)}, ` +
        `d½ = ${fit.half_value_layer.value.toPrecision(6)} ± ${
          fit.half_value_layer.sigma.toPrecision(3)
        } ${fit.thickness_unit}` +
        (fit.warnings.length
          ? `<br><span class="error">${clientMarkup.escapeHtml(fit.warnings.join("; "))}</span>`
          : "");
    } catch (err) {
      result.textContent = errorText(err);
    }
  });
}

function activityFormHtml(): string {
  return `
    <div class="tool">
      <h3>relative activity</h3>
      <label>A ref, Bq <input id="act-aref" type="number" value="100"></label>
      <label>σ A ref <input id="act-sref" type="number" value="0"></label>
      <label>N x <input id="act-nx" type="number" value="10000"></label>
      <label>t x, s <input id="act-tx" type="number" value="60"></label>
      <label>N ref <input id="act-nref" type="number" value="10000"></label>
      <label>t ref, s <input id="act-tref" type="number" value="60"></label>
      <button id="act-run">compute</button>
      <p id="act-result"></p>
    </div>`;
}

function wireActivityForm(region: HTMLElement, ctx: AppContext): void {
  const value = (id: string) =>
    Number(region.querySelector<HTMLInputElement>(`#${id}`)!.value);
  const result = region.querySelector<HTMLElement>("#act-result")!;
  region.querySelector<HTMLButtonElement>("#act-run")!.addEventListener("click", async () => {
    try {
      const activity = await ctx.api.relativeActivity({
        ref_activity: { value: value("act-aref"), sigma: value("act-sref") },
        n_x: value("act-nx"),
        t_x: value("act-tx"),
        n_ref: value("act-nref"),
        t_ref: value("act-tref"),
      });
      result.textContent =
        `A = ${activity.value.toPrecision(6)} ± ${activity.sigma.toPrecision(3)} Bq`;
    } catch (err) {
      result.textContent = errorText(err);
    }
  });
}

function checkFormHtml(): string {
  return `
    <div class="tool">
      <h3>check a result</h3>
      <label>your value <input id="chk-given" type="number" value="0"></label>
      <label>reference <input id="chk-value" type="number" value="0"></label>
      <label>σ <input id="chk-sigma" type="number" value="0"></label>
      <button id="chk-run">check</button>
      <p id="chk-result"></p>
    </div>`;
}

function wireCheckForm(region: HTMLElement, ctx: AppContext): void {
  const value = (id: string) =>
    Number(region.querySelector<HTMLInputElement>(`#${id}`)!.value);
  const result = region.querySelector<HTMLElement>("#chk-result")!;
  region.querySelector<HTMLButtonElement>("#chk-run")!.addEventListener("click", async () => {
    try {
      const verdict = await ctx.api.check(value("chk-given"), {
        value: value("chk-value"),
        sigma: value("chk-sigma"),
      });
      result.className = verdict.passed ? "pass" : "fail";
      result.textContent = `${verdict.passed ? "PASS" : "FAIL"} — ${verdict.explanation}`;
    } catch (err) {
      result.textContent = errorText(err);
    }
  });
}

// -- login ------------------------------------------------------------------------

export function loginView(root: HTMLElement, ctx: AppContext): void {
  root.innerHTML = `
    <section class="login region">
      <h2>sign in</h2>
      <label>username <input id="login-user"></label>
      <label>password <input id="login-pass" type="password"></label>
      <button id="login-go">sign in</button>
      <p id="login-status"></p>
    </section>
  `;
  const status = root.querySelector<HTMLElement>("#login-status")!;
  root.querySelector<HTMLButtonElement>("#login-go")!.addEventListener("click", async () => {
    const username = root.querySelector<HTMLInputElement>("#login-user")!.value;
    const password = root.querySelector<HTMLInputElement>("#login-pass")!.value;
    try {
      const session = await ctx.api.login(username, password);
      ctx.api.token = session.token;
      ctx.session.login({
        token: session.token,
        maxTier: session.max_tier,
        expiresAt: session.expires_at,
      });
      ctx.navigate({ kind: "browser", query: { ...DEFAULT_QUERY } });
    } catch (err) {
      status.textContent = errorText(err);
    }
  });
}
