// Thin typed client for the portal's /api surface.

export interface ResourceSummary {
  id: string;
  tier: string;
  title: string;
  current_revision: number;
  created_at: string;
  updated_at: string;
}

export interface ResourcePage {
  items: ResourceSummary[];
  total_count: number;
  offset: number;
  limit: number;
}

export interface Resource extends ResourceSummary {
  body: string;
  body_html: string;
  taxonomy_ids: string[];
  attachment_ids: string[];
  archived: boolean;
}

export interface Revision {
  resource_id: string;
  index: number;
  title: string;
  body: string;
  author: string;
  timestamp: string;
}

export interface GlossaryEntry {
  term: string;
  definition: string;
  application_area: string;
  deviation_notes: string;
  source_refs: string[];
}

export interface TaxonomyNode {
  id: string;
  parent_id: string | null;
  label: string;
  sort_key: string;
}

export interface SessionResponse {
  token: string;
  expires_at: string;
  max_tier: string;
}

export interface Fragment {
  fragment_id: string;
  payload: unknown;
  etag: string;
}

export interface MeasuredValue {
  value: number;
  sigma: number;
}

export interface SpectrumSummary {
  label: string;
  live_time_s: number;
  channel_count: number;
  total_counts: number;
  has_energies: boolean;
  channels: Array<{ index: number; energy_keV: number | null; counts: number }>;
  window: MeasuredValue | null;
}

export interface AttenuationFit {
  mu: MeasuredValue;
  n0: MeasuredValue;
  half_value_layer: MeasuredValue;
  residual_rms: number;
  n_points: number;
  thickness_unit: string;
  warnings: string[];
}

export interface CheckVerdict {
  passed: boolean;
  deviation: number;
  sigma_bound: number;
  relative_bound: number;
  applied: string;
  explanation: string;
}

export interface LabWork {
  id: string;
  title: string;
  summary: string;
  tools: string[];
}

export interface ApiErrorBody {
  error: string;
  message: string;
  position?: { line: number; column: number };
  reason?: string;
  [key: string]: unknown;
}

export class ApiError extends Error {
  status: number;
  body: ApiErrorBody;

  constructor(status: number, body: ApiErrorBody) {
    super(`${status}: ${body.message ?? body.error}`);
    this.status = status;
    this.body = body;
  }
}

export class ApiClient {
  baseUrl: string;
  token: string | null = null;

  constructor(baseUrl = "") {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  private headers(extra: Record<string, string> = {}): Record<string, string> {
    const headers: Record<string, string> = { ...extra };
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    return headers;
  }

  private async request<T>(method: string, path: string, init: RequestInit = {}): Promise<T> {
    const response = await fetch(this.baseUrl + path, { method, ...init });
    if (response.status === 304) {
      throw new ApiError(304, { error: "not_modified", message: "not modified" });
    }
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(response.status, body as ApiErrorBody);
    }
    return body as T;
  }

  private json<T>(method: string, path: string, payload: unknown): Promise<T> {
    return this.request<T>(method, path, {
      headers: this.headers({ "Content-Type": "application/json" }),
      body: JSON.stringify(payload),
    });
  }

  login(username: string, password: string): Promise<SessionResponse> {
    return this.json<SessionResponse>("POST", "/api/session", { username, password });
  }

  async logout(): Promise<void> {
    await this.request("DELETE", "/api/session", { headers: this.headers() });
    this.token = null;
  }

  listResources(params: URLSearchParams): Promise<ResourcePage> {
    return this.request<ResourcePage>("GET", `/api/resources?${params}`, {
      headers: this.headers(),
    });
  }

  getResource(id: string): Promise<Resource> {
    return this.request<Resource>("GET", `/api/resources/${encodeURIComponent(id)}`, {
      headers: this.headers(),
    });
  }

  createResource(draft: {
    title: string;
    body: string;
    tier: string;
    taxonomy_ids: string[];
  }): Promise<Resource> {
    return this.json<Resource>("POST", "/api/resources", draft);
  }

  updateResource(
    id: string,
    patch: {
      expected_revision: number;
      title?: string;
      body?: string;
      tier?: string;
      taxonomy_ids?: string[];
    },
  ): Promise<Resource> {
    return this.json<Resource>("PUT", `/api/resources/${encodeURIComponent(id)}`, patch);
  }

  archiveResource(id: string): Promise<Resource> {
    return this.request<Resource>(
      "POST",
      `/api/resources/${encodeURIComponent(id)}/archive`,
      { headers: this.headers() },
    );
  }

  history(id: string): Promise<Revision[]> {
    return this.request<Revision[]>(
      "GET",
      `/api/resources/${encodeURIComponent(id)}/history`,
      { headers: this.headers() },
    );
  }

  searchGlossary(prefix: string): Promise<GlossaryEntry[]> {
    return this.request<GlossaryEntry[]>(
      "GET",
      `/api/glossary?prefix=${encodeURIComponent(prefix)}`,
      { headers: this.headers() },
    );
  }

  putGlossary(term: string, entry: Omit<GlossaryEntry, "term">): Promise<GlossaryEntry> {
    return this.json<GlossaryEntry>(
      "PUT",
      `/api/glossary/${encodeURIComponent(term)}`,
      entry,
    );
  }

  listTaxonomy(): Promise<TaxonomyNode[]> {
    return this.request<TaxonomyNode[]>("GET", "/api/taxonomy", {
      headers: this.headers(),
    });
  }

  renderMarkup(source: string): Promise<{ html_mathml: string; plain_text: string }> {
    return this.json("POST", "/api/markup/render", { source });
  }

  /** Conditional fragment fetch; returns null on a 304. */
  async fragment(
    fragmentId: string,
    params: URLSearchParams,
    etag: string | null,
  ): Promise<Fragment | null> {
    const headers = this.headers();
    if (etag) headers["If-None-Match"] = etag;
    const response = await fetch(
      `${this.baseUrl}/api/fragments/${encodeURIComponent(fragmentId)}?${params}`,
      { headers },
    );
    if (response.status === 304) return null;
    const body = await response.json();
    if (!response.ok) throw new ApiError(response.status, body);
    return body as Fragment;
  }

  labwork(id: string): Promise<LabWork> {
    return this.request<LabWork>("GET", `/api/labworks/${encodeURIComponent(id)}`, {
      headers: this.headers(),
    });
  }

  async uploadSpectrum(
    file: File,
    liveTimeS: number,
    window?: { lo: number; hi: number; basis: string },
  ): Promise<SpectrumSummary> {
    const form = new FormData();
    form.append("file", file);
    form.append("live_time_s", String(liveTimeS));
    if (window) {
      form.append("window_lo", String(window.lo));
      form.append("window_hi", String(window.hi));
      form.append("basis", window.basis);
    }
    return this.request<SpectrumSummary>("POST", "/api/labkit/spectrum", {
      headers: this.headers(),
      body: form,
    });
  }

  fitAttenuation(points: Array<{ thickness: number; counts: number; sigma?: number }>,
                 thicknessUnit = "cm"): Promise<AttenuationFit> {
    return this.json("POST", "/api/labkit/attenuation-fit", {
      points,
      thickness_unit: thicknessUnit,
    });
  }

  relativeActivity(input: {
    ref_activity: MeasuredValue;
    n_x: number;
    t_x: number;
    n_ref: number;
    t_ref: number;
  }): Promise<MeasuredValue> {
    return this.json("POST", "/api/labkit/relative-activity", input);
  }

  check(given: number, reference: MeasuredValue, kSigma = 3, relTol = 0.05):
      Promise<CheckVerdict> {
    return this.json("POST", "/api/labkit/check", {
      given,
      reference,
      k_sigma: kSigma,
      rel_tol: relTol,
    });
  }
}
