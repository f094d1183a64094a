// Browser-query state mirrors the server's resource query and round-trips
// losslessly through the URL, so every view is deep-linkable.

export interface BrowserQuery {
  tier: string | null;
  taxonomy: string | null;
  q: string | null;
  sort: string;
  dir: "asc" | "desc";
  offset: number;
  limit: number;
}

export const DEFAULT_QUERY: BrowserQuery = {
  tier: null,
  taxonomy: null,
  q: null,
  sort: "updated_at",
  dir: "desc",
  offset: 0,
  limit: 50,
};

export function encodeQuery(query: BrowserQuery): string {
  const params = new URLSearchParams();
  if (query.tier) params.set("tier", query.tier);
  if (query.taxonomy) params.set("taxonomy", query.taxonomy);
  if (query.q) params.set("q", query.q);
  if (query.sort !== DEFAULT_QUERY.sort) params.set("sort", query.sort);
  if (query.dir !== DEFAULT_QUERY.dir) params.set("dir", query.dir);
  if (query.offset !== DEFAULT_QUERY.offset) params.set("offset", String(query.offset));
  if (query.limit !== DEFAULT_QUERY.limit) params.set("limit", String(query.limit));
  return params.toString();
}

export function decodeQuery(search: string): BrowserQuery {
  const params = new URLSearchParams(search);
  const intOr = (name: string, fallback: number) => {
    const raw = params.get(name);
    if (raw === null) return fallback;
    const parsed = parseInt(raw, 10);
    return Number.isFinite(parsed) ? parsed : fallback;
  };
  return {
    tier: params.get("tier"),
    taxonomy: params.get("taxonomy"),
    q: params.get("q"),
    sort: params.get("sort") ?? DEFAULT_QUERY.sort,
    dir: params.get("dir") === "asc" ? "asc" : params.get("dir") === "desc" ? "desc" : DEFAULT_QUERY.dir,
    offset: intOr("offset", DEFAULT_QUERY.offset),
    limit: intOr("limit", DEFAULT_QUERY.limit),
  };
}

export function toApiParams(query: BrowserQuery): URLSearchParams {
  const params = new URLSearchParams();
  if (query.tier) params.set("tier", query.tier);
  if (query.taxonomy) params.set("taxonomy", query.taxonomy);
  if (query.q) params.set("q", query.q);
  params.set("sort", query.sort);
  params.set("dir", query.dir);
  params.set("offset", String(query.offset));
  params.set("limit", String(query.limit));
  return params;
}
