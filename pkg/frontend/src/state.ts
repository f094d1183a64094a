// View state: session, route, fragment caching, and the safety rails the
// UI guarantees regardless of what a cached payload claims.

import { BrowserQuery, DEFAULT_QUERY, decodeQuery, encodeQuery } from "./query.js";

export const TIER_ORDER = ["open", "limited", "restricted"] as const;
export type Tier = (typeof TIER_ORDER)[number];

export function tierRank(tier: string): number {
  const rank = TIER_ORDER.indexOf(tier as Tier);
  return rank === -1 ? Number.POSITIVE_INFINITY : rank;
}

/** Drop rows above the session's ceiling, whatever the payload says. */
export function filterVisibleRows<T extends { tier: string }>(
  rows: T[],
  ceiling: string,
): T[] {
  const max = tierRank(ceiling);
  return rows.filter((row) => tierRank(row.tier) <= max);
}

export type Route =
  | { kind: "browser"; query: BrowserQuery }
  | { kind: "editor"; resourceId: string } // "new" for a fresh draft
  | { kind: "glossary"; prefix: string }
  | { kind: "labwork"; id: string }
  | { kind: "login" };

export function encodeRoute(route: Route): string {
  switch (route.kind) {
    case "browser": {
      const qs = encodeQuery(route.query);
      return qs ? `#/browser?${qs}` : "#/browser";
    }
    case "editor":
      return `#/editor/${encodeURIComponent(route.resourceId)}`;
    case "glossary":
      return route.prefix
        ? `#/glossary?prefix=${encodeURIComponent(route.prefix)}`
        : "#/glossary";
    case "labwork":
      return `#/labwork/${encodeURIComponent(route.id)}`;
    case "login":
      return "#/login";
  }
}

export function decodeRoute(hash: string): Route {
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  const [path, search = ""] = raw.split("?", 2);
  const parts = path.split("/").filter((p) => p.length > 0);
  switch (parts[0]) {
    case "editor":
      return { kind: "editor", resourceId: decodeURIComponent(parts[1] ?? "new") };
    case "glossary":
      return {
        kind: "glossary",
        prefix: new URLSearchParams(search).get("prefix") ?? "",
      };
    case "labwork":
      return { kind: "labwork", id: decodeURIComponent(parts[1] ?? "") };
    case "login":
      return { kind: "login" };
    default:
      return { kind: "browser", query: search ? decodeQuery(search) : { ...DEFAULT_QUERY } };
  }
}

export interface SessionInfo {
  token: string;
  maxTier: string;
  expiresAt: string;
}

/** Session token plus the fragment cache that must die with it. */
export class SessionState {
  private session: SessionInfo | null = null;
  private cache = new Map<string, { etag: string; payload: unknown }>();

  get token(): string | null {
    return this.session?.token ?? null;
  }

  /** Anonymous sessions read open-tier content only. */
  get maxTier(): string {
    return this.session?.maxTier ?? "open";
  }

  get authenticated(): boolean {
    return this.session !== null;
  }

  login(session: SessionInfo): void {
    this.cache.clear(); // never serve another actor's cached fragments
    this.session = session;
  }

  logout(): void {
    this.session = null;
    this.cache.clear();
  }

  private cacheKey(fragmentId: string, params: string): string {
    return `${this.session?.token ?? "anon"}|${fragmentId}|${params}`;
  }

  cachedFragment(fragmentId: string, params: string) {
    return this.cache.get(this.cacheKey(fragmentId, params)) ?? null;
  }

  storeFragment(fragmentId: string, params: string, etag: string, payload: unknown) {
    this.cache.set(this.cacheKey(fragmentId, params), { etag, payload });
  }
}

/**
 * Last-write-wins per region: responses carry the generation that issued
 * them, and anything but the latest generation is dropped.
 */
export class FragmentGate {
  private generations = new Map<string, number>();

  issue(region: string): number {
    const next = (this.generations.get(region) ?? 0) + 1;
    this.generations.set(region, next);
    return next;
  }

  accept(region: string, generation: number): boolean {
    return this.generations.get(region) === generation;
  }
}

/** Unsaved-edit guard: navigation away needs an explicit confirmation. */
export class DirtyGuard {
  private dirty = false;

  markDirty(): void {
    this.dirty = true;
  }

  markClean(): void {
    this.dirty = false;
  }

  get isDirty(): boolean {
    return this.dirty;
  }

  /** True when navigation may proceed. */
  confirmLeave(confirm: () => boolean): boolean {
    if (!this.dirty) return true;
    const leave = confirm();
    if (leave) this.dirty = false;
    return leave;
  }
}
