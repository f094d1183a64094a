// The browser query must round-trip through the URL: deep links reproduce
// the exact view.

import { describe, expect, it } from "vitest";

import { BrowserQuery, DEFAULT_QUERY, decodeQuery, encodeQuery } from "../src/query.js";
import { decodeRoute, encodeRoute } from "../src/state.js";

function roundTrip(query: BrowserQuery): BrowserQuery {
  return decodeQuery(encodeQuery(query));
}

describe("query url round-trip", () => {
  it("defaults encode to an empty string", () => {
    expect(encodeQuery({ ...DEFAULT_QUERY })).toBe("");
    expect(decodeQuery("")).toEqual(DEFAULT_QUERY);
  });

  it("preserves every field", () => {
    const query: BrowserQuery = {
      tier: "limited",
      taxonomy: "node-17",
      q: "gamma & <rays>",
      sort: "title",
      dir: "asc",
      offset: 40,
      limit: 20,
    };
    expect(roundTrip(query)).toEqual(query);
  });

  it("survives randomized round-trips", () => {
    const tiers = [null, "open", "limited", "restricted"];
    const sorts = ["updated_at", "created_at", "title"];
    let seed = 42;
    const rand = () => {
      seed = (seed * 1103515245 + 12345) % 2 ** 31;
      return seed / 2 ** 31;
    };
    for (let i = 0; i < 200; i++) {
      const query: BrowserQuery = {
        tier: tiers[Math.floor(rand() * tiers.length)],
        taxonomy: rand() < 0.5 ? null : `node-${Math.floor(rand() * 100)}`,
        q: rand() < 0.5 ? null : `term ${Math.floor(rand() * 100)} ?&=#`,
        sort: sorts[Math.floor(rand() * sorts.length)],
        dir: rand() < 0.5 ? "asc" : "desc",
        offset: Math.floor(rand() * 500),
        limit: 1 + Math.floor(rand() * 499),
      };
      expect(roundTrip(query)).toEqual(query);
    }
  });

  it("ignores junk parameter values", () => {
    const decoded = decodeQuery("offset=banana&dir=upward&limit=");
    expect(decoded.offset).toBe(0);
    expect(decoded.dir).toBe("desc");
  });
});

describe("route round-trip", () => {
  it("keeps browser queries in the hash", () => {
    const route = decodeRoute("#/browser?sort=title&dir=asc&q=decay");
    expect(route.kind).toBe("browser");
    expect(encodeRoute(route)).toBe("#/browser?q=decay&sort=title&dir=asc");
    expect(decodeRoute(encodeRoute(route))).toEqual(route);
  });

  it("round-trips each screen", () => {
    for (const hash of [
      "#/editor/abc123",
      "#/editor/new",
      "#/glossary?prefix=bec",
      "#/labwork/gamma-absorption",
      "#/login",
    ]) {
      expect(encodeRoute(decodeRoute(hash))).toBe(hash);
    }
  });

  it("falls back to the browser", () => {
    expect(decodeRoute("").kind).toBe("browser");
    expect(decodeRoute("#/unknown").kind).toBe("browser");
  });
});
