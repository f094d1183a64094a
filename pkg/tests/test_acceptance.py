"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
complete. Every criterion enforces its own wall-clock budget.
"""

import math
import random
import re
import shutil
import threading
import time
from contextlib import contextmanager

import numpy as np
import pytest

from belnet import markup
from belnet.access import (
    AccessTier,
    Role,
    RoleKind,
    authorize,
    filter_visible,
    max_visible_tier,
)
from belnet.api import create_app
from belnet.content import (
    ContentService,
    ResourceDraft,
    ResourcePatch,
    ResourceQuery,
    RevisionConflict,
)
from belnet.labkit import (
    ActivityInput,
    AttenuationPoint,
    CountWindow,
    MeasuredValue,
    fit_attenuation,
    parse_spectrum,
    relative_activity,
    window_counts,
)
from belnet.storage import (
    HashMismatch,
    TxnBatch,
    canonical_json,
    iter_journal_entries,
    open_store,
)

from conftest import ADMIN, LiveServer, make_config
from markup_corpus import CORPUS, INJECTION_CORPUS
from oracles import grid_search_attenuation


@contextmanager
def criterion(name: str, budget_s: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"\n[FAIL] {name} ({time.perf_counter() - start:.2f}s)")
        raise
    elapsed = time.perf_counter() - start
    print(f"\n[PASS] {name} ({elapsed:.2f}s, budget {budget_s:g}s)")
    assert elapsed < budget_s, f"{name} exceeded its {budget_s}s budget"


# -- criterion 1: RBAC matrix -------------------------------------------------

# Expected decisions written out independently of authorize(): rows are
# (role, tier) -> (read allowed, write allowed).
_RBAC_TRUTH = {
    ("anonymous", AccessTier.OPEN): (True, False),
    ("anonymous", AccessTier.LIMITED): (False, False),
    ("anonymous", AccessTier.RESTRICTED): (False, False),
    ("reader_limited", AccessTier.OPEN): (True, False),
    ("reader_limited", AccessTier.LIMITED): (True, False),
    ("reader_limited", AccessTier.RESTRICTED): (False, False),
    ("editor_restricted", AccessTier.OPEN): (True, True),
    ("editor_restricted", AccessTier.LIMITED): (True, True),
    ("editor_restricted", AccessTier.RESTRICTED): (True, True),
    ("portal_admin", AccessTier.OPEN): (True, True),
    ("portal_admin", AccessTier.LIMITED): (True, True),
    ("portal_admin", AccessTier.RESTRICTED): (True, True),
}

_RBAC_ROLES = {
    "anonymous": Role(RoleKind.ANONYMOUS),
    "reader_limited": Role(RoleKind.READER, AccessTier.LIMITED),
    "editor_restricted": Role(RoleKind.EDITOR, AccessTier.RESTRICTED),
    "portal_admin": Role(RoleKind.PORTAL_ADMIN),
}


class _Tiered:
    __slots__ = ("tier",)

    def __init__(self, tier):
        self.tier = tier


def test_acceptance_rbac_matrix():
    with criterion("rbac-matrix", 10):
        checked = 0
        for (role_name, tier), (can_read, can_write) in _RBAC_TRUTH.items():
            role = _RBAC_ROLES[role_name]
            assert authorize(role, "read", tier).allowed == can_read, (role_name, tier)
            assert authorize(role, "write", tier).allowed == can_write, (role_name, tier)
            checked += 2
        assert checked == 24

        all_roles = list(_RBAC_ROLES.values()) + [
            Role(RoleKind.SYSTEM_ADMIN),
            Role(RoleKind.READER, AccessTier.OPEN),
            Role(RoleKind.READER, AccessTier.RESTRICTED),
            Role(RoleKind.EDITOR, AccessTier.OPEN),
            Role(RoleKind.EDITOR, AccessTier.LIMITED),
        ]
        rng = random.Random(163)
        for _ in range(1000):
            corpus = [_Tiered(AccessTier(rng.randrange(3))) for _ in range(rng.randrange(0, 40))]
            a, b = rng.choice(all_roles), rng.choice(all_roles)
            if max_visible_tier(a) > max_visible_tier(b):
                a, b = b, a
            seen_a = filter_visible(a, corpus)
            seen_b = set(id(x) for x in filter_visible(b, corpus))
            assert all(id(x) in seen_b for x in seen_a)


# -- criterion 2: versioning ---------------------------------------------------


def test_acceptance_versioning(tmp_path):
    with criterion("versioning", 120):
        with open_store(tmp_path / "data", fsync=False) as store:
            content = ContentService(store)
            rng = random.Random(509)
            for seq in range(500):
                draft = ResourceDraft(
                    title=f"doc-{seq}", body=f"body-{seq}", tier=AccessTier.OPEN
                )
                resource = content.create_resource(draft, ADMIN)
                submitted = [(draft.title, draft.body)]
                frozen = {
                    0: canonical_json(
                        store.get_record("revisions", f"{resource.id}/00000000")
                    )
                }
                n_updates = rng.randrange(0, 6)
                for k in range(1, n_updates + 1):
                    patch = ResourcePatch(
                        title=f"doc-{seq}-v{k}" if rng.random() < 0.7 else None,
                        body=f"body-{seq}-v{k}" if rng.random() < 0.7 else None,
                    )
                    updated = content.update_resource(resource.id, patch, k - 1, ADMIN)
                    assert updated.current_revision == k
                    prev = submitted[-1]
                    submitted.append(
                        (
                            patch.title if patch.title is not None else prev[0],
                            patch.body if patch.body is not None else prev[1],
                        )
                    )
                    frozen[k] = canonical_json(
                        store.get_record("revisions", f"{resource.id}/{k:08d}")
                    )

                history = content.revision_history(resource.id, ADMIN)
                assert len(history) == n_updates + 1
                assert [r.index for r in history] == list(range(n_updates + 1))
                for rev, (title, body) in zip(history, submitted):
                    assert (rev.title, rev.body) == (title, body)
                for k, raw in frozen.items():
                    assert raw == canonical_json(
                        store.get_record("revisions", f"{resource.id}/{k:08d}")
                    ), "revision mutated after later writes"

                if seq % 5 == 0:
                    # paired conflicting updates: exactly one winner
                    current = content.get_resource(resource.id, ADMIN).current_revision
                    outcomes = []
                    barrier = threading.Barrier(2)

                    def attempt(tag, current=current, resource=resource):
                        barrier.wait()
                        try:
                            content.update_resource(
                                resource.id,
                                ResourcePatch(title=f"race-{tag}"),
                                current,
                                ADMIN,
                            )
                            outcomes.append("ok")
                        except RevisionConflict:
                            outcomes.append("conflict")

                    threads = [
                        threading.Thread(target=attempt, args=(i,)) for i in range(2)
                    ]
                    for t in threads:
                        t.start()
                    for t in threads:
                        t.join()
                    assert sorted(outcomes) == ["conflict", "ok"]
                    assert (
                        content.get_resource(resource.id, ADMIN).current_revision
                        == current + 1
                    )


# -- criterion 3: parser ----------------------------------------------------------


def _tree_depth(node) -> int:
    children = []
    if hasattr(node, "children"):
        children = list(node.children)
    for field in ("numerator", "denominator", "child", "base", "exponent", "index"):
        if hasattr(node, field):
            children.append(getattr(node, field))
    if not children:
        return 1
    return 1 + max(_tree_depth(c) for c in children)


def test_acceptance_parser():
    with criterion("parser", 60):
        assert len(CORPUS) >= 30
        blob = "\n".join(CORPUS)
        for name in sorted(markup.KNOWN_COMMANDS):
            assert re.search(r"\\" + name + r"(?![a-zA-Z])", blob), name

        command_pattern = re.compile(r"\\[a-zA-Z]+")
        max_depth = 0
        for source in CORPUS:
            tree = markup.parse(source)
            max_depth = max(max_depth, _tree_depth(tree))
            html = markup.render(tree, "html_mathml")
            markup.render(tree, "plain_text")
            assert not command_pattern.search(html), source
        assert max_depth >= 4  # nesting depth >= 3 below the root

        rng = random.Random(20260809)
        structured = "ax2 $\\{}^_αß\n\t frac sqrt mu <>&\"'"
        crashes = 0
        for i in range(10_000):
            if i % 2 == 0:
                source = "".join(
                    rng.choice(structured) for _ in range(rng.randrange(0, 60))
                )
            else:
                source = "".join(
                    chr(rng.randrange(1, 0x2FFF)) for _ in range(rng.randrange(0, 30))
                )
            try:
                tree = markup.parse(source)
                markup.render(tree, "html_mathml")
            except markup.ParseError as err:
                assert err.line >= 1 and err.column >= 1
            except BaseException:
                crashes += 1
        assert crashes == 0

        strip = re.compile(r"</?(p|math|mrow|mi|mn|mo|mfrac|msqrt|msup|msub)>")
        for source in INJECTION_CORPUS:
            html = markup.render(markup.parse(source), "html_mathml")
            assert "<" not in strip.sub("", html), source


# -- criterion 4: labkit numerics ------------------------------------------------------


def test_acceptance_labkit():
    with criterion("labkit-numerics", 120):
        # exact-data recovery over 100 random instances
        rng = np.random.default_rng(41)
        for _ in range(100):
            mu = float(np.exp(rng.uniform(np.log(0.01), np.log(10.0))))
            n0 = float(np.exp(rng.uniform(np.log(1e2), np.log(1e8))))
            n_pts = int(rng.integers(4, 10))
            d = np.linspace(0, 4.0 / mu, n_pts)
            counts = n0 * np.exp(-mu * d)
            points = [
                AttenuationPoint(float(di), MeasuredValue(float(ni), float(np.sqrt(ni))))
                for di, ni in zip(d, counts)
            ]
            fit = fit_attenuation(points)
            assert abs(fit.mu.value - mu) <= 1e-9 * mu, (mu, n0)
            assert abs(fit.n0.value - n0) <= 1e-9 * n0, (mu, n0)
            assert fit.d_half.value == math.log(2) / fit.mu.value

        # Monte-Carlo coverage and grid-search agreement
        mu_true, n0_true = 0.3, 1e5
        d = np.linspace(0, 8, 8)
        expected = n0_true * np.exp(-mu_true * d)
        rng = np.random.default_rng(42)
        within = 0
        trials = 1000
        for _ in range(trials):
            counts = rng.poisson(expected).astype(float)
            sigmas = np.sqrt(counts)
            points = [
                AttenuationPoint(float(di), MeasuredValue(float(ni), float(si)))
                for di, ni, si in zip(d, counts, sigmas)
            ]
            fit = fit_attenuation(points)
            if abs(fit.mu.value - mu_true) <= 3 * fit.mu.sigma:
                within += 1
            mu_oracle, ln_n0_oracle = grid_search_attenuation(d, counts, sigmas)
            assert abs(fit.mu.value - mu_oracle) <= 1e-6
            assert abs(math.log(fit.n0.value) - ln_n0_oracle) <= 1e-6
        assert within / trials >= 0.95, f"only {within}/{trials} within 3 sigma"

        # sigma(N) = sqrt(N) on 10^3 random windowed counts
        rng = np.random.default_rng(43)
        for _ in range(1000):
            n_ch = int(rng.integers(1, 30))
            counts = rng.integers(0, 10_000, size=n_ch)
            text = "\n".join(f"{i} {c}" for i, c in enumerate(counts))
            spectrum = parse_spectrum(text, live_time_s=float(rng.uniform(1, 1e4)))
            lo = int(rng.integers(0, n_ch))
            hi = int(rng.integers(lo, n_ch))
            windowed = window_counts(spectrum, CountWindow(lo, hi))
            raw = int(counts[lo : hi + 1].sum())
            assert windowed.value == raw
            assert windowed.sigma == math.sqrt(raw)

        # activity homogeneity on 10^3 random inputs (power-of-two scales
        # keep float scaling exact)
        rng = np.random.default_rng(44)
        for _ in range(1000):
            base = ActivityInput(
                a_ref=MeasuredValue(float(rng.uniform(1, 1e4)), float(rng.uniform(0, 50))),
                n_x=int(rng.integers(1, 10**6)),
                n_ref=int(rng.integers(1, 10**6)),
                t_x=float(rng.uniform(0.1, 1e4)),
                t_ref=float(rng.uniform(0.1, 1e4)),
            )
            c = float(2.0 ** rng.integers(-6, 7))
            scaled = ActivityInput(
                a_ref=MeasuredValue(c * base.a_ref.value, c * base.a_ref.sigma),
                n_x=base.n_x,
                n_ref=base.n_ref,
                t_x=base.t_x,
                t_ref=base.t_ref,
            )
            a = relative_activity(base)
            b = relative_activity(scaled)
            assert b.value == c * a.value
            assert b.sigma == c * a.sigma


# -- criterion 5: API contract over a real socket -----------------------------------------


def test_acceptance_api_contract(tmp_path):
    with criterion("api-contract", 60):
        import httpx

        app = create_app(make_config(tmp_path, max_upload_bytes=100_000))
        with LiveServer(app) as server:
            with httpx.Client(base_url=server.base_url, timeout=30.0) as client:
                token = client.post(
                    "/api/session",
                    json={"username": "root", "password": "root-pw"},
                ).json()["token"]
                headers = {"Authorization": f"Bearer {token}"}

                # create -> list -> update -> conflict -> archive -> history
                created = client.post(
                    "/api/resources",
                    json={"title": "Cycle", "body": "start $\\mu$", "tier": "open"},
                    headers=headers,
                )
                assert created.status_code == 201
                rid = created.json()["id"]

                listed = client.get("/api/resources", headers=headers).json()
                assert any(r["id"] == rid for r in listed["items"])

                updated = client.put(
                    f"/api/resources/{rid}",
                    json={"expected_revision": 0, "body": "end $\\lambda$"},
                    headers=headers,
                )
                assert updated.status_code == 200

                conflict = client.put(
                    f"/api/resources/{rid}",
                    json={"expected_revision": 0, "title": "stale"},
                    headers=headers,
                )
                assert conflict.status_code == 409

                archived = client.post(
                    f"/api/resources/{rid}/archive", headers=headers
                )
                assert archived.status_code == 200
                assert archived.json()["archived"] is True

                history = client.get(
                    f"/api/resources/{rid}/history", headers=headers
                ).json()
                assert [h["index"] for h in history] == [0, 1]
                assert history[0]["body"] == "start $\\mu$"

                # fragment etag / 304
                fragment = client.get(
                    "/api/fragments/resource-list", headers=headers
                )
                etag = fragment.json()["etag"]
                assert fragment.headers["etag"] == etag
                cached = client.get(
                    "/api/fragments/resource-list",
                    headers={**headers, "If-None-Match": etag},
                )
                assert cached.status_code == 304 and cached.content == b""

                # 422 position payload
                bad = client.post(
                    "/api/resources",
                    json={"title": "bad", "body": "$x^{2$", "tier": "open"},
                    headers=headers,
                )
                assert bad.status_code == 422
                assert bad.json()["position"] == {"line": 1, "column": 6}

                # path traversal and oversize rejection
                traversal = client.get(
                    f"{server.base_url}/api/resources/%2e%2e/%2e%2e/etc/passwd"
                )
                assert traversal.status_code == 400

                fresh = client.post(
                    "/api/resources",
                    json={"title": "target", "body": "", "tier": "open"},
                    headers=headers,
                ).json()
                oversize = client.post(
                    f"/api/resources/{fresh['id']}/attachments",
                    files={"file": ("big.bin", b"z" * 400_000)},
                    data={"kind": "file"},
                    headers=headers,
                )
                assert oversize.status_code == 413


# -- criterion 6: persistence fault injection -------------------------------------------------


def test_acceptance_persistence(tmp_path):
    with criterion("persistence", 120):
        src = tmp_path / "src"
        expected_states = []
        rng = random.Random(79)
        with open_store(src, fsync=True) as store:
            for batch_no in range(30):
                batch = TxnBatch()
                for _ in range(rng.randrange(1, 5)):
                    batch.put(
                        "resources",
                        f"key-{rng.randrange(40)}",
                        {"schema_version": 1, "batch": batch_no, "r": rng.random()},
                    )
                batch.put(
                    "revisions", f"rev-{batch_no:04d}", {"schema_version": 1, "n": batch_no}
                )
                if batch_no > 3 and rng.random() < 0.5:
                    batch.delete("resources", f"key-{rng.randrange(40)}")
                store.txn_execute(batch)
                expected_states.append(
                    {
                        ks: store.query_records(ks)
                        for ks in ("resources", "revisions")
                    }
                )

        raw = (src / "journal.log").read_bytes()
        entry_ends = [0] + [end for end, _, _ in iter_journal_entries(raw)]
        assert len(entry_ends) == 31  # 30 committed batches

        kill_rng = random.Random(173)
        cut_points = {0, 1, len(raw) - 1, len(raw)}
        while len(cut_points) < 220:
            cut_points.add(kill_rng.randrange(0, len(raw) + 1))

        for n, cut in enumerate(sorted(cut_points)):
            dst = tmp_path / f"kill-{n}"
            shutil.copytree(src, dst)
            (dst / "journal.log").write_bytes(raw[:cut])
            surviving = max(i for i, end in enumerate(entry_ends) if end <= cut)
            with open_store(dst, fsync=False) as reopened:
                got = {
                    ks: reopened.query_records(ks) for ks in ("resources", "revisions")
                }
            if surviving == 0:
                assert got == {"resources": [], "revisions": []}
            else:
                assert got == expected_states[surviving - 1], (
                    f"cut at byte {cut} not a committed-batch prefix"
                )
            shutil.rmtree(dst)

        # blob corruption always detected on fetch
        with open_store(tmp_path / "blobs", fsync=False) as store:
            corrupt_rng = random.Random(7)
            for trial in range(20):
                payload = bytes(
                    corrupt_rng.randrange(256) for _ in range(corrupt_rng.randrange(1, 2048))
                )
                ref = store.store_blob(payload)
                path = store.blobs._path_for(ref.digest)
                data = bytearray(path.read_bytes())
                flip = corrupt_rng.randrange(len(data))
                data[flip] ^= 1 + corrupt_rng.randrange(255)
                path.write_bytes(bytes(data))
                with pytest.raises(HashMismatch):
                    store.fetch_blob(ref)
