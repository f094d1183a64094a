"""The HTTP(S) boundary: validation, routing, sessions, fragments.

One service binary fronts the record store. All server state lives in
persistence; the bearer token is the only client-held state, and an
unknown or expired token simply degrades to the anonymous actor.
"""

from __future__ import annotations

import math
from contextlib import asynccontextmanager
from datetime import timedelta
from typing import Optional

from fastapi import Depends, FastAPI, File, Form, Request, Response, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .. import markup
from ..access import (
    AccountInactive,
    AccountService,
    AccessTier,
    Actor,
    InvalidCredentials,
    max_visible_tier,
)
from ..content import (
    AuthorizationDenied,
    ContentError,
    ContentService,
    DuplicateSiblingLabel,
    EmptyTerm,
    GlossaryEntry,
    InvalidQuery,
    MarkupError,
    NotFound,
    PayloadTooLarge,
    ResourceDraft,
    ResourcePatch,
    ResourceQuery,
    RevisionConflict,
    UnknownKind,
    UnknownTaxonomyNode,
)
from ..labkit import (
    ActivityInput,
    AttenuationPoint,
    CountWindow,
    LabkitError,
    MeasuredValue,
    check_result,
    fit_attenuation,
    get_labwork,
    parse_spectrum,
    relative_activity,
    window_counts,
    LABWORKS,
)
from ..storage import open_store
from .config import ServiceConfig
from .fragments import FRAGMENT_IDS, compute_etag, etag_matches
from . import schemas as S

_ERROR_STATUS = {
    NotFound: (404, "not_found"),
    RevisionConflict: (409, "revision_conflict"),
    MarkupError: (422, "markup_error"),
    PayloadTooLarge: (413, "payload_too_large"),
    UnknownKind: (400, "unknown_kind"),
    UnknownTaxonomyNode: (400, "unknown_taxonomy_node"),
    EmptyTerm: (400, "empty_term"),
    DuplicateSiblingLabel: (409, "duplicate_sibling_label"),
    InvalidQuery: (400, "invalid_query"),
}


def _error_response(status: int, code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse({"error": code, "message": message, **extra}, status_code=status)


def create_app(config: ServiceConfig) -> FastAPI:
    store = open_store(config.data_dir, fsync=config.fsync)
    accounts = AccountService(
        store, session_lifetime=timedelta(hours=config.session_lifetime_hours)
    )
    content = ContentService(store, max_attachment_bytes=config.max_upload_bytes)
    bootstrap = config.bootstrap_admin()
    if bootstrap is not None:
        accounts.ensure_bootstrap_admin(*bootstrap)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        store.close()

    app = FastAPI(title="belnet portal", lifespan=lifespan)
    app.state.store = store
    app.state.accounts = accounts
    app.state.content = content
    app.state.config = config

    # the browser client is served separately from the API host
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["ETag"],
    )

    # -- request validation and filtering --------------------------------

    @app.middleware("http")
    async def validate_request(request: Request, call_next):
        path = request.scope.get("path", "")
        if any(segment in (".", "..") for segment in path.split("/")):
            return _error_response(400, "malformed", "path traversal rejected")
        if config.tls_enabled and request.url.scheme == "http":
            secure = request.url.replace(scheme="https")
            return Response(status_code=308, headers={"Location": str(secure)})
        declared = request.headers.get("content-length")
        if declared is not None:
            try:
                length = int(declared)
            except ValueError:
                return _error_response(400, "malformed", "bad content-length")
            if length > config.max_upload_bytes + 65536:
                return _error_response(
                    413, "payload_too_large", "request body exceeds the upload limit"
                )
        return await call_next(request)

    # -- error mapping ------------------------------------------------------

    @app.exception_handler(ContentError)
    async def content_error(request: Request, exc: ContentError):
        if isinstance(exc, AuthorizationDenied):
            status = 401 if exc.reason == "role" else 403
            return _error_response(
                status, "authorization_denied", str(exc), reason=exc.reason
            )
        if isinstance(exc, MarkupError):
            return _error_response(
                422,
                "markup_error",
                str(exc),
                position={"line": exc.line, "column": exc.column},
                expected=exc.expected,
                found=exc.found,
            )
        status, code = 400, "content_error"
        for klass, (st, cd) in _ERROR_STATUS.items():
            if isinstance(exc, klass):
                status, code = st, cd
                break
        return _error_response(status, code, str(exc))

    @app.exception_handler(markup.ParseError)
    async def parse_error(request: Request, exc: markup.ParseError):
        return _error_response(
            422,
            "markup_error",
            str(exc),
            position={"line": exc.line, "column": exc.column},
            expected=exc.expected,
            found=exc.found,
        )

    @app.exception_handler(InvalidCredentials)
    async def invalid_credentials(request: Request, exc: InvalidCredentials):
        return _error_response(401, "invalid_credentials", "invalid credentials")

    @app.exception_handler(AccountInactive)
    async def account_inactive(request: Request, exc: AccountInactive):
        return _error_response(403, "account_inactive", str(exc))

    @app.exception_handler(LabkitError)
    async def labkit_error(request: Request, exc: LabkitError):
        return _error_response(400, "labkit_error", str(exc))

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return _error_response(400, "malformed", "request failed validation",
                               detail=exc.errors())

    # -- actor resolution ---------------------------------------------------

    def get_actor(request: Request) -> Actor:
        header = request.headers.get("authorization", "")
        token = header[7:].strip() if header.lower().startswith("bearer ") else None
        return accounts.resolve(token)

    def _parse_tier(name: Optional[str]) -> AccessTier:
        if name is None:
            return AccessTier.RESTRICTED
        try:
            return AccessTier.parse(name)
        except ValueError as exc:
            raise InvalidQuery(str(exc)) from exc

    # -- payload builders shared by full pages and fragments -----------------

    def resource_page_payload(
        actor: Actor,
        tier: Optional[str],
        taxonomy: Optional[str],
        q: Optional[str],
        sort: str,
        direction: str,
        offset: int,
        limit: int,
    ) -> dict:
        query = ResourceQuery(
            tier_ceiling=_parse_tier(tier),
            taxonomy_filter=taxonomy,
            text_filter=q,
            sort_field=sort,
            sort_dir=direction,
            offset=offset,
            limit=limit,
        )
        return S.ResourcePageOut.build(content.query_resources(query, actor)).model_dump()

    def resource_detail_payload(actor: Actor, resource_id: str) -> dict:
        resource = content.get_resource(resource_id, actor)
        body_html = markup.render(markup.parse(resource.body), "html_mathml")
        return S.ResourceOut.build(resource, body_html).model_dump()

    def glossary_payload(actor: Actor, prefix: str) -> dict:
        entries = content.search_terms(prefix, actor)
        return {"entries": [S.GlossaryEntryOut.build(e).model_dump() for e in entries]}

    def labworks_payload() -> dict:
        return {"works": [S.LabWorkOut.build(w).model_dump() for w in LABWORKS]}

    # -- sessions -------------------------------------------------------------

    @app.post("/api/session", response_model=S.SessionOut)
    def create_session(body: S.SessionIn):
        session = accounts.authenticate(body.username, body.password)
        principal = accounts.get_principal(body.username)
        ceiling = max_visible_tier(principal.role)
        return S.SessionOut(
            token=session.token,
            expires_at=session.expires_at.isoformat(),
            max_tier=ceiling.label,
        )

    @app.delete("/api/session", response_model=S.StatusOut)
    def revoke_session(request: Request):
        header = request.headers.get("authorization", "")
        token = header[7:].strip() if header.lower().startswith("bearer ") else None
        if token:
            accounts.revoke(token)
        return S.StatusOut()

    # -- resources --------------------------------------------------------------

    @app.get("/api/resources", response_model=S.ResourcePageOut)
    def list_resources(
        request: Request,
        tier: Optional[str] = None,
        taxonomy: Optional[str] = None,
        q: Optional[str] = None,
        sort: str = "updated_at",
        dir: str = "desc",
        offset: int = 0,
        limit: int = 50,
    ):
        actor = get_actor(request)
        return resource_page_payload(actor, tier, taxonomy, q, sort, dir, offset, limit)

    @app.post("/api/resources", response_model=S.ResourceOut, status_code=201)
    def create_resource(body: S.ResourceDraftIn, actor: Actor = Depends(get_actor)):
        draft = ResourceDraft(
            title=body.title,
            body=body.body,
            tier=_parse_tier(body.tier),
            taxonomy_ids=tuple(body.taxonomy_ids),
        )
        resource = content.create_resource(draft, actor)
        return S.ResourceOut.build(
            resource, markup.render(markup.parse(resource.body), "html_mathml")
        )

    @app.get("/api/resources/{resource_id}", response_model=S.ResourceOut)
    def get_resource(resource_id: str, actor: Actor = Depends(get_actor)):
        return resource_detail_payload(actor, resource_id)

    @app.put("/api/resources/{resource_id}", response_model=S.ResourceOut)
    def update_resource(
        resource_id: str, body: S.ResourcePatchIn, actor: Actor = Depends(get_actor)
    ):
        patch = ResourcePatch(
            title=body.title,
            body=body.body,
            tier=None if body.tier is None else _parse_tier(body.tier),
            taxonomy_ids=None
            if body.taxonomy_ids is None
            else tuple(body.taxonomy_ids),
        )
        resource = content.update_resource(
            resource_id, patch, body.expected_revision, actor
        )
        return S.ResourceOut.build(
            resource, markup.render(markup.parse(resource.body), "html_mathml")
        )

    @app.post("/api/resources/{resource_id}/archive", response_model=S.ResourceOut)
    def archive_resource(resource_id: str, actor: Actor = Depends(get_actor)):
        resource = content.archive_resource(resource_id, actor)
        return S.ResourceOut.build(
            resource, markup.render(markup.parse(resource.body), "html_mathml")
        )

    @app.get("/api/resources/{resource_id}/history", response_model=list[S.RevisionOut])
    def revision_history(resource_id: str, actor: Actor = Depends(get_actor)):
        return [
            S.RevisionOut.build(r) for r in content.revision_history(resource_id, actor)
        ]

    # -- attachments ---------------------------------------------------------------

    @app.post(
        "/api/resources/{resource_id}/attachments",
        response_model=S.AttachmentOut,
        status_code=201,
    )
    async def upload_attachment(
        resource_id: str,
        file: UploadFile,
        kind: str = Form(...),
        media_type: Optional[str] = Form(None),
        actor: Actor = Depends(get_actor),
    ):
        data = await file.read()
        attachment = content.attach_file(
            resource_id,
            kind=kind,
            media_type=media_type or file.content_type or "application/octet-stream",
            filename=file.filename or "upload",
            data=data,
            actor=actor,
        )
        return S.AttachmentOut.build(attachment)

    @app.get("/api/attachments/{attachment_id}")
    def fetch_attachment(attachment_id: str, actor: Actor = Depends(get_actor)):
        attachment, data = content.get_attachment(attachment_id, actor)
        return Response(
            content=data,
            media_type=attachment.media_type,
            headers={
                "Content-Disposition": f'attachment; filename="{attachment.filename}"'
            },
        )

    # -- glossary ---------------------------------------------------------------------

    @app.get("/api/glossary", response_model=list[S.GlossaryEntryOut])
    def search_glossary(prefix: str = "", actor: Actor = Depends(get_actor)):
        return [S.GlossaryEntryOut.build(e) for e in content.search_terms(prefix, actor)]

    @app.put("/api/glossary/{term}", response_model=S.GlossaryEntryOut)
    def upsert_glossary(term: str, body: S.GlossaryEntryIn, actor: Actor = Depends(get_actor)):
        entry = GlossaryEntry(
            term=term,
            definition=body.definition,
            application_area=body.application_area,
            deviation_notes=body.deviation_notes,
            source_refs=tuple(body.source_refs),
        )
        return S.GlossaryEntryOut.build(content.upsert_glossary_term(entry, actor))

    # -- taxonomy ------------------------------------------------------------------------

    @app.get("/api/taxonomy", response_model=list[S.TaxonomyNodeOut])
    def list_taxonomy():
        return [S.TaxonomyNodeOut.build(n) for n in content.list_taxonomy()]

    @app.post("/api/taxonomy", response_model=S.TaxonomyNodeOut, status_code=201)
    def add_taxonomy_node(body: S.TaxonomyNodeIn, actor: Actor = Depends(get_actor)):
        node = content.add_taxonomy_node(
            body.parent_id, body.label, actor, sort_key=body.sort_key
        )
        return S.TaxonomyNodeOut.build(node)

    @app.post(
        "/api/resources/{resource_id}/taxonomy/{node_id}",
        response_model=S.ResourceOut,
    )
    def assign_taxonomy(
        resource_id: str, node_id: str, actor: Actor = Depends(get_actor)
    ):
        resource = content.assign_resource(resource_id, node_id, actor)
        return S.ResourceOut.build(
            resource, markup.render(markup.parse(resource.body), "html_mathml")
        )

    # -- markup rendering -----------------------------------------------------------------

    @app.post("/api/markup/render", response_model=S.RenderOut)
    def render_markup(body: S.RenderIn):
        tree = markup.parse(body.source)
        return S.RenderOut(
            html_mathml=markup.render(tree, "html_mathml"),
            plain_text=markup.render(tree, "plain_text"),
        )

    # -- fragments ---------------------------------------------------------------------------

    @app.get("/api/fragments/{fragment_id}")
    def negotiate_fragment(fragment_id: str, request: Request):
        if fragment_id not in FRAGMENT_IDS:
            raise NotFound(f"unknown fragment {fragment_id}")
        actor = get_actor(request)
        params = request.query_params
        if fragment_id == "resource-list":
            payload = resource_page_payload(
                actor,
                params.get("tier"),
                params.get("taxonomy"),
                params.get("q"),
                params.get("sort", "updated_at"),
                params.get("dir", "desc"),
                _int_param(params, "offset", 0),
                _int_param(params, "limit", 50),
            )
        elif fragment_id == "resource-detail":
            resource_id = params.get("id")
            if not resource_id:
                raise InvalidQuery("resource-detail requires ?id=")
            payload = resource_detail_payload(actor, resource_id)
        elif fragment_id == "glossary-panel":
            payload = glossary_payload(actor, params.get("prefix", ""))
        else:
            payload = labworks_payload()
        etag = compute_etag(payload)
        if etag_matches(request.headers.get("if-none-match"), etag):
            return Response(status_code=304, headers={"ETag": etag})
        return JSONResponse(
            {"fragment_id": fragment_id, "payload": payload, "etag": etag},
            headers={"ETag": etag},
        )

    # -- lab works and toolkit -------------------------------------------------------------------

    @app.get("/api/labworks/{labwork_id}", response_model=S.LabWorkOut)
    def labwork_detail(labwork_id: str):
        work = get_labwork(labwork_id)
        if work is None:
            raise NotFound(f"no lab work {labwork_id}")
        return S.LabWorkOut.build(work)

    @app.post("/api/labkit/spectrum", response_model=S.SpectrumSummaryOut)
    async def labkit_spectrum(
        file: UploadFile,
        live_time_s: float = Form(...),
        label: str = Form(""),
        window_lo: Optional[float] = Form(None),
        window_hi: Optional[float] = Form(None),
        basis: str = Form("channel"),
        background: Optional[UploadFile] = File(None),
        background_live_time_s: Optional[float] = Form(None),
    ):
        text = (await file.read()).decode("utf-8", errors="replace")
        spectrum = parse_spectrum(text, live_time_s, label or (file.filename or ""))
        net = None
        if window_lo is not None and window_hi is not None:
            try:
                window = CountWindow(window_lo, window_hi, basis=basis)
            except ValueError as exc:
                raise InvalidQuery(str(exc)) from exc
            bg = None
            if background is not None:
                if background_live_time_s is None:
                    raise InvalidQuery("background requires background_live_time_s")
                bg_text = (await background.read()).decode("utf-8", errors="replace")
                bg = parse_spectrum(bg_text, background_live_time_s, "background")
            net = window_counts(spectrum, window, bg)
        return S.SpectrumSummaryOut.build(spectrum, net)

    @app.post("/api/labkit/attenuation-fit", response_model=S.AttenuationFitOut)
    def labkit_attenuation(body: S.AttenuationFitIn):
        points = [
            AttenuationPoint(
                p.thickness,
                MeasuredValue(
                    p.counts,
                    p.sigma if p.sigma is not None else math.sqrt(max(p.counts, 0.0)),
                ),
            )
            for p in body.points
        ]
        return S.AttenuationFitOut.build(
            fit_attenuation(points, thickness_unit=body.thickness_unit)
        )

    @app.post("/api/labkit/relative-activity", response_model=S.MeasuredValueModel)
    def labkit_activity(body: S.RelativeActivityIn):
        result = relative_activity(
            ActivityInput(
                a_ref=body.ref_activity.to_domain(),
                n_x=body.n_x,
                n_ref=body.n_ref,
                t_x=body.t_x,
                t_ref=body.t_ref,
            )
        )
        return S.MeasuredValueModel.build(result)

    @app.post("/api/labkit/check", response_model=S.CheckOut)
    def labkit_check(body: S.CheckIn):
        try:
            outcome = check_result(
                body.given,
                body.reference.to_domain(),
                k_sigma=body.k_sigma,
                rel_tol=body.rel_tol,
            )
        except ValueError as exc:
            raise InvalidQuery(str(exc)) from exc
        return S.CheckOut.build(outcome)

    return app


def _int_param(params, name: str, default: int) -> int:
    raw = params.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise InvalidQuery(f"{name} must be an integer") from None
