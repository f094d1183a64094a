"""Pydantic request/response models for the HTTP surface.

Tiers travel as their lowercase names; timestamps as ISO-8601 strings.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

from ..access import AccessTier
from ..content import (
    Attachment,
    GlossaryEntry,
    Resource,
    ResourcePage,
    ResourceSummary,
    Revision,
    TaxonomyNode,
)
from ..labkit import AttenuationFit, CheckOutcome, LabWork, MeasuredValue, Spectrum

TIER_NAMES = tuple(t.label for t in AccessTier)


def parse_tier(text: str) -> AccessTier:
    return AccessTier.parse(text)


class SessionIn(BaseModel):
    username: str
    password: str


class SessionOut(BaseModel):
    token: str
    expires_at: str
    max_tier: str  # lets clients enforce the tier ceiling on cached views


class ResourceDraftIn(BaseModel):
    title: str
    body: str = ""
    tier: str = "open"
    taxonomy_ids: list[str] = Field(default_factory=list)


class ResourcePatchIn(BaseModel):
    expected_revision: int
    title: Optional[str] = None
    body: Optional[str] = None
    tier: Optional[str] = None
    taxonomy_ids: Optional[list[str]] = None


class ResourceSummaryOut(BaseModel):
    id: str
    tier: str
    title: str
    current_revision: int
    created_at: str
    updated_at: str

    @classmethod
    def build(cls, s: ResourceSummary) -> "ResourceSummaryOut":
        return cls(
            id=s.id,
            tier=s.tier.label,
            title=s.title,
            current_revision=s.current_revision,
            created_at=s.created_at.isoformat(),
            updated_at=s.updated_at.isoformat(),
        )


class ResourcePageOut(BaseModel):
    items: list[ResourceSummaryOut]
    total_count: int
    offset: int
    limit: int

    @classmethod
    def build(cls, page: ResourcePage) -> "ResourcePageOut":
        return cls(
            items=[ResourceSummaryOut.build(s) for s in page.items],
            total_count=page.total_count,
            offset=page.offset,
            limit=page.limit,
        )


class ResourceOut(BaseModel):
    id: str
    tier: str
    title: str
    body: str
    body_html: str
    taxonomy_ids: list[str]
    attachment_ids: list[str]
    current_revision: int
    created_at: str
    updated_at: str
    archived: bool

    @classmethod
    def build(cls, r: Resource, body_html: str) -> "ResourceOut":
        return cls(
            id=r.id,
            tier=r.tier.label,
            title=r.title,
            body=r.body,
            body_html=body_html,
            taxonomy_ids=list(r.taxonomy_ids),
            attachment_ids=list(r.attachment_ids),
            current_revision=r.current_revision,
            created_at=r.created_at.isoformat(),
            updated_at=r.updated_at.isoformat(),
            archived=r.archived,
        )


class RevisionOut(BaseModel):
    resource_id: str
    index: int
    title: str
    body: str
    author: str
    timestamp: str

    @classmethod
    def build(cls, r: Revision) -> "RevisionOut":
        return cls(
            resource_id=r.resource_id,
            index=r.index,
            title=r.title,
            body=r.body,
            author=r.author,
            timestamp=r.timestamp.isoformat(),
        )


class AttachmentOut(BaseModel):
    id: str
    resource_id: str
    kind: str
    media_type: str
    filename: str
    size_bytes: int
    digest: str

    @classmethod
    def build(cls, a: Attachment) -> "AttachmentOut":
        return cls(
            id=a.id,
            resource_id=a.resource_id,
            kind=a.kind,
            media_type=a.media_type,
            filename=a.filename,
            size_bytes=a.size_bytes,
            digest=a.blob_ref.digest,
        )


class GlossaryEntryIn(BaseModel):
    definition: str
    application_area: str = ""
    deviation_notes: str = ""
    source_refs: list[str] = Field(default_factory=list)


class GlossaryEntryOut(BaseModel):
    term: str
    definition: str
    application_area: str
    deviation_notes: str
    source_refs: list[str]

    @classmethod
    def build(cls, e: GlossaryEntry) -> "GlossaryEntryOut":
        return cls(
            term=e.term,
            definition=e.definition,
            application_area=e.application_area,
            deviation_notes=e.deviation_notes,
            source_refs=list(e.source_refs),
        )


class TaxonomyNodeIn(BaseModel):
    label: str
    parent_id: Optional[str] = None
    sort_key: Optional[str] = None


class TaxonomyNodeOut(BaseModel):
    id: str
    parent_id: Optional[str]
    label: str
    sort_key: str

    @classmethod
    def build(cls, n: TaxonomyNode) -> "TaxonomyNodeOut":
        return cls(id=n.id, parent_id=n.parent_id, label=n.label, sort_key=n.sort_key)


class RenderIn(BaseModel):
    source: str


class RenderOut(BaseModel):
    html_mathml: str
    plain_text: str


class MeasuredValueModel(BaseModel):
    value: float
    sigma: float = 0.0

    def to_domain(self) -> MeasuredValue:
        return MeasuredValue(self.value, self.sigma)

    @classmethod
    def build(cls, mv: MeasuredValue) -> "MeasuredValueModel":
        return cls(value=mv.value, sigma=mv.sigma)


class ChannelOut(BaseModel):
    index: int
    energy_keV: Optional[float]
    counts: int


class SpectrumSummaryOut(BaseModel):
    label: str
    live_time_s: float
    channel_count: int
    total_counts: int
    has_energies: bool
    channels: list[ChannelOut]
    window: Optional[MeasuredValueModel] = None

    @classmethod
    def build(cls, s: Spectrum, window: Optional[MeasuredValue] = None) -> "SpectrumSummaryOut":
        return cls(
            label=s.label,
            live_time_s=s.live_time_s,
            channel_count=len(s.channels),
            total_counts=s.total_counts,
            has_energies=s.has_energies,
            channels=[
                ChannelOut(index=c.index, energy_keV=c.energy_keV, counts=c.counts)
                for c in s.channels
            ],
            window=None if window is None else MeasuredValueModel.build(window),
        )


class AttenuationPointIn(BaseModel):
    thickness: float
    counts: float
    sigma: Optional[float] = None  # defaults to sqrt(counts)


class AttenuationFitIn(BaseModel):
    points: list[AttenuationPointIn]
    thickness_unit: str = "cm"


class AttenuationFitOut(BaseModel):
    mu: MeasuredValueModel
    n0: MeasuredValueModel
    half_value_layer: MeasuredValueModel
    residual_rms: float
    n_points: int
    thickness_unit: str
    warnings: list[str]

    @classmethod
    def build(cls, fit: AttenuationFit) -> "AttenuationFitOut":
        return cls(
            mu=MeasuredValueModel.build(fit.mu),
            n0=MeasuredValueModel.build(fit.n0),
            half_value_layer=MeasuredValueModel.build(fit.d_half),
            residual_rms=fit.residual_rms,
            n_points=fit.n_points,
            thickness_unit=fit.thickness_unit,
            warnings=list(fit.warnings),
        )


class RelativeActivityIn(BaseModel):
    ref_activity: MeasuredValueModel
    n_x: int
    t_x: float
    n_ref: int
    t_ref: float


class CheckIn(BaseModel):
    given: float
    reference: MeasuredValueModel
    k_sigma: float = 3.0
    rel_tol: float = 0.05


class CheckOut(BaseModel):
    passed: bool
    deviation: float
    sigma_bound: float
    relative_bound: float
    applied: str
    explanation: str

    @classmethod
    def build(cls, outcome: CheckOutcome) -> "CheckOut":
        return cls(
            passed=outcome.passed,
            deviation=outcome.deviation,
            sigma_bound=outcome.sigma_bound,
            relative_bound=outcome.relative_bound,
            applied=outcome.applied,
            explanation=outcome.explanation,
        )


class LabWorkOut(BaseModel):
    id: str
    title: str
    summary: str
    tools: list[str]

    @classmethod
    def build(cls, work: LabWork) -> "LabWorkOut":
        return cls(
            id=work.id, title=work.title, summary=work.summary, tools=list(work.tools)
        )


class FragmentOut(BaseModel):
    fragment_id: str
    payload: dict
    etag: str


class StatusOut(BaseModel):
    status: str = "ok"
