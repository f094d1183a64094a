"""Catalog of the hosted lab works and the toolkit operations each uses."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple


@dataclass(frozen=True)
class LabWork:
    id: str
    title: str
    summary: str
    tools: Tuple[str, ...]  # labkit operations the work's data processing uses


LABWORKS: tuple[LabWork, ...] = (
    LabWork(
        id="relative-activity",
        title="Determination of the activity of radioactive source by a relative method",
        summary=(
            "Compare count rates of an unknown source and a reference source "
            "of known activity measured in the same geometry, then propagate "
            "the Poisson counting errors into the derived activity."
        ),
        tools=("spectrum", "relative-activity", "check"),
    ),
    LabWork(
        id="electron-absorption",
        title="Absorption of electrons in matter",
        summary=(
            "Window the beta spectra recorded behind absorbers of increasing "
            "thickness and follow the transmitted counts on a log scale with "
            "the same windowed-count and log-linear fitting tools."
        ),
        tools=("spectrum", "attenuation-fit", "check"),
    ),
    LabWork(
        id="gamma-absorption",
        title="Absorption of gamma rays in matter",
        summary=(
            "Measure transmitted gamma counts versus absorber thickness, fit "
            "the exponential attenuation law to extract the attenuation "
            "coefficient, and derive the half-value layer."
        ),
        tools=("spectrum", "attenuation-fit", "check"),
    ),
    LabWork(
        id="gamma-penetration",
        title="Study of the penetrating power of gamma rays of different energies",
        summary=(
            "Repeat the attenuation measurement for gamma lines of different "
            "energies and compare the fitted coefficients and half-value "
            "layers between them."
        ),
        tools=("spectrum", "attenuation-fit", "check"),
    ),
    LabWork(
        id="decay-chains",
        title="Natural decay chains",
        summary=(
            "Hosted data files and spectra of naturally occurring decay "
            "series; processing stays with the generic spectrum tools, "
            "nuclide identification is done by the student."
        ),
        tools=("spectrum",),
    ),
)

_BY_ID = {work.id: work for work in LABWORKS}


def get_labwork(labwork_id: str) -> Optional[LabWork]:
    return _BY_ID.get(labwork_id)
