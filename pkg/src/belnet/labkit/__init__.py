from .fitting import (
    ActivityInput,
    AttenuationFit,
    AttenuationPoint,
    DegenerateDesign,
    InsufficientPoints,
    fit_attenuation,
    relative_activity,
)
from .labworks import LABWORKS, LabWork, get_labwork
from .spectrum import (
    Channel,
    CountWindow,
    EmptyWindow,
    FormatError,
    IncompatibleBackground,
    NegativeCount,
    NonMonotonicChannels,
    Spectrum,
    parse_spectrum,
    window_counts,
)
from .values import (
    CheckOutcome,
    DomainError,
    LabkitError,
    MeasuredValue,
    check_result,
)

__all__ = [
    "ActivityInput",
    "AttenuationFit",
    "AttenuationPoint",
    "Channel",
    "CheckOutcome",
    "CountWindow",
    "DegenerateDesign",
    "DomainError",
    "EmptyWindow",
    "FormatError",
    "IncompatibleBackground",
    "InsufficientPoints",
    "LABWORKS",
    "LabWork",
    "LabkitError",
    "MeasuredValue",
    "NegativeCount",
    "NonMonotonicChannels",
    "Spectrum",
    "check_result",
    "fit_attenuation",
    "get_labwork",
    "parse_spectrum",
    "relative_activity",
    "window_counts",
]
