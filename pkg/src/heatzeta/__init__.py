"""Heat traces, spectral zeta continuation and quantum double suspensions.

The pipeline: pick a :mod:`spectrum` model, evaluate certified heat traces
and small-time expansions (:mod:`trace`), continue the spectral zeta function
and read off poles and residues (:mod:`zeta`), and transform models with the
quantum double suspension (:mod:`qds`). ``heatzeta.verify.run_all()`` runs the
end-to-end identity checks; the ``heatzeta`` console script exposes all of it.
"""

from .backend import backend_name, thread_count
from .errors import (
    BackendMismatchError,
    DomainError,
    GammaPoleError,
    HeatzetaError,
    MissingZetaValueError,
    NoClosedFormError,
    NonGeometricGridError,
    PoleProximityError,
    ResourceBudgetError,
    UnknownModelError,
    UnknownObservableError,
)
from .expansion import FloatCoeff, LaurentExpansion
from .qds import (
    SuspendedObservable,
    amplify,
    dimension_spectrum,
    iterate,
    lower_symbol,
    suspend,
    suspended_trace_expansion,
    tensor_suspension,
    upper_symbol,
)
from .spectrum import (
    BUILTIN_MODELS,
    Observable,
    SpectralModel,
    abs_value_observable,
    builtin,
    finite_diag,
    get_model,
    get_observable,
    identity_observable,
    kernel_adjust,
    kernel_projection,
    minus_projection,
    model_from_json,
    plus_projection,
    rank_one,
    torus_monomial,
)
from .trace import (
    TraceSample,
    closed_form_expansion,
    fit_expansion,
    heat_trace,
    sample_grid,
    trace_expansion,
)
from .zeta import (
    ZetaData,
    ZetaValue,
    gamma,
    gauss_to_exp,
    poles_and_residues,
    residue_by_extrapolation,
    zeta_continued,
    zeta_data,
    zeta_direct,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    "thread_count",
    # errors
    "HeatzetaError",
    "DomainError",
    "BackendMismatchError",
    "NonGeometricGridError",
    "GammaPoleError",
    "PoleProximityError",
    "UnknownModelError",
    "UnknownObservableError",
    "NoClosedFormError",
    "MissingZetaValueError",
    "ResourceBudgetError",
    # expansions
    "LaurentExpansion",
    "FloatCoeff",
    # spectrum
    "SpectralModel",
    "Observable",
    "BUILTIN_MODELS",
    "builtin",
    "get_model",
    "model_from_json",
    "kernel_adjust",
    "identity_observable",
    "abs_value_observable",
    "plus_projection",
    "minus_projection",
    "kernel_projection",
    "rank_one",
    "torus_monomial",
    "finite_diag",
    "get_observable",
    # traces
    "TraceSample",
    "heat_trace",
    "sample_grid",
    "closed_form_expansion",
    "fit_expansion",
    "trace_expansion",
    # zeta
    "gamma",
    "ZetaValue",
    "ZetaData",
    "zeta_direct",
    "zeta_continued",
    "poles_and_residues",
    "zeta_data",
    "residue_by_extrapolation",
    "gauss_to_exp",
    # suspension
    "suspend",
    "amplify",
    "iterate",
    "SuspendedObservable",
    "tensor_suspension",
    "upper_symbol",
    "lower_symbol",
    "suspended_trace_expansion",
    "dimension_spectrum",
]
