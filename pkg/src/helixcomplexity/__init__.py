"""Economic, patent and Triple-Helix complexity indices."""

__version__ = "0.1.0"

from .errors import (
    AllZeroRow,
    BadShares,
    ComplexityError,
    DataError,
    DegeneracyError,
    DegenerateIndex,
    DegenerateSpectrum,
    DuplicateEntity,
    EmptyMatrix,
    InsufficientOverlap,
    LengthMismatch,
    NoConvergence,
    NoOverlap,
    NoRealEigenvalue,
    ParseError,
    SchemeMismatch,
    SpectralWarning,
    UnknownYear,
    ZeroVariance,
)
from .ingest import (
    ConcordanceTable,
    PatentRecord,
    chain_concordances,
    concordance_to_incidence,
    load_bundled,
    load_concordance,
    load_panel,
    load_patents,
    load_trade,
)
from .model import (
    BinaryIncidence,
    ComplexityIndex,
    IndexPanel,
    LabeledMatrix,
    MarginVector,
    ValuedMatrix,
    align,
    prune,
)
from .rca import binarize, rca
from .reflections import (
    ReflectionState,
    SpectralResult,
    complexity_index,
    margins,
    reflect,
    reflect_limit,
    spectral_select,
    standardize,
    w_bipartite,
)
from .stats import (
    CorrelationReport,
    correlation_series,
    cross_section_correlate,
    lagged_correlate,
    pearson,
    spearman,
    trend_test,
)
from .triple_helix import (
    TripartiteSystem,
    build_system,
    rotations,
    thci,
    w_clockwise,
    w_counterclockwise,
)
