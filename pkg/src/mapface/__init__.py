"""Random 2-cell embeddings of graphs as combinatorial maps.

Exact face and genus censuses, uniform and stepwise embedding samplers,
configuration-model face statistics, and numeric bound tables for the
expected number of faces.
"""

from .bounds import (
    BetaTable,
    BoundParams,
    asymptotic_upper,
    beta_table,
    harmonic,
    logsq_upper,
    lower_bound,
    short_face_expectation,
    stahl_bounds,
)
from .combmap import (
    CombMap,
    EdgeMatching,
    Graph,
    PartialMap,
    RotationSystem,
    count_face_orbits,
    count_faces,
    genus,
    temporary_faces,
    trace_faces,
    validate,
)
from .configmodel import (
    DegreeSequence,
    FaceOracle,
    FixedRotation,
    expected_faces_exact_cm,
    expected_faces_formula,
    face_oracle,
    gk_bounds,
    multigraph_bounds,
    possible_faces,
    sample_matching,
    sample_simple_map,
    to_combmap,
)
from .embed_random import (
    Estimate,
    ProcessTrace,
    estimate_expected_faces,
    gnp_experiment,
    sample_process_a,
    sample_process_b,
    sample_statistics,
    sample_uniform,
)
from .enumerate import (
    FaceCensus,
    expected_faces_exact,
    expected_short_faces_exact,
    face_distribution,
    genus_distribution,
)
from .errors import RefusalError, ValidationError

__version__ = "0.1.0"

__all__ = [
    "BetaTable",
    "BoundParams",
    "CombMap",
    "DegreeSequence",
    "EdgeMatching",
    "Estimate",
    "FaceCensus",
    "FaceOracle",
    "FixedRotation",
    "Graph",
    "PartialMap",
    "ProcessTrace",
    "RefusalError",
    "RotationSystem",
    "ValidationError",
    "__version__",
    "asymptotic_upper",
    "beta_table",
    "count_face_orbits",
    "count_faces",
    "estimate_expected_faces",
    "expected_faces_exact",
    "expected_faces_exact_cm",
    "expected_faces_formula",
    "expected_short_faces_exact",
    "face_distribution",
    "face_oracle",
    "genus",
    "genus_distribution",
    "gk_bounds",
    "gnp_experiment",
    "harmonic",
    "logsq_upper",
    "lower_bound",
    "multigraph_bounds",
    "possible_faces",
    "sample_matching",
    "sample_process_a",
    "sample_process_b",
    "sample_simple_map",
    "sample_statistics",
    "sample_uniform",
    "short_face_expectation",
    "stahl_bounds",
    "temporary_faces",
    "to_combmap",
    "trace_faces",
    "validate",
]
