"""signedflow: nowhere-zero flow synthesis and verification on signed graphs.

Core model and formats live in :mod:`signedflow.sigraph`; structural queries
in :mod:`signedflow.structure`; the reduction, cycle-selection, preflow and
lifting stages in their own modules; exhaustive oracles in
:mod:`signedflow.oracle`; the batch CLI in :mod:`signedflow.cli`.
"""

from signedflow.sigraph import (  # noqa: F401
    AWAY,
    NEGATIVE,
    POSITIVE,
    TOWARD,
    EdgeRecord,
    Orientation,
    SignedGraph,
    boundary_at,
    canonical_orientation,
    edge_connectivity,
    is_balanced,
    is_flow_admissible,
    parse_sg,
    serialize_sg,
    verify_flow,
)

__version__ = "0.1.0"
