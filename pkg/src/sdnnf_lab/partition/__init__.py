from sdnnf_lab.partition.bipartition import (
    Bipartition,
    PartitionSearch,
    best_connected_bipartition,
    lemma4_partition,
    theorem4_partition,
)
from sdnnf_lab.partition.contracted import (
    AcceptabilityReport,
    ContractedGraph,
    is_acceptable,
)
from sdnnf_lab.partition.params import DEFAULT_PARAMS, PartitionParams
from sdnnf_lab.partition.splitting import (
    BetterPartitionResult,
    ChargeState,
    Improvement,
    SplitResult,
    SplitTrace,
    better_partition,
    charging,
    choose_s,
    improve,
    split,
)
from sdnnf_lab.partition.treewidth import (
    DecompositionCheck,
    TreeDecomposition,
    TreewidthResult,
    decomposition_from_order,
    induced_treewidth,
    treewidth,
    treewidth_by_search,
    treewidth_exact,
    verify_decomposition,
)
from sdnnf_lab.partition.tripartition import Tripartition, tripartition
from sdnnf_lab.partition.well_linked import (
    WellLinkedResult,
    check_separator_property,
    disjoint_paths,
    is_well_linked,
    well_linked_set,
)

__all__ = [
    "DEFAULT_PARAMS",
    "AcceptabilityReport",
    "BetterPartitionResult",
    "Bipartition",
    "ChargeState",
    "ContractedGraph",
    "DecompositionCheck",
    "Improvement",
    "PartitionParams",
    "PartitionSearch",
    "SplitResult",
    "SplitTrace",
    "TreeDecomposition",
    "Tripartition",
    "TreewidthResult",
    "WellLinkedResult",
    "best_connected_bipartition",
    "better_partition",
    "charging",
    "check_separator_property",
    "choose_s",
    "decomposition_from_order",
    "disjoint_paths",
    "improve",
    "induced_treewidth",
    "is_acceptable",
    "is_well_linked",
    "lemma4_partition",
    "split",
    "theorem4_partition",
    "treewidth",
    "treewidth_by_search",
    "treewidth_exact",
    "tripartition",
    "verify_decomposition",
    "well_linked_set",
]
