from app.schemas.reports import (
    CheckReport,
    WeakTypeReport,
    KolmogorovReport,
    UpperBoundReport,
    ChainReport,
    ReductionReport,
    HardyIdentityReport,
    ExtremalProfileReport,
    HolderSplitReport,
    BellmanEvalResponse,
    SymmetrizationReport,
    SearchReport,
    RearrangedResidual,
    ResidualReport,
    SmallKRow,
    SmallKReport,
    PowerGapReport,
    CheckRow,
)
from app.schemas.tree import TreeNodeSchema, ProfilePoint
from app.schemas.campaign import CampaignConfig

__all__ = [
    "CheckReport",
    "WeakTypeReport",
    "KolmogorovReport",
    "UpperBoundReport",
    "ChainReport",
    "ReductionReport",
    "HardyIdentityReport",
    "ExtremalProfileReport",
    "HolderSplitReport",
    "BellmanEvalResponse",
    "SymmetrizationReport",
    "SearchReport",
    "RearrangedResidual",
    "ResidualReport",
    "SmallKRow",
    "SmallKReport",
    "PowerGapReport",
    "CheckRow",
    "TreeNodeSchema",
    "ProfilePoint",
    "CampaignConfig",
]
