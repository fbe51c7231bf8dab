from app.models.tree import Tree, TreeNode, StepFunction
from app.models.profiles import MonotoneProfile, PowerProfile
from app.models.bellman import BellmanPoint, CellRule, SpikeSequenceParams
from app.models.maximal import LevelDistribution, MaximalResult

__all__ = [
    "Tree", "TreeNode", "StepFunction",
    "MonotoneProfile", "PowerProfile",
    "BellmanPoint", "CellRule", "SpikeSequenceParams",
    "LevelDistribution", "MaximalResult",
]
