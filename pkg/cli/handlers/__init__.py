from cli.handlers.bellman import register as register_bellman
from cli.handlers.extremal import register as register_extremal
from cli.handlers.verify import register as register_verify
from cli.handlers.oracle import register as register_oracle
from cli.handlers.tree import register as register_tree
from cli.handlers.maximal import register as register_maximal

__all__ = ["register_bellman", "register_extremal", "register_verify", "register_oracle", "register_tree", "register_maximal"]
