"""
oracle search: полный перебор расстановок мультимножества на листьях двоичного дерева.
"""
import argparse

from app.services import rearrange_service
from app.services.export_service import export_service
from app.services.tree_service import dyadic_tree, step_function
from cli.handlers.common import add_out, emit, parse_values


def cmd_search(args: argparse.Namespace) -> int:
    tree = dyadic_tree(args.depth)
    values = step_function(tree, parse_values(args.values)).values
    report = rearrange_service.rearrangement_search(tree, values, args.q)
    emit(export_service.render_json(report), args)
    return 0 if report.holds else 1


def register(groups: argparse._SubParsersAction) -> None:
    group = groups.add_parser("oracle", help="Оракулы полного перебора")
    commands = group.add_subparsers(dest="command", required=True)

    search = commands.add_parser("search", help="Максимум ∫(M_T φ)^q по перестановкам")
    search.add_argument("--depth", type=int, required=True)
    search.add_argument("--values", required=True, help='Мультимножество: "8,4,2,1,0,0,0,0"')
    search.add_argument("--q", type=float, default=0.5)
    add_out(search)
    search.set_defaults(handler=cmd_search)
