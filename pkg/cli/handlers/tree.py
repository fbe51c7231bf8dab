"""
tree show: дерево (и, если заданы значения, ступенчатая функция) во вложенных записях.
"""
import argparse
from fractions import Fraction

from app.services import tree_service
from cli.handlers.common import add_out, emit, parse_values


def cmd_show(args: argparse.Namespace) -> int:
    if args.comb:
        tree = tree_service.dyadic_comb_tree(args.depth, Fraction(args.ratio))
    else:
        tree = tree_service.dyadic_tree(args.depth)
    if args.values:
        schema = tree_service.step_function_to_schema(tree_service.step_function(tree, parse_values(args.values)))
    else:
        schema = tree_service.tree_to_schema(tree)
    emit(schema.model_dump_json(indent=2, exclude_none=True), args)
    return 0


def register(groups: argparse._SubParsersAction) -> None:
    group = groups.add_parser("tree", help="Деревья и ступенчатые функции")
    commands = group.add_subparsers(dest="command", required=True)

    show = commands.add_parser("show", help="Вложенные записи узлов")
    show.add_argument("--depth", type=int, required=True)
    show.add_argument("--comb", action="store_true", help="Гребёнка вместо полного двоичного дерева")
    show.add_argument("--ratio", default="1/2", help="Отношение гребёнки, например 1/2")
    show.add_argument("--values", default=None, help="Значения на листьях через запятую")
    add_out(show)
    show.set_defaults(handler=cmd_show)
