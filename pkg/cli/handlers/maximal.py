"""
maximal eval: M_T φ, уровни argmax и (при --q) ∫(M_T φ)^q на двоичном дереве;
с --rearranged: убывающая перестановка (M_T φ)* в CSV.
"""
import argparse
import json

from app.core.numeric import render_exact
from app.services import maximal_service, rearrange_service
from app.services.export_service import export_service
from app.services.tree_service import dyadic_tree, step_function
from cli.handlers.common import add_out, emit, parse_values


def cmd_eval(args: argparse.Namespace) -> int:
    phi = step_function(dyadic_tree(args.depth), parse_values(args.values))
    result = maximal_service.maximal_operator(phi)
    if args.rearranged:
        points = rearrange_service.profile_to_schema(result.distribution.rearranged())
        emit(export_service.render_profile(points), args)
        return 0
    payload = {
        "values": [render_exact(v) for v in phi.values],
        "maximal": [render_exact(v) for v in result.maximal.values],
        "argmax_levels": list(result.argmax_levels),
    }
    if args.q is not None:
        payload["q"] = args.q
        payload["integral"] = maximal_service.maximal_integral(args.q, phi, maximal=result)
    emit(json.dumps(payload, ensure_ascii=False, indent=2), args)
    return 0


def register(groups: argparse._SubParsersAction) -> None:
    group = groups.add_parser("maximal", help="Двоичный максимальный оператор")
    commands = group.add_subparsers(dest="command", required=True)

    evaluate = commands.add_parser("eval", help="M_T φ по листьям")
    evaluate.add_argument("--depth", type=int, required=True)
    evaluate.add_argument("--values", required=True, help='Значения на листьях: "4,0,0,0"')
    evaluate.add_argument("--q", type=float, default=None)
    evaluate.add_argument(
        "--rearranged", action="store_true", help="Вывести (M_T φ)* как CSV пар breakpoint,value"
    )
    add_out(evaluate)
    evaluate.set_defaults(handler=cmd_eval)
