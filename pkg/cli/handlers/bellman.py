"""
bellman eval: z, c, ω_q и B_q(f, h) для точки;
bellman curve: CSV (z, ω_q(z)) для построения графиков.
"""
import argparse

from app.schemas import BellmanEvalResponse
from app.services import bellman_service
from app.services.export_service import export_service
from cli.handlers.common import add_out, emit


def cmd_eval(args: argparse.Namespace) -> int:
    point = bellman_service.make_point(args.q, args.f, args.h)
    g = bellman_service.extremal_profile(point)
    response = BellmanEvalResponse(
        q=point.q,
        f=point.f,
        h=point.h,
        z=point.z,
        c=g.c,
        omega=bellman_service.omega_q(point.q, point.z),
        B=bellman_service.bellman_value(point),
        K=g.K,
    )
    emit(export_service.render_json(response), args)
    return 0


def cmd_curve(args: argparse.Namespace) -> int:
    curve = bellman_service.bellman_curve(args.q, args.samples, args.z_max)
    emit(export_service.render_table(["z", "omega"], curve), args)
    return 0


def register(groups: argparse._SubParsersAction) -> None:
    group = groups.add_parser("bellman", help="Специальные функции и значение Беллмана")
    commands = group.add_subparsers(dest="command", required=True)

    evaluate = commands.add_parser("eval", help="z, c, ω_q(z), B_q(f, h)")
    evaluate.add_argument("--q", type=float, required=True)
    evaluate.add_argument("--f", type=float, required=True)
    evaluate.add_argument("--h", type=float, required=True)
    add_out(evaluate)
    evaluate.set_defaults(handler=cmd_eval)

    curve = commands.add_parser("curve", help="CSV (z, ω_q(z))")
    curve.add_argument("--q", type=float, required=True)
    curve.add_argument("--samples", type=int, default=100)
    curve.add_argument("--z-max", type=float, default=100.0)
    add_out(curve)
    curve.set_defaults(handler=cmd_curve)
