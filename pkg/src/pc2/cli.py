"""Command-line interface: every capability of the workbench, scriptable.

Results print as JSON on stdout (and optionally to a file), so runs can be
diffed by machine.  Exit codes: 0 success, 1 verification failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import config_builder, cover, interstitium, jsonio, lemmas, svg
from .geometry import HOLE_RADIUS, SQRT3, Point2


def _emit(payload: dict, out: str | None) -> None:
    text = jsonio.dumps(payload)
    print(text)
    if out:
        Path(out).write_text(text + "\n")


def _write_svg(path: str | None, content: str) -> None:
    if path:
        Path(path).write_text(content)


def _read(path: str) -> str:
    return Path(path).read_text()


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def cmd_bound(args) -> int:
    lb = interstitium.compute_lower_bound()
    _emit({"ratio": lb.ratio, "bound": lb.bound}, args.out)
    return 0


def _build_configuration(args) -> config_builder.HardConfiguration:
    d = config_builder.CRITICAL_SPACING * args.d_frac
    if args.pose == "optimize":
        pose, _count = config_builder.optimize_pose(
            d,
            angle_steps=args.angle_steps,
            shift_steps=args.shift_steps,
            threads=args.threads,
        )
    else:
        pose = config_builder.reference_pose(d)
    return config_builder.generate_configuration(d, pose)


def cmd_config_generate(args) -> int:
    cfg = _build_configuration(args)
    payload = json.loads(config_builder.configuration_to_json(cfg))
    payload["count"] = len(cfg)
    _emit(payload, args.out)
    _write_svg(args.svg, svg.render_configuration(cfg))
    return 0


def cmd_config_verify(args) -> int:
    cfg = config_builder.configuration_from_json(_read(args.infile))
    ok = config_builder.verify_configuration(cfg)
    _emit(
        {
            "count": len(cfg),
            "boundary_clearance": cfg.boundary_clearance,
            "compressible": config_builder.verify_compressibility(cfg),
            "verified": ok,
        },
        args.out,
    )
    return 0 if ok else 1


def cmd_lemma_verify(args) -> int:
    if args.number == 1:
        rep = lemmas.verify_lemma1(
            trials=args.trials, rng_seed=args.seed, arc_checks=args.arc_checks,
            threads=args.threads,
        )
        payload = jsonio.lemma1_to_dict(rep)
        ok = rep.passed
    elif args.number == 2:
        frame = lemmas.verify_frame_identities()
        sweep = lemmas.sweep_lemma2(grid=args.grid, threads=args.threads)
        payload = jsonio.lemma2_to_dict(sweep)
        payload["frame"] = jsonio.frame_to_dict(frame)
        ok = sweep.passed and frame.passed
    else:
        d = SQRT3 * HOLE_RADIUS * args.d_frac
        rep = lemmas.verify_lemma3(trials=args.trials, d=d, rng_seed=args.seed)
        payload = jsonio.lemma3_to_dict(rep)
        ok = rep.passed
    _emit(payload, args.out)
    return 0 if ok else 1


def _load_points(args) -> list[Point2]:
    if getattr(args, "preset", None):
        if args.preset != "fig1-55":
            raise SystemExit(2)
        return config_builder.hard_55_configuration().points
    return jsonio.load_point_set(_read(args.infile))


def cmd_handicap_check(args) -> int:
    points = _load_points(args)
    res = interstitium.handicap_oracle(points, depth=args.depth, margin=args.margin)
    _emit(jsonio.handicap_to_dict(res), args.out)
    return 0 if res.decided else 1


def cmd_cover_solve(args) -> int:
    points = _load_points(args)
    budget = cover.SolveBudget(
        partitions=args.budget, restarts=args.restarts, iterations=args.iterations
    )
    sol = cover.solve_cover(points, budget=budget, rng_seed=args.seed)
    _emit(jsonio.solution_to_dict(sol), args.out)
    _write_svg(args.svg, svg.render_cover_solution(points, sol))
    return 0 if sol.covered else 1


def cmd_cover_removability(args) -> int:
    points = _load_points(args)
    budget = cover.SolveBudget(
        partitions=args.budget, restarts=args.restarts, iterations=args.iterations
    )
    indices = None
    if args.indices:
        indices = [int(t) for t in args.indices.split(",") if t]
    report = cover.removability_probe(
        points, budget=budget, rng_seed=args.seed, indices=indices
    )
    _emit({"removability": {str(k): v for k, v in report.items()}}, args.out)
    return 0


def cmd_translates_lattice(args) -> int:
    ts = interstitium.lattice_translate_set(args.n)
    _emit(jsonio.translate_set_to_dict(ts), args.out)
    return 0


def cmd_translates_certify(args) -> int:
    data = json.loads(_read(args.infile))
    if args.method == "triangles":
        # Rebuild exact coset coordinates when the set is a lattice H/n.
        n = data.get("n")
        ts = (
            interstitium.lattice_translate_set(n)
            if n
            else jsonio.translate_set_from_dict(data)
        )
        cert = interstitium.triangle_tiling_certificate(ts)
        _emit(jsonio.tiling_to_dict(cert), args.out)
        return 0 if cert.covered else 1
    ts = jsonio.translate_set_from_dict(data)
    cert = interstitium.certify_translate_cover(ts, margin=args.margin, depth=args.depth)
    _emit(jsonio.certificate_to_dict(cert), args.out)
    return 0 if cert.status == "covered" else 1


def cmd_translates_search(args) -> int:
    init = None
    if args.init_lattice:
        init = interstitium.lattice_translate_set(args.init_lattice)
    res = interstitium.search_translate_cover(
        args.k, budget=args.budget, rng_seed=args.seed, init=init
    )
    _emit(jsonio.search_to_dict(res), args.out)
    return 0


def cmd_render(args) -> int:
    text = _read(args.infile)
    if args.kind == "config":
        cfg = config_builder.configuration_from_json(text)
        content = svg.render_configuration(cfg)
    else:
        ts = jsonio.translate_set_from_dict(json.loads(text))
        content = svg.render_fundamental_domain(ts)
    Path(args.svg).write_text(content)
    _emit({"svg": args.svg}, None)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pc2",
        description="Workbench for the packing-constrained point covering game.",
    )
    p.add_argument("--threads", type=int, default=None, help="cap worker threads")
    sub = p.add_subparsers(dest="command", required=True)

    def add_out(sp):
        sp.add_argument("--out", default=None, help="also write the JSON result here")

    sp = sub.add_parser("bound", help="area lower bound on the winning set size")
    add_out(sp)
    sp.set_defaults(func=cmd_bound)

    cfg = sub.add_parser("config", help="hard configuration")
    cfg_sub = cfg.add_subparsers(dest="subcommand", required=True)
    sp = cfg_sub.add_parser("generate")
    sp.add_argument("--d-frac", type=float, default=1.0 - 1e-6,
                    help="lattice spacing as a fraction of the critical value")
    sp.add_argument("--pose", choices=["reference", "optimize"], default="reference")
    sp.add_argument("--angle-steps", type=int, default=720)
    sp.add_argument("--shift-steps", type=int, default=64)
    sp.add_argument("--svg", default=None)
    add_out(sp)
    sp.set_defaults(func=cmd_config_generate)
    sp = cfg_sub.add_parser("verify")
    sp.add_argument("--in", dest="infile", required=True)
    add_out(sp)
    sp.set_defaults(func=cmd_config_verify)

    lem = sub.add_parser("lemma", help="numerical lemma verification")
    lem_sub = lem.add_subparsers(dest="subcommand", required=True)
    sp = lem_sub.add_parser("verify")
    sp.add_argument("number", type=int, choices=[1, 2, 3])
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--arc-checks", type=int, default=10_000)
    sp.add_argument("--grid", type=int, default=200)
    sp.add_argument("--d-frac", type=float, default=0.99)
    sp.add_argument("--seed", type=int, default=0)
    add_out(sp)
    sp.set_defaults(func=cmd_lemma_verify)

    han = sub.add_parser("handicap", help="translate-only cover oracle")
    han_sub = han.add_subparsers(dest="subcommand", required=True)
    sp = han_sub.add_parser("check")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--in", dest="infile")
    group.add_argument("--preset", choices=["fig1-55"])
    sp.add_argument("--depth", type=int, default=24)
    sp.add_argument("--margin", type=float, default=1e-6)
    add_out(sp)
    sp.set_defaults(func=cmd_handicap_check)

    cov = sub.add_parser("cover", help="unrestricted cover solver")
    cov_sub = cov.add_subparsers(dest="subcommand", required=True)
    for name, fn in (("solve", cmd_cover_solve), ("removability", cmd_cover_removability)):
        sp = cov_sub.add_parser(name)
        group = sp.add_mutually_exclusive_group(required=True)
        group.add_argument("--in", dest="infile")
        group.add_argument("--preset", choices=["fig1-55"])
        sp.add_argument("--budget", type=int, default=1000, help="partition attempts")
        sp.add_argument("--restarts", type=int, default=32)
        sp.add_argument("--iterations", type=int, default=500)
        sp.add_argument("--seed", type=int, default=0)
        if name == "solve":
            sp.add_argument("--svg", default=None)
        else:
            sp.add_argument("--indices", default=None, help="comma-separated point indices")
        add_out(sp)
        sp.set_defaults(func=fn)

    tr = sub.add_parser("translates", help="interstitium translate coverings")
    tr_sub = tr.add_subparsers(dest="subcommand", required=True)
    sp = tr_sub.add_parser("lattice")
    sp.add_argument("--n", type=int, required=True)
    add_out(sp)
    sp.set_defaults(func=cmd_translates_lattice)
    sp = tr_sub.add_parser("certify")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--method", choices=["triangles", "boxes"], default="boxes")
    sp.add_argument("--margin", type=float, default=1e-6)
    sp.add_argument("--depth", type=int, default=24)
    add_out(sp)
    sp.set_defaults(func=cmd_translates_certify)
    sp = tr_sub.add_parser("search")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--budget", type=int, default=4000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--init-lattice", type=int, default=None,
                    help="seed the search from the H/n translate set")
    add_out(sp)
    sp.set_defaults(func=cmd_translates_search)

    sp = sub.add_parser("render", help="SVG rendering of stored results")
    sp.add_argument("--kind", choices=["config", "translates"], required=True)
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--svg", required=True)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("serve", help="run the HTTP game service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    sp.set_defaults(func=cmd_serve)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
