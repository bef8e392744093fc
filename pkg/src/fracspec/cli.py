"""Command-line interface.

Subcommands: gen (synthesize a seeded signal), transform (apply a plan),
denoise (train and estimate on one instance), benchmark (full sweep),
verify (property suite), dump-operator (export an operator matrix).

Exit codes: 0 success, 1 invariant failure, 2 configuration error,
3 coupling-margin (principal logarithm) violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import io as fio
from .errors import ConfigError, FracspecError, MarginViolationError
from .harness import BenchmarkConfig, GraphSpec, add_awgn, run_benchmark, synth_signal
from .operators import dfrft_matrix, eigendecompose, gft_matrix, graph_frft
from .transforms import TimeVertexSignal, TransformContext, forward, inverse
from .wiener import TrainConfig, lambda_grid_search, denoise, train
from .properties import verify_properties

__all__ = ["main"]


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err


def _context_from_config(cfg: dict) -> TransformContext:
    try:
        spatial = GraphSpec.from_dict(cfg["spatial"]).build()
        temporal = GraphSpec.from_dict(cfg["temporal"]).build()
    except KeyError as err:
        raise ConfigError(f"config is missing the {err} graph spec") from err
    return TransformContext(spatial, temporal)


def _cmd_gen(args) -> int:
    cfg = _load_config(args.config)
    spatial = GraphSpec.from_dict(cfg.get("spatial", {"kind": "knn_random", "n": 30, "k": 4, "seed": 7}))
    n2 = int(cfg.get("n2", 10))
    bandwidth = float(cfg.get("bandwidth", 0.3))
    sigma = float(cfg.get("sigma", 0.0))
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    out = args.out or "."
    os.makedirs(out, exist_ok=True)

    g1 = spatial.build()
    x = synth_signal(g1, n2, bandwidth=bandwidth, seed=seed)
    meta = {"bandwidth": bandwidth, "seed": seed, "spatial": cfg.get("spatial"), "sigma": sigma}
    fio.write_signal(x.as_real(), os.path.join(out, "clean.csv"), meta=meta)
    if sigma > 0:
        y = add_awgn(x, sigma, seed=seed + 1)
        fio.write_signal(y.as_real(), os.path.join(out, "noisy.csv"), meta=meta)
    print(f"wrote {out}/clean.csv" + (f" and {out}/noisy.csv" if sigma > 0 else ""))
    return 0


def _cmd_transform(args) -> int:
    cfg = _load_config(args.config)
    ctx = _context_from_config(cfg)
    family = cfg.get("family", "gcgfrft")
    orders = cfg.get("orders", [0.5, 0.5])
    lam = cfg.get("lambda")
    plan = ctx.plan(family, orders, lam=lam)
    data, _ = fio.read_signal(args.signal)
    sig = TimeVertexSignal.from_array(data)
    result = inverse(plan, sig) if args.inverse else forward(plan, sig)
    out = args.out or "transformed.csv"
    fio.write_signal(result.data, out,
                     meta={"family": family, "orders": list(np.atleast_1d(orders)),
                           "lambda": lam, "direction": "inverse" if args.inverse else "forward"})
    print(f"wrote {out}")
    return 0


def _cmd_denoise(args) -> int:
    cfg = _load_config(args.config)
    ctx = _context_from_config(cfg)
    family = cfg.get("family", "gcgfrft")
    train_cfg = TrainConfig(**cfg.get("train", {}))
    y = TimeVertexSignal.from_array(fio.read_signal(args.noisy)[0])
    x = TimeVertexSignal.from_array(fio.read_signal(args.clean)[0])
    out = args.out or "."
    os.makedirs(out, exist_ok=True)

    if family == "gcgfrft" and "lambda" not in cfg:
        grid = cfg.get("lambda_grid", [round(0.1 * i, 1) for i in range(11)])
        best_lam, params, table = lambda_grid_search(y, x, grid, train_cfg, ctx)
        with open(os.path.join(out, "grid.csv"), "w") as fh:
            fh.write("lambda,loss,alpha,beta,status\n")
            for row in table:
                if row.params is None:
                    fh.write(f"{row.lam:g},,,,{row.error}\n")
                else:
                    fh.write(f"{row.lam:g},{row.loss:.17g},"
                             f"{row.params.alpha:.17g},{row.params.beta:.17g},ok\n")
        _, trace = train(y, x, best_lam, train_cfg, ctx, family=family)
    else:
        lam = cfg.get("lambda")
        params, trace = train(y, x, lam, train_cfg, ctx, family=family)

    est = denoise(y, params, ctx, family=family)
    fio.write_signal(est.data, os.path.join(out, "estimate.csv"),
                     meta={"family": family, "lambda": params.lam})
    fio.write_params_json(params, os.path.join(out, "params.json"))
    fio.write_trace_csv(trace, os.path.join(out, "trace.csv"))
    print(f"wrote {out}/estimate.csv, {out}/params.json, {out}/trace.csv")
    return 0


def _cmd_benchmark(args) -> int:
    cfg = _load_config(args.config)
    kwargs = {}
    if "spatial" in cfg:
        kwargs["spatial"] = GraphSpec.from_dict(cfg["spatial"])
    if "temporal" in cfg:
        kwargs["temporal"] = GraphSpec.from_dict(cfg["temporal"])
    for key in ("sigma_list", "lambda_grid", "families", "seeds"):
        if key in cfg:
            kwargs[key] = tuple(cfg[key])
    if "train" in cfg:
        kwargs["train"] = TrainConfig(**cfg["train"])
    for key in ("bandwidth", "persist_estimates"):
        if key in cfg:
            kwargs[key] = cfg[key]
    if args.threads is not None:
        kwargs["threads"] = args.threads
    elif "threads" in cfg:
        kwargs["threads"] = int(cfg["threads"])
    kwargs["output_dir"] = args.out or cfg.get("output_dir", "benchmark_out")
    try:
        bench = BenchmarkConfig(**kwargs)
    except TypeError as err:
        raise ConfigError(str(err)) from err
    report = run_benchmark(bench)
    bad = [r for r in report.rows if r.status != "ok"]
    print(f"wrote {kwargs['output_dir']}/report.csv ({len(report.rows)} rows, "
          f"{len(bad)} failed)")
    return 0


def _cmd_verify(args) -> int:
    report = verify_properties(fault_injection=args.fault)
    text = report.format()
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return 0 if report.all_passed else 1


def _cmd_dump_operator(args) -> int:
    cfg = _load_config(args.config)
    kind = cfg.get("kind", "dfrft")
    if kind == "dfrft":
        op = dfrft_matrix(int(cfg["n"]), float(cfg.get("order", 1.0)),
                          mode=cfg.get("mode", "candan"))
        matrix = op.matrix
    elif kind in ("gft", "graph_frft"):
        basis = eigendecompose(GraphSpec.from_dict(cfg["graph"]).build())
        matrix = gft_matrix(basis).matrix if kind == "gft" \
            else graph_frft(basis, float(cfg.get("order", 1.0))).matrix
    elif kind == "geodesic_temporal":
        ctx = _context_from_config({"spatial": cfg["temporal"], "temporal": cfg["temporal"]})
        plan = ctx.plan("gcgfrft", (0.0, float(cfg.get("order", 0.5))),
                        lam=float(cfg.get("lambda", 0.5)))
        matrix = plan.col_op.matrix
    else:
        raise ConfigError(f"unknown operator kind {kind!r}")
    out = args.out or "operator.csv"
    fio.write_operator_csv(matrix, out)
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracspec",
        description="Fractional spectral transforms on product graphs and learnable spectral denoising.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", help="output file or directory")
        p.add_argument("--threads", type=int, help="worker cap (also FRFT_THREADS)")

    p = sub.add_parser("gen", help="synthesize a seeded band-limited signal")
    common(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("transform", help="apply a transform plan to a signal file")
    common(p)
    p.add_argument("--signal", required=True, help="input signal CSV")
    p.add_argument("--inverse", action="store_true", help="apply the inverse transform")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("denoise", help="train the spectral filter on one instance")
    common(p)
    p.add_argument("--noisy", required=True, help="noisy observation CSV")
    p.add_argument("--clean", required=True, help="clean reference CSV")
    p.set_defaults(func=_cmd_denoise)

    p = sub.add_parser("benchmark", help="run the full comparison sweep")
    common(p)
    p.set_defaults(func=_cmd_benchmark)

    p = sub.add_parser("verify", help="run the property suite")
    common(p)
    p.add_argument("--fault", action="store_true",
                   help="inject a 1e-3 operator perturbation (the suite must fail)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("dump-operator", help="export an operator as interleaved re/im CSV")
    common(p)
    p.set_defaults(func=_cmd_dump_operator)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2
    except MarginViolationError as err:
        print(f"coupling margin violated: {err}", file=sys.stderr)
        return 3
    except (FracspecError, ValueError, KeyError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
