"""Command-line interface.

Subcommands: beam-split, avg-gain, se-vs-users, se-vs-elements, theorem1,
kmin, predict-rate, selftest.  Experiments write a CSV plus a JSON run
manifest; --config points at a flat key = value file overriding the default
scenario.  Exit codes: 0 success, 1 runtime error, 2 configuration error.
"""

import argparse
import os
import sys

import numpy as np

from . import numerics
from .experiments import (
    ConfigError,
    DEFAULT_SEED,
    Scenario,
    default_output_dir,
    exp_avg_gain,
    exp_beam_split,
    exp_se_vs_elements,
    exp_se_vs_users,
    exp_theorem1,
    parse_config_file,
    scenario_from_config,
    _theory_rho,
)
from .theory import k_min, predicted_throughput, success_probability_bound


def _int_list(text: str):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated ints: {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bsofdma",
                     description="Beam-split exploitation in IRS-aided OFDMA: "
                                 "simulators and analytic calculators")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="master seed (fixed default, not time-based)")
    parser.add_argument("--config", help="key = value scenario override file")
    parser.add_argument("--workers", type=int, default=1,
                        help="worker threads for Monte Carlo loops")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("beam-split", help="gain-vs-frequency profile per M")
    p.add_argument("--M", type=_int_list, default=[64, 256, 512])
    p.add_argument("--angles", type=int, default=2000)
    _out_flags(p, "beam_split")

    p = sub.add_parser("avg-gain", help="per-SC scheduled gain, three scenarios")
    _out_flags(p, "avg_gain")

    p = sub.add_parser("se-vs-users", help="SE vs K sweep")
    p.add_argument("--K", type=_int_list, default=[10, 50, 100, 500, 1000, 5000])
    _out_flags(p, "se_vs_users")

    p = sub.add_parser("se-vs-elements", help="SE vs M sweep")
    p.add_argument("--M", type=_int_list, default=[32, 64, 128, 256, 512])
    _out_flags(p, "se_vs_elements")

    p = sub.add_parser("theorem1", help="success-probability bound vs MC estimate")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--K", type=_int_list, default=[2000, 5000, 10000, 20000])
    p.add_argument("--trials", type=int, default=500)
    _out_flags(p, "theorem1")

    p = sub.add_parser("kmin", help="minimum user count for coverage guarantee")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)

    p = sub.add_parser("predict-rate", help="closed-form throughput prediction")
    p.add_argument("--K", type=int, required=True)

    sub.add_parser("selftest", help="run the built-in invariant checks")
    return parser


def _out_flags(p, stem):
    p.add_argument("--out", help=f"CSV output path (default {stem}.csv)")
    p.add_argument("--manifest", help="JSON manifest path (default <out>.manifest.json)")


def _emit(result, args, stem):
    out = args.out or os.path.join(default_output_dir(), f"{stem}.csv")
    manifest = args.manifest or out + ".manifest.json"
    result.write_csv(out)
    result.write_manifest(manifest)
    print(f"wrote {out} and {manifest}")


def _scenario(args) -> Scenario:
    scenario = Scenario(seed=args.seed)
    if args.config:
        scenario = scenario_from_config(parse_config_file(args.config),
                                        base=scenario)
        scenario = scenario.replace(seed=args.seed)
    return scenario


def _selftest() -> int:
    rng = np.random.default_rng(7)
    checks = []
    # closed-form array factor vs direct phasor sum
    ok = True
    for _ in range(100):
        m = int(rng.integers(1, 257))
        delta = float(rng.uniform(-2, 2))
        direct = abs(np.exp(-2j * np.pi * np.arange(m) * delta).sum()) ** 2
        val = numerics.dirichlet_gain(m, delta)
        if abs(val - direct) > 1e-9 * max(direct, 1.0):
            ok = False
    checks.append(("dirichlet vs direct summation", ok))
    # CDF/quantile round trip
    ps = np.linspace(0.05, 0.99, 20)
    ok = all(abs(numerics.product_normal_cdf(numerics.product_normal_quantile(p)) - p)
             < 1e-9 for p in ps)
    checks.append(("product-normal CDF round trip", ok))
    # scheduler beats alternatives on a small random matrix
    from .scheduling import GainMatrix, ScheduleDecision, schedule_max_rate, slot_throughput
    from .experiments import default_params
    params = default_params(m=8, n=4)
    g = GainMatrix(rng.random((3, 4)))
    best = slot_throughput(g, schedule_max_rate(g), params)
    ok = all(best >= slot_throughput(
        g, ScheduleDecision(np.array([a, b, c, d]) + 1), params) - 1e-12
        for a in range(3) for b in range(3) for c in range(3) for d in range(3))
    checks.append(("max-rate optimality", ok))

    failed = [name for name, ok in checks if not ok]
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return 1 if failed else 0


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        scenario = _scenario(args) if args.command not in ("selftest",) else None
        if args.command == "beam-split":
            p = scenario.params
            result = exp_beam_split(args.M, w=p.W, n_sc=p.N, fc=p.fc,
                                    n_angles=args.angles, seed=args.seed)
            _emit(result, args, "beam_split")
        elif args.command == "avg-gain":
            _emit(exp_avg_gain(scenario), args, "avg_gain")
        elif args.command == "se-vs-users":
            _emit(exp_se_vs_users(args.K, scenario, workers=args.workers),
                  args, "se_vs_users")
        elif args.command == "se-vs-elements":
            _emit(exp_se_vs_elements(args.M, scenario, workers=args.workers),
                  args, "se_vs_elements")
        elif args.command == "theorem1":
            _emit(exp_theorem1(args.eps, args.K, scenario, args.trials,
                               workers=args.workers), args, "theorem1")
        elif args.command == "kmin":
            p = scenario.params
            value = k_min(args.eps, args.delta, p.N, p.M, p.W, p.fc)
            bound = success_probability_bound(args.eps, p.N, value, p.M, p.W, p.fc)
            print(f"K_min = {value}  (eps={args.eps}, delta={args.delta}, "
                  f"N={p.N}, M={p.M}, W={p.W:g} Hz, fc={p.fc:g} Hz)")
            print(f"bound at K_min: {bound:.6f}")
        elif args.command == "predict-rate":
            p = scenario.params
            rho = _theory_rho(scenario)
            rate = predicted_throughput(args.K, p.M, p.N, p.W, rho,
                                        p.G_tx, p.G_rx, p.P, p.sigma2)
            print(f"predicted throughput: {rate:.6g} bit/s "
                  f"(SE {rate / p.W:.4f} bit/s/Hz, K={args.K}, M={p.M}, rho={rho:.4g})")
        elif args.command == "selftest":
            return _selftest()
        return 0
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
