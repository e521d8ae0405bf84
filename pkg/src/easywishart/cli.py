"""Command line entry point: ``easywishart <command> ...``.

Exit codes: 0 success, 1 failed check, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from pathlib import Path

from easywishart._validation import check_partition
from easywishart.classify import classification_report, easy_case_eligible, is_symmetric
from easywishart.easy_maps import save_matrix
from easywishart.estimators import build_block_map
from easywishart.free_poisson import (
    asymptotic_limit,
    compound_from_choi,
    compound_moments,
    free_bessel,
)
from easywishart.moments import is_multiplicative, spectral_atoms
from easywishart.partitions import enumerate_partitions, is_noncrossing, signature
from easywishart.tables import MomentTable, format_complex
from easywishart.wishart import WishartConfig, convergence_report

OUTPUT_DIR_ENV = "EASYWISHART_OUTPUT_DIR"


class CliError(Exception):
    pass


def _add_source(parser, need_n=True, default_N=2):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--pi", help="partition literal, e.g. ab/ba")
    group.add_argument("--map", dest="map_name", help="builtin map name")
    parser.add_argument("--N", type=int, default=default_N, help="base dimension for --pi")
    if need_n:
        parser.add_argument("--n", type=int, help="block size for --map")
    parser.add_argument("--twisted", action="store_true", help="use the signed partition map")


def _source(args):
    if args.pi is None and args.map_name is None:
        raise CliError("give --pi or --map")
    return build_block_map(args.pi, args.map_name, args.N, getattr(args, "n", None), args.twisted)


def _output_dir(explicit):
    path = Path(explicit or os.environ.get(OUTPUT_DIR_ENV) or ".")
    path.mkdir(parents=True, exist_ok=True)
    return path


def _fmt(z: complex, digits: int = 10) -> str:
    z = complex(z)
    re = round(z.real, digits) + 0.0
    im = round(z.imag, digits) + 0.0
    if im == 0:
        return f"{re:g}"
    return f"{re:g}{im:+g}i"


# ---------------------------------------------------------------- partitions

def cmd_partitions(args) -> int:
    rows = []
    for pi in enumerate_partitions(args.k, args.l, even_only=args.even):
        nc = is_noncrossing(pi)
        if args.noncrossing and not nc:
            continue
        square = pi.upper == pi.lower and pi.upper % 2 == 0 and pi.upper > 0
        sym = is_symmetric(pi) if square else False
        if args.symmetric and not sym:
            continue
        sig = signature(pi) if pi.is_even else None
        elig = easy_case_eligible(pi, 2)[0] if sym and pi.is_even else None
        rows.append({"partition": str(pi), "even": pi.is_even, "symmetric": sym,
                     "noncrossing": nc, "signature": sig, "eligible": elig})
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    elif args.format == "csv":
        print("partition,even,symmetric,noncrossing,signature,eligible")
        for r in rows:
            print(",".join("" if v is None else str(v) for v in r.values()))
    else:
        for r in rows:
            flags = [k for k in ("even", "symmetric", "noncrossing") if r[k]]
            extra = ""
            if r["signature"] is not None:
                extra += f" sign={r['signature']:+d}"
            if r["eligible"] is not None:
                extra += f" eligible={r['eligible']}"
            print(f"{r['partition']:<12} {' '.join(flags)}{extra}")
        print(f"{len(rows)} partitions")
    return 0


# ------------------------------------------------------------------ classify

def cmd_classify(args) -> int:
    pi = check_partition(args.partition)
    report = classification_report(pi, args.N)
    if args.format == "json":
        print(json.dumps(report, indent=2))
        return 0
    print(pi.picture())
    for key in ("partition", "even", "noncrossing", "signature", "symmetric"):
        print(f"{key}: {report[key]}")
    for comp in report.get("components", []):
        print(f"component {comp['kind']} legs={comp['legs']} counts={tuple(comp['counts'])}")
    if "eligibility" in report:
        for key, value in report["eligibility"].items():
            print(f"{key}: {value}")
    return 0


# ---------------------------------------------------------------------- choi

def cmd_choi(args) -> int:
    _, choi, _ = _source(args)
    if args.out:
        save_matrix(args.out, choi.entries, args.matrix_format)
        print(f"wrote {choi.entries.shape[0]}x{choi.entries.shape[1]} Choi matrix to {args.out}")
    else:
        for row in choi.entries:
            print(" ".join(_fmt(z) for z in row))
    return 0


# ---------------------------------------------------------------- check-mult

def cmd_check_mult(args) -> int:
    _, choi, _ = _source(args)
    report = is_multiplicative(choi, args.pmax)
    print(report.dumps() if args.format == "json" else report.summary())
    return 0 if report.passed else 1


# ------------------------------------------------------------------- predict

def _emit_table(label: str, table: MomentTable, fmt: str):
    if fmt == "pretty":
        print(f"# {label}")
        print("plain: " + ", ".join(_fmt(v) for v in table.plain()))
        for word, value in table.items():
            if word and set(word) != {"1"}:
                print(f"  {word}: {_fmt(value)}")


def cmd_predict(args) -> int:
    _, choi, pi = _source(args)
    m = args.m
    out: dict = {"n": choi.n, "m": m}
    limit = asymptotic_limit(choi, m, p_max=args.pmax)
    out["limit_m_w_tilde"] = limit
    out["limit_w_tilde"] = limit.scaled(1 / m)

    eligible = None
    if pi is not None and pi.is_even and pi.upper == pi.lower and pi.upper % 2 == 0:
        eligible = is_symmetric(pi) and easy_case_eligible(pi, max(args.N, 2))[0]
    if args.require_eligible and not eligible:
        raise CliError(f"{args.pi or args.map_name} is not in the easy case")
    mult = is_multiplicative(choi, args.pmax)
    out["multiplicative"] = mult.passed
    out["eligible"] = eligible
    if args.twisted:
        plain = build_block_map(pi, None, args.N)[1]
        out["matches_untwisted"] = limit.allclose(asymptotic_limit(plain, m, p_max=args.pmax), 1e-9)
    if mult.passed:
        out["compound_m_w_tilde"] = compound_from_choi(choi, m, p_max=args.pmax)
    if choi.is_self_adjoint(1e-12):
        out["base_measure"] = spectral_atoms(choi).scaled(m * choi.n)

    if args.format == "json":
        data = {}
        for key, value in out.items():
            if isinstance(value, MomentTable):
                data[key] = value.to_dict()
            elif key == "base_measure":
                data[key] = value.to_lines()
            else:
                data[key] = value
        print(json.dumps(data, indent=2))
    elif args.format == "csv":
        print("quantity,word,re,im")
        for key, value in out.items():
            if isinstance(value, MomentTable):
                for word, v in value.items():
                    print(f"{key},{word},{v.real!r},{v.imag!r}")
    else:
        print(f"n={choi.n} m={m} multiplicative={mult.passed} eligible={eligible}")
        if "matches_untwisted" in out:
            print(f"twisted limit equals untwisted limit: {out['matches_untwisted']}")
        _emit_table("limit moments of W~", out["limit_w_tilde"], "pretty")
        _emit_table("limit moments of m*W~", limit, "pretty")
        if "compound_m_w_tilde" in out:
            _emit_table("compound free Poisson route, m*W~", out["compound_m_w_tilde"], "pretty")
        if "base_measure" in out:
            print("# base measure mn*rho (weight,re,im)")
            for line in out["base_measure"].to_lines():
                print("  " + line)
    return 0


# ------------------------------------------------------------------ simulate

SIM_KEYS = {
    "d": int, "n": int, "m": int, "trials": int, "seed": int, "p_max": int, "N": int,
    "words": str, "d_values": str, "map": str, "pi": str, "twisted": str, "scale": str,
}


def read_config(path) -> dict:
    """Flat ``key = value`` file (or a JSON object) with WishartConfig field names."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        raw = json.loads(text)
    else:
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        parser.read_string("[simulation]\n" + text)
        raw = dict(parser["simulation"])
    unknown = set(raw) - set(SIM_KEYS)
    if unknown:
        raise CliError(f"unknown config keys: {', '.join(sorted(unknown))}")
    out = {}
    for key, value in raw.items():
        if SIM_KEYS[key] is int:
            out[key] = int(value)
        elif isinstance(value, list):
            out[key] = ",".join(str(v) for v in value)
        else:
            out[key] = str(value)
    return out


def _split(text: str) -> list[str]:
    return [t for t in text.replace(" ", ",").split(",") if t]


def _reference_prediction(map_name, choi, m: int, p_max: int) -> MomentTable:
    """Compound-law prediction for ``m W~`` that a simulation can be tested against.

    For the bessel map this is the free Bessel law ``beta^n_{n/m}`` with the
    extra atom at 0 of weight ``1 - m/n``; otherwise the compound route.
    """
    if map_name == "bessel":
        n = choi.n
        beta = compound_moments(free_bessel(n, n / m), p_max)
        weights = {w: (v * m / n if w else v) for w, v in beta.items()}
        return MomentTable(p_max, weights).scaled(m)
    return compound_from_choi(choi, m, p_max=p_max)


def cmd_simulate(args) -> int:
    cfg = read_config(args.config) if args.config else {}
    for key in ("d", "n", "m", "trials", "seed", "p_max", "N", "words", "d_values", "scale"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if args.pi is not None:
        cfg["pi"] = args.pi
        cfg.pop("map", None)
    if args.map_name is not None:
        cfg["map"] = args.map_name
        cfg.pop("pi", None)
    if args.twisted:
        cfg["twisted"] = "true"
    if ("pi" in cfg) == ("map" in cfg):
        raise CliError("give exactly one of a partition (pi) or a builtin map (map)")
    twisted = str(cfg.get("twisted", "false")).lower() in ("1", "true", "yes")
    phi, choi, _ = build_block_map(cfg.get("pi"), cfg.get("map"), cfg.get("N", 2),
                                   cfg.get("n"), twisted)
    m = cfg.get("m", 1)
    d_values = [int(x) for x in _split(str(cfg.get("d_values", "")))] or [cfg.get("d", 100)]
    words = tuple(_split(cfg["words"])) if cfg.get("words") else None
    config = WishartConfig(
        d=d_values[-1], n=phi.n, m=m, trials=cfg.get("trials", 200), seed=cfg.get("seed", 0),
        p_max=cfg.get("p_max", max((len(w) for w in words), default=4) if words else 4),
        words=words,
    )
    p_max = max(len(w) for w in config.exponent_words())
    scale = cfg.get("scale", "mw")
    if scale not in ("mw", "w"):
        raise CliError("scale must be 'mw' or 'w'")
    factor = 1.0 if scale == "mw" else 1.0 / m
    exact = asymptotic_limit(choi, m, p_max=p_max).scaled(factor)
    rescale = m * factor
    report = convergence_report(config, d_values, phi, exact, rescale)

    out_dir = _output_dir(args.out_dir)
    stem = args.name
    (out_dir / f"{stem}.csv").write_text(report.to_csv())
    summary = report.to_dict()
    summary["statistic"] = "m*W~" if scale == "mw" else "W~"

    status = 0
    if args.assert_mismatch:
        ref = _reference_prediction(cfg.get("map"), choi, m, p_max).scaled(factor)
        mismatch = {}
        for row in report.final_rows():
            gap = abs(row.mean - ref[row.word])
            mismatch[row.word] = {"reference": format_complex(ref[row.word]),
                                  "gap_in_se": gap / row.se if row.se else float("inf")}
        summary["reference_mismatch"] = mismatch
        separated = [w for w, v in mismatch.items() if v["gap_in_se"] >= 5]
        if not separated or not report.all_within():
            status = 1
        print(f"words separated from the compound prediction by >= 5 SE: {separated or 'none'}")
    if args.assert_ and not report.all_within():
        status = 1
    (out_dir / f"{stem}.json").write_text(json.dumps(summary, indent=2))

    for row in report.final_rows():
        flag = "ok" if row.within() else "OUT"
        print(f"d={row.d} {row.word:<6} mean={_fmt(row.mean, 4):<12} se={row.se:.4f} "
              f"exact={_fmt(row.exact, 6):<12} {flag}")
    print(f"wrote {out_dir / (stem + '.csv')}")
    return status


# ---------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="easywishart",
        description="Limit laws and simulations for block-modified Wishart matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partitions", help="list partitions with their flags")
    p.add_argument("k", type=int)
    p.add_argument("l", type=int)
    p.add_argument("--even", action="store_true")
    p.add_argument("--noncrossing", action="store_true")
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--format", choices=("pretty", "csv", "json"), default="pretty")
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("classify", help="symmetric components and eligibility")
    p.add_argument("partition")
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--format", choices=("pretty", "json"), default="pretty")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("choi", help="print or dump a Choi matrix")
    _add_source(p)
    p.add_argument("--out")
    p.add_argument("--matrix-format", choices=("csv", "bin"), default="csv")
    p.set_defaults(func=cmd_choi)

    p = sub.add_parser("check-mult", help="multiplicativity check")
    _add_source(p)
    p.add_argument("--pmax", type=int, default=4)
    p.add_argument("--format", choices=("pretty", "json"), default="pretty")
    p.set_defaults(func=cmd_check_mult)

    p = sub.add_parser("predict", help="exact limit moments")
    _add_source(p)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--pmax", type=int, default=4)
    p.add_argument("--require-eligible", action="store_true")
    p.add_argument("--format", choices=("pretty", "csv", "json"), default="pretty")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("simulate", help="Monte Carlo check against the exact limit")
    p.add_argument("--config")
    _add_source(p, need_n=False, default_N=None)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--d-values", dest="d_values")
    p.add_argument("--m", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--p-max", dest="p_max", type=int)
    p.add_argument("--words")
    p.add_argument("--scale", choices=("mw", "w"))
    p.add_argument("--out-dir")
    p.add_argument("--name", default="simulation")
    p.add_argument("--assert", dest="assert_", action="store_true",
                   help="exit 1 if any word misses max(3 SE, 5%%) at the largest d")
    p.add_argument("--assert-mismatch", action="store_true",
                   help="exit 1 unless the compound prediction is off by >= 5 SE")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (CliError, ValueError, TypeError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
