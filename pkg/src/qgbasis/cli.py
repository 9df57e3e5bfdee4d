"""Command-line entry point.

Every subcommand prints one JSON object per line (``dual-growth`` prints
CSV).  Rationals are always strings ``p`` or ``p/q``.  Exit status: 0 on
success, 1 when a checked contract fails (the witness is printed first),
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections.abc import Iterable, Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from pathlib import Path

from . import direct_sum, dual, greedy, lindenstrauss, theorem
from .vectors import format_rational, parse_rational, vec_from_obj, vec_to_obj

MAX_INDEX_CAP = 10_000
QG_BOUND = Fraction(3)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    trials: int = 0
    workers: int = 1
    options: dict = field(default_factory=dict)


def _emit(out, record: Mapping) -> None:
    out.write(json.dumps(record, separators=(",", ":")) + "\n")


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _read_vec(path: str, flag: str):
    try:
        return vec_from_obj(_read_json(path))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def _index_list(text: str, flag: str) -> list[int]:
    items = [t for t in text.replace(" ", "").split(",") if t]
    try:
        out = [int(t) for t in items]
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated positive integers, got {text!r}")
    if any(i < 1 for i in out):
        raise UsageError(f"{flag}: indices must be >= 1")
    return out


def _require(cond: bool, flag: str, msg: str) -> None:
    if not cond:
        raise UsageError(f"{flag}: {msg}")


def _pool_map(fn, jobs: list, workers: int) -> list:
    """Ordered map; results are identical for any worker count."""
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def _chunks(n: int, size: int) -> list[tuple[int, int]]:
    return [(s, min(s + size, n)) for s in range(0, n, size)]


def _qg_record(rep: greedy.QGReport) -> dict:
    return {
        "ratio": format_rational(rep.ratio),
        "bound": format_rational(rep.bound),
        "coeffs": vec_to_obj(rep.coeffs),
        "m": rep.m,
        "selection": rep.selection.sorted(),
        "canonical": rep.selection.canonical,
        "evaluated": rep.evaluated,
    }


# --- subcommands -----------------------------------------------------------


def cmd_gen_basis(cfg: RunConfig, out) -> int:
    _emit(out, vec_to_obj(lindenstrauss.basis_vector(cfg.options["i"])))
    return 0


def cmd_gen_dual(cfg: RunConfig, out) -> int:
    _emit(out, vec_to_obj(lindenstrauss.dual_vector(cfg.options["i"])))
    return 0


def cmd_expand(cfg: RunConfig, out) -> int:
    _emit(out, vec_to_obj(lindenstrauss.expand(_read_vec(cfg.options["coeffs"], "--coeffs"))))
    return 0


def cmd_analyze(cfg: RunConfig, out) -> int:
    vec = _read_vec(cfg.options["vec"], "--vec")
    try:
        coeffs = lindenstrauss.analyze(vec, cfg.options["n"])
    except lindenstrauss.NotInSpan as exc:
        raise UsageError(f"--vec: NotInSpan: {exc}") from exc
    _emit(out, vec_to_obj(coeffs))
    return 0


def cmd_greedy(cfg: RunConfig, out) -> int:
    a = _read_vec(cfg.options["coeffs"], "--coeffs")
    m = cfg.options["m"]
    _require(bool(a), "--coeffs", "coefficient map is empty")
    _require(0 <= m <= len(a), "--m", f"must lie in 0..{len(a)}")
    canonical, everything = greedy.greedy_sets(a, m)
    if cfg.options.get("all_selections"):
        if everything is None:
            raise UsageError(f"--all-selections: more than {greedy.SELECTION_CAP} valid selections")
        selections = everything
    else:
        selections = [canonical]
    total = lindenstrauss.expansion_norm(a)
    status = 0
    for sel in selections:
        g = greedy.greedy_operator(a, m, sel)
        ratio = lindenstrauss.expansion_norm(g) / total
        _emit(out, {
            "m": m,
            "selection": sel.sorted(),
            "canonical": sel.canonical,
            "result": vec_to_obj(g),
            "ratio": format_rational(ratio),
        })
        if ratio > QG_BOUND:
            status = 1
    return status


def _search_chunk(job) -> greedy.QGReport | None:
    config, start, stop = job
    return greedy.merge_reports(
        greedy.worst_greedy_ratio(a, config.cap)
        for a in islice(greedy.search_candidates(config), start, stop)
    )


def _search_config(path: str) -> greedy.SearchConfig:
    raw = _read_json(path)
    if not isinstance(raw, dict):
        raise UsageError("--config: expected a JSON object")
    known = {"max_index", "support_size", "grid", "trials", "seed", "exhaustive", "cap"}
    extra = set(raw) - known
    if extra:
        raise UsageError(f"--config: unknown keys {sorted(extra)}")
    kw = dict(raw)
    if "grid" in kw:
        try:
            kw["grid"] = tuple(parse_rational(str(g)) for g in kw["grid"])
        except ValueError as exc:
            raise UsageError(f"--config: grid: {exc}") from exc
    cfg = greedy.SearchConfig(**kw)
    if not 1 <= cfg.max_index <= MAX_INDEX_CAP:
        raise UsageError(f"--config: max_index must lie in 1..{MAX_INDEX_CAP}")
    if cfg.support_size < 1:
        raise UsageError("--config: support_size must be >= 1")
    if not any(cfg.grid):
        raise UsageError("--config: grid needs a nonzero value")
    return cfg


def cmd_qg_search(cfg: RunConfig, out) -> int:
    config = _search_config(cfg.options["config"])
    if cfg.options.get("seed") is not None:
        config = greedy.SearchConfig(**{**config.__dict__, "seed": cfg.options["seed"]})
    total = sum(1 for _ in greedy.search_candidates(config)) if config.exhaustive else config.trials
    jobs = [(config, s, e) for s, e in _chunks(total, 500)]
    rep = greedy.merge_reports(r for r in _pool_map(_search_chunk, jobs, cfg.workers) if r)
    if rep is None:
        raise UsageError("--config: empty search space")
    record = {"kind": "qg-search", "candidates": total, **_qg_record(rep)}
    _emit(out, record)
    return 1 if rep.ratio > QG_BOUND else 0


def cmd_ucc(cfg: RunConfig, out) -> int:
    m = cfg.options["m"]
    _require(1 <= m <= greedy.UCC_CAP, "--m", f"must lie in 1..{greedy.UCC_CAP}")
    rep = greedy.ucc_constants(m)
    _emit(out, {
        "m": rep.m,
        "c_min": format_rational(rep.c_min),
        "C_max": format_rational(rep.C_max),
        "min_signs": list(rep.min_signs),
        "max_signs": list(rep.max_signs),
    })
    return 0


def cmd_conditionality(cfg: RunConfig, out) -> int:
    n = cfg.options["n"]
    _require(1 <= n <= dual.N_MAX_CAP, "--n", f"must lie in 1..{dual.N_MAX_CAP}")
    w = greedy.conditionality_witness(n)
    _emit(out, {
        "n": n,
        "terms": len(w.signs),
        "numerator": format_rational(w.numerator),
        "denominator": format_rational(w.denominator),
        "ratio": format_rational(w.ratio),
    })
    return 0


def cmd_trace(cfg: RunConfig, out) -> int:
    s1 = _index_list(cfg.options["s1"], "--s1")
    s2 = _index_list(cfg.options["s2"], "--s2")
    alpha = _read_vec(cfg.options["alpha"], "--alpha")
    inst = theorem.Instance.build(s1, s2, alpha)
    try:
        rep = theorem.trace_chain(inst)
    except theorem.PreconditionViolated as exc:
        raise UsageError(f"--alpha/--s1/--s2: PreconditionViolated: {exc}") from exc
    record = rep.to_dict()
    if cfg.options.get("emit_certificate"):
        Path(cfg.options["emit_certificate"]).write_text(
            json.dumps(record, indent=1, sort_keys=True) + "\n"
        )
    _emit(out, record)
    return 0 if rep.all_hold else 1


def _verify_chunk(job) -> list[dict]:
    config, start, stop = job
    rows = []
    for t in range(start, stop):
        rep = theorem.verify_trial(config, t)
        main = rep.final_checks["main"]
        row = {
            "trial": t,
            "k": rep.k,
            "lhs": format_rational(main.lhs),
            "rhs": format_rational(main.rhs),
            "all_hold": rep.all_hold,
        }
        if not rep.all_hold:
            row["failures"] = rep.failures()
            row["certificate"] = rep.to_dict()
        rows.append(row)
    return rows


def cmd_verify_theorem(cfg: RunConfig, out) -> int:
    trials, max_index = cfg.trials, cfg.options["max_index"]
    _require(trials >= 0, "--trials", "must be >= 0")
    _require(1 <= max_index <= MAX_INDEX_CAP, "--max-index", f"must lie in 1..{MAX_INDEX_CAP}")
    config = theorem.InstanceConfig(max_index=max_index, seed=cfg.seed)
    jobs = [(config, s, e) for s, e in _chunks(trials, 2000)]
    rows = [r for chunk in _pool_map(_verify_chunk, jobs, cfg.workers) for r in chunk]
    for r in rows:
        if cfg.options.get("per_trial") or not r["all_hold"]:
            _emit(out, r)
    summary = report_summary(rows)
    _emit(out, {"kind": "summary", "seed": cfg.seed, "max_index": max_index, **summary})
    return 0 if summary["failures"] == 0 else 1


def cmd_ds_norm(cfg: RunConfig, out) -> int:
    y = _read_dsvec(cfg.options["vec"])
    _emit(out, {"norm": format_rational(direct_sum.ds_norm(y))})
    return 0


def cmd_ds_greedy(cfg: RunConfig, out) -> int:
    y = _read_dsvec(cfg.options["vec"])
    m = cfg.options["m"]
    _require(bool(y), "--vec", "vector is empty")
    _require(0 <= m <= y.support_size, "--m", f"must lie in 0..{y.support_size}")
    sel, _ = direct_sum.ds_greedy_sets(y, m, cap=0)
    g = direct_sum.ds_greedy(y, m, sel)
    ratio = direct_sum.ds_norm(g) / direct_sum.ds_norm(y)
    _emit(out, {
        "m": m,
        "result": g.to_obj(),
        "partition": {str(k): v for k, v in direct_sum.block_partition(sel).items()},
        "ratio": format_rational(ratio),
    })
    return 1 if ratio > QG_BOUND else 0


def _read_dsvec(path: str) -> direct_sum.DSVec:
    try:
        return direct_sum.DSVec.from_obj(_read_json(path))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--vec: {exc}") from exc


GROWTH_COLUMNS = ["n", "M", "alt_norm", "witness_norm", "pairing", "lower_bound"]


def growth_csv(rows: Iterable[dual.GrowthRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    exact = GROWTH_COLUMNS[2:]
    writer.writerow(GROWTH_COLUMNS + [f"{c}_approx" for c in exact])
    for row in rows:
        rec = row.as_record()
        approx = [f"{float(parse_rational(rec[c])):.6g}" for c in exact]
        writer.writerow([rec[c] for c in GROWTH_COLUMNS] + approx)
    return buf.getvalue()


def cmd_dual_growth(cfg: RunConfig, out) -> int:
    n_max = cfg.options["n_max"]
    _require(1 <= n_max <= dual.N_MAX_CAP, "--n-max", f"must lie in 1..{dual.N_MAX_CAP}")
    rows = dual.growth_table(n_max)
    text = growth_csv(rows)
    if cfg.options.get("csv"):
        Path(cfg.options["csv"]).write_text(text)
    out.write(text)
    bad = [r.n for r in rows if r.alt_norm != 1 or r.lower_bound < Fraction(r.n, 2)]
    return 1 if bad else 0


def report_summary(stream: Iterable[Mapping]) -> dict:
    """Counts and extremes of a record stream, with the records attaining them.

    ``max_ratio`` tracks records carrying ``ratio``; theorem rows (``lhs``,
    ``rhs``) are tracked as ``max_rhs_over_lhs``, which is at most 1.

    Ties keep the first record, so equal streams give equal summaries.
    """
    count = failures = 0
    max_ratio = None
    ratio_witness = None
    max_tight = None
    tight_witness = None
    max_k = None
    k_witness = None
    for rec in stream:
        count += 1
        if rec.get("all_hold") is False:
            failures += 1
        if "ratio" in rec:
            r = parse_rational(rec["ratio"])
            if max_ratio is None or r > max_ratio:
                max_ratio, ratio_witness = r, rec
        elif "lhs" in rec and "rhs" in rec and parse_rational(rec["lhs"]):
            r = parse_rational(rec["rhs"]) / parse_rational(rec["lhs"])
            if max_tight is None or r > max_tight:
                max_tight, tight_witness = r, rec
        if "k" in rec and (max_k is None or rec["k"] > max_k):
            max_k, k_witness = rec["k"], rec
    out = {"count": count, "failures": failures}
    if max_ratio is not None:
        out["max_ratio"] = format_rational(max_ratio)
        out["max_ratio_witness"] = ratio_witness
    if max_tight is not None:
        out["max_rhs_over_lhs"] = format_rational(max_tight)
        out["max_rhs_over_lhs_witness"] = tight_witness
    if max_k is not None:
        out["max_k"] = max_k
        out["max_k_witness"] = k_witness
    return out


COMMANDS = {
    "gen-basis": cmd_gen_basis,
    "gen-dual": cmd_gen_dual,
    "expand": cmd_expand,
    "analyze": cmd_analyze,
    "greedy": cmd_greedy,
    "qg-search": cmd_qg_search,
    "ucc": cmd_ucc,
    "conditionality": cmd_conditionality,
    "trace": cmd_trace,
    "verify-theorem": cmd_verify_theorem,
    "ds-norm": cmd_ds_norm,
    "ds-greedy": cmd_ds_greedy,
    "dual-growth": cmd_dual_growth,
}


def _positive(text: str) -> int:
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {val}")
    return val


def _seed(text: str) -> int:
    val = int(text)
    if not 0 <= val < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return val


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qgbasis", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    for name in ("gen-basis", "gen-dual"):
        s = sub.add_parser(name)
        s.add_argument("--i", type=_positive, required=True)
    s = sub.add_parser("expand")
    s.add_argument("--coeffs", required=True)
    s = sub.add_parser("analyze")
    s.add_argument("--vec", required=True)
    s.add_argument("--n", type=_positive, required=True)
    s = sub.add_parser("greedy")
    s.add_argument("--coeffs", required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--all-selections", action="store_true")
    s = sub.add_parser("qg-search")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=_seed, default=None, help="overrides the config's seed")
    s.add_argument("--workers", type=_positive, default=1)
    s = sub.add_parser("ucc")
    s.add_argument("--m", type=int, required=True)
    s = sub.add_parser("conditionality")
    s.add_argument("--n", type=int, required=True)
    s = sub.add_parser("trace")
    s.add_argument("--s1", required=True)
    s.add_argument("--s2", required=True)
    s.add_argument("--alpha", required=True)
    s.add_argument("--emit-certificate", metavar="PATH")
    s = sub.add_parser("verify-theorem")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--max-index", type=int, default=60)
    s.add_argument("--workers", type=_positive, default=1)
    s.add_argument("--per-trial", action="store_true")
    for name in ("ds-norm", "ds-greedy"):
        s = sub.add_parser(name)
        s.add_argument("--vec", required=True)
        if name == "ds-greedy":
            s.add_argument("--m", type=int, required=True)
    s = sub.add_parser("dual-growth")
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--csv", metavar="PATH")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    opts = {k: v for k, v in vars(args).items() if k not in ("command", "workers", "trials")}
    return RunConfig(
        command=args.command,
        seed=getattr(args, "seed", None) or 0,
        trials=getattr(args, "trials", 0),
        workers=getattr(args, "workers", 1),
        options=opts,
    )


def run(config: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return COMMANDS[config.command](config, out)
    except UsageError as exc:
        err.write(f"qgbasis {config.command}: error: {exc}\n")
        return 2


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
