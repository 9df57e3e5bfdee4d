"""Checker for 3||x + y|| >= ||x|| together with a replay of its proof.

Given disjoint ``S1``, ``S2`` and coefficients with
``min_{S1} |a_i| >= max_{S2} |a_i|``, put ``x = sum_{S1} a_i x_i`` and
``y = sum_{S2} a_i x_i``.  :func:`trace_chain` rebuilds the sets used in
the argument:

* ``A0``, ``B0``, ``C0``: coordinates where ``sum_{S1} x_i`` equals
  1, -1/2 and 1/2;
* ``W_l = S2 & B_{l-1}``, and the children of ``W_l`` split into those
  inside ``A0`` (``A_l``) and outside it (``B_l``).

This uses ``x_i(j) = 1`` iff ``i == j``, so ``W_l`` needs no scan of S2.
Every intermediate inequality is stored with both sides as exact
rationals, which makes a report usable as a certificate.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .greedy import DYADIC_GRID, trial_rng
from .lindenstrauss import common_denominator, scaled_coeffs, scaled_expansion
from .vectors import CoeffMap, format_rational

FINAL_LABELS = ("ww", "majorineq", "MNw", "MN", "L", "main")


class PreconditionViolated(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    s1: frozenset[int]
    s2: frozenset[int]
    alpha: CoeffMap

    @classmethod
    def build(cls, s1: Iterable[int], s2: Iterable[int], alpha: Mapping) -> Instance:
        """Normalize: zero coefficients are dropped, and their indices with them."""
        alpha = CoeffMap(alpha)
        return cls(
            frozenset(i for i in s1 if i in alpha),
            frozenset(i for i in s2 if i in alpha),
            alpha,
        )

    def validate(self) -> None:
        if self.s1 & self.s2:
            raise PreconditionViolated(f"S1 and S2 overlap at {sorted(self.s1 & self.s2)}")
        stray = set(self.alpha) - self.s1 - self.s2
        if stray:
            raise PreconditionViolated(f"coefficients given outside S1 | S2: {sorted(stray)}")
        missing = (self.s1 | self.s2) - set(self.alpha)
        if missing:
            raise PreconditionViolated(f"indices without coefficients: {sorted(missing)}")
        if self.s1 and self.s2:
            lo = min(abs(self.alpha[i]) for i in self.s1)
            hi = max(abs(self.alpha[i]) for i in self.s2)
            if lo < hi:
                raise PreconditionViolated(
                    f"min |a| over S1 is {lo}, below max |a| over S2 ({hi})"
                )

    def to_dict(self) -> dict:
        return {
            "s1": sorted(self.s1),
            "s2": sorted(self.s2),
            "alpha": {str(k): format_rational(v) for k, v in self.alpha.items()},
        }


@dataclass(frozen=True)
class Check:
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs

    def to_dict(self) -> dict:
        return {
            "lhs": format_rational(self.lhs),
            "rhs": format_rational(self.rhs),
            "holds": self.holds,
        }


@dataclass(frozen=True)
class TraceStep:
    w: frozenset[int]
    a: frozenset[int]
    b: frozenset[int]
    star_lhs: Fraction
    star_rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.star_lhs >= self.star_rhs

    def to_dict(self) -> dict:
        return {
            "W": sorted(self.w),
            "A": sorted(self.a),
            "B": sorted(self.b),
            "star_lhs": format_rational(self.star_lhs),
            "star_rhs": format_rational(self.star_rhs),
            "holds": self.holds,
        }


@dataclass
class TraceReport:
    instance: Instance
    a0: frozenset[int]
    b0: frozenset[int]
    c0: frozenset[int]
    steps: list[TraceStep]
    final_checks: dict[str, Check]
    structure: dict[str, bool] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.steps)

    @property
    def all_hold(self) -> bool:
        return (
            all(s.holds for s in self.steps)
            and all(c.holds for c in self.final_checks.values())
            and all(self.structure.values())
        )

    def failures(self) -> list[str]:
        out = [f"star[{n}]" for n, s in enumerate(self.steps, 1) if not s.holds]
        out += [label for label, c in self.final_checks.items() if not c.holds]
        out += [label for label, ok in self.structure.items() if not ok]
        return out

    def to_dict(self) -> dict:
        return {
            "instance": self.instance.to_dict(),
            "A0": sorted(self.a0),
            "B0": sorted(self.b0),
            "C0": sorted(self.c0),
            "k": self.k,
            "steps": [s.to_dict() for s in self.steps],
            "final_checks": {k: v.to_dict() for k, v in self.final_checks.items()},
            "structure": dict(self.structure),
            "all_hold": self.all_hold,
        }


def partition_support(s1: Iterable[int]) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    """Level sets of sum_{i in S1} x_i at the values 1, -1/2 and 1/2."""
    s1 = frozenset(s1)
    a0 = frozenset(j for j in s1 if j <= 2 or (j - 1) // 2 not in s1)
    c0 = s1 - a0
    b0 = frozenset(c for i in s1 for c in (2 * i + 1, 2 * i + 2)) - s1
    return a0, b0, c0


@dataclass(frozen=True)
class InequalityResult:
    lhs: Fraction
    rhs: Fraction

    @property
    def slack(self) -> Fraction:
        return self.lhs - self.rhs


def _norm_on(vec: Mapping[int, int], idx: Iterable[int]) -> int:
    return sum(abs(vec.get(j, 0)) for j in idx)


def _full_norm(vec: Mapping[int, int]) -> int:
    return sum(abs(t) for t in vec.values())


def _add(u: Mapping[int, int], v: Mapping[int, int]) -> dict[int, int]:
    out = dict(u)
    for j, t in v.items():
        out[j] = out.get(j, 0) + t
    return out


def check_inequality(inst: Instance) -> InequalityResult:
    """lhs = 3||x + y||, rhs = ||x||."""
    inst.validate()
    d = common_denominator(inst.alpha)
    ints = scaled_coeffs(inst.alpha, d)
    whole = _full_norm(scaled_expansion(ints))
    part = _full_norm(scaled_expansion({i: ints[i] for i in inst.s1}))
    return InequalityResult(Fraction(3 * whole, 2 * d), Fraction(part, 2 * d))


def trace_chain(inst: Instance) -> TraceReport:
    inst.validate()
    d = common_denominator(inst.alpha)
    scale = 2 * d
    ints = scaled_coeffs(inst.alpha, d)

    def q(v: int) -> Fraction:
        return Fraction(v, scale)

    x = scaled_expansion({i: ints[i] for i in inst.s1})
    y = scaled_expansion({i: ints[i] for i in inst.s2})
    xy = _add(x, y)
    a0, b0, c0 = partition_support(inst.s1)

    ys = [x]  # y_0 = x
    bs = [b0]
    as_: list[frozenset[int]] = []
    ws: list[frozenset[int]] = []
    steps: list[TraceStep] = []
    while True:
        w = inst.s2 & bs[-1]
        if not w:
            break
        kids = {c for i in w for c in (2 * i + 1, 2 * i + 2)}
        a_l = frozenset(kids & a0)
        b_l = frozenset(kids - a0)
        y_l = scaled_expansion({i: ints[i] for i in w})
        prev_b, prev_y = bs[-1], ys[-1]
        lhs = _norm_on(_add(prev_y, y_l), prev_b) + _norm_on(y_l, b_l)
        rhs = _norm_on(prev_y, prev_b) - _norm_on(y_l, a_l)
        steps.append(TraceStep(w, a_l, b_l, q(lhs), q(rhs)))
        ws.append(w)
        as_.append(a_l)
        bs.append(b_l)
        ys.append(y_l)
        if len(steps) > 4 * max(inst.s2, default=1).bit_length() + 4:
            raise RuntimeError("chain failed to terminate")
    k = len(steps)

    checks: dict[str, Check] = {}
    ww_lhs = sum(
        _norm_on(_add(ys[i - 1], ys[i]), bs[i - 1]) for i in range(1, k + 1)
    ) + _norm_on(ys[k], bs[k])
    ww_rhs = _norm_on(x, b0) - sum(_norm_on(ys[i], as_[i - 1]) for i in range(1, k + 1))
    checks["ww"] = Check(q(ww_lhs), q(ww_rhs))

    pa0_y = _norm_on(y, a0)
    pb0_x = _norm_on(x, b0)
    pc0_x = _norm_on(x, c0)
    major_lhs = sum(_norm_on(xy, b) for b in bs)
    checks["majorineq"] = Check(q(major_lhs), q(pb0_x - pa0_y))

    norm_xy = _full_norm(xy)
    pa0_xy = _norm_on(xy, a0)
    checks["MNw"] = Check(q(norm_xy), q(pa0_xy - pa0_y + pb0_x + pc0_x))
    checks["MN"] = Check(q(norm_xy), q(pb0_x + pc0_x))
    checks["L"] = Check(q(2 * norm_xy), q(_norm_on(x, a0)))
    checks["main"] = Check(q(3 * norm_xy), q(_full_norm(x)))

    structure = _structural_checks(inst, a0, b0, c0, as_, bs, ys, xy, x, y)
    return TraceReport(inst, a0, b0, c0, steps, checks, structure)


def _structural_checks(inst, a0, b0, c0, as_, bs, ys, xy, x, y) -> dict[str, bool]:
    k = len(as_)
    blocks = list(as_) + list(bs) + [c0]
    seen: set[int] = set()
    disjoint = True
    for blk in blocks:
        if seen & blk:
            disjoint = False
        seen |= blk
    supports = [frozenset(j for j, t in v.items() if t) for v in ys]
    separation = all(
        not (bs[i] & supports[j])
        for i in range(k + 1)
        for j in range(k + 1)
        if j not in (i, i + 1)
    )
    mins = [min(b) for b in bs if b]
    s1_sum_support = a0 | b0 | c0
    pa0 = all(abs(xy.get(j, 0)) >= abs(y.get(j, 0)) for j in a0)
    halves = all(2 * abs(xy.get(j, 0)) >= abs(x.get(j, 0)) for j in a0)
    norm_split = _full_norm(x) == _norm_on(x, a0) + _norm_on(x, b0) + _norm_on(x, c0)
    return {
        "disjoint": disjoint,
        "A_l_in_A0": all(a <= a0 for a in as_),
        "support_separation": separation,
        "B_min_increasing": all(p < n for p, n in zip(mins, mins[1:])),
        "terminated": not (inst.s2 & bs[-1]),
        "partition_covers": s1_sum_support
        == frozenset(j for j, t in scaled_expansion({i: 1 for i in inst.s1}).items() if t),
        "PA0_xy_ge_PA0_y": pa0,
        "PA0_2xy_ge_PA0_x": halves,
        "x_norm_split": norm_split,
    }


@dataclass(frozen=True)
class InstanceConfig:
    max_index: int = 60
    sizes: tuple[int, int] | None = None
    grid: tuple[Fraction, ...] = DYADIC_GRID
    seed: int = 0
    max_size: int = 12


def random_instance(config: InstanceConfig, rng: random.Random | None = None) -> Instance:
    """Instance satisfying the magnitude condition by construction.

    Half of the S2 draws are children of indices already chosen, so the
    chain W_1, W_2, ... is exercised rather than ending at once.
    """
    if rng is None:
        rng = random.Random(config.seed)
    mags = sorted({abs(Fraction(g)) for g in config.grid if g}, reverse=True)
    if not mags:
        raise ValueError("grid has no nonzero values")
    if config.sizes is None:
        n1 = rng.randint(0, config.max_size)
        n2 = rng.randint(0, config.max_size)
    else:
        n1, n2 = config.sizes
    n1 = min(n1, config.max_index)
    s1 = set(rng.sample(range(1, config.max_index + 1), n1))
    s2: set[int] = set()
    attempts = 0
    while len(s2) < n2 and len(s1) + len(s2) < config.max_index and attempts < 50 * (n2 + 1):
        attempts += 1
        taken = s1 | s2
        if taken and rng.random() < 0.5:
            c = rng.choice(sorted(taken)) * 2 + rng.randint(1, 2)
            if c > config.max_index or c in taken:
                continue
        else:
            c = rng.randint(1, config.max_index)
            if c in taken:
                continue
        s2.add(c)
    alpha: dict[int, Fraction] = {}
    for i in sorted(s1):
        alpha[i] = rng.choice(mags) * rng.choice((1, -1))
    floor = min((abs(alpha[i]) for i in s1), default=mags[0])
    small = [g for g in mags if g <= floor]
    for i in sorted(s2):
        alpha[i] = rng.choice(small) * rng.choice((1, -1))
    return Instance(frozenset(s1), frozenset(s2), CoeffMap(alpha))


def verify_trial(config: InstanceConfig, trial: int) -> TraceReport:
    inst = random_instance(config, trial_rng(config.seed, trial))
    return trace_chain(inst)
