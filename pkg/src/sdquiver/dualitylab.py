"""Seeded experiments: pairing matrices, vanishing agreement, strata census.

Every random draw comes from a generator keyed by ``(seed, tag, index)``, and
all draws happen before any parallel evaluation, so reports depend only on
the configuration.
"""

from __future__ import annotations

import hashlib
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from sdquiver.errors import ContractError, NotReflectableError
from sdquiver.exactla import RMatrix, det, format_rational, rank, submatrix
from sdquiver.quiver import C_matrix, DimVec, Rep, direct_sum, random_matrix, random_rep, reflect, reflect_inverse
from sdquiver.sheafbridge import (
    BundleRep,
    Pencil,
    h0_line,
    h0_tensor,
    hom_to_O,
    ideal_sheaf_rep,
    in_chart,
    lambda3,
    strata_index,
    support_curve,
)

MAX_RETRIES = 1000
_U64 = 1 << 64


def derive_seed(seed: int, *tag) -> int:
    """A 64-bit seed determined by ``seed`` and the tag path."""
    h = hashlib.blake2b(repr((seed,) + tag).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


def _rng(seed: int, *tag) -> random.Random:
    return random.Random(derive_seed(seed, *tag))


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    r: int = 1
    d: int = 1
    n: int = 1
    samples_V: int = 8
    samples_W: int = 8
    entry_bound: int = 3
    schedule: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "schedule", tuple(self.schedule))
        if not 0 <= self.seed < _U64:
            raise ContractError("seed must be an unsigned 64-bit integer")
        for name in ("r", "d", "n", "samples_V", "samples_W", "entry_bound"):
            if getattr(self, name) < 1:
                raise ContractError(f"{name} must be positive")
        if any(b <= a for a, b in zip(self.schedule, self.schedule[1:])):
            raise ContractError("schedule must be strictly increasing")
        if any(s < 1 for s in self.schedule):
            raise ContractError("schedule entries must be positive")

    def to_json(self) -> dict:
        out = asdict(self)
        out["schedule"] = list(self.schedule)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ExperimentConfig":
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        for k, v in known.items():
            if k == "schedule":
                if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
                    raise ContractError("schedule must be a list of integers")
            elif not isinstance(v, int) or isinstance(v, bool):
                raise ContractError(f"{k} must be an integer")
        return cls(**known)


@dataclass
class PairingReport:
    config: dict
    matrix_rank: int
    saturation: list
    zero_cells: int
    oracle_disagreements: int
    resamples: int = 0
    h_mismatches: int = 0
    pairs: int = 0
    matrix: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class StrataReport:
    n: int
    seed: int
    counts: dict
    residual_failures: int
    fixtures: list
    witnesses: dict

    def to_json(self) -> dict:
        out = asdict(self)
        out["counts"] = {str(k): v for k, v in sorted(self.counts.items())}
        out["witnesses"] = {str(k): v for k, v in sorted(self.witnesses.items())}
        return out


# sampling


def _reflectable(v: Rep) -> bool:
    try:
        reflect_inverse(v)
    except NotReflectableError:
        return False
    return True


def sample_bundle(n: int, seed: int, bound: int) -> tuple[Rep, int]:
    """A reflectable ``(n, 2n)`` rep and the number of rejected draws."""
    for attempt in range(MAX_RETRIES):
        v = random_rep(3, (n, 2 * n), derive_seed(seed, "bundle", attempt), bound)
        if _reflectable(v):
            return v, attempt
    raise ContractError("no reflectable sample found")


def sample_pencil(d: int, seed: int, bound: int) -> tuple[Rep, int]:
    """An in-chart ``(d, d)`` rep and the number of rejected draws."""
    for attempt in range(MAX_RETRIES):
        w = random_rep(3, (d, d), derive_seed(seed, "pencil", attempt), bound)
        if in_chart(w):
            return w, attempt
    raise ContractError("no in-chart sample found")


def crafted_pair(n: int, d: int, seed: int, bound: int) -> tuple[Rep, Rep]:
    """A pair with vanishing pairing that does not split as a direct sum.

    The ``(n, n)`` rep ``A`` is drawn with ``sum l_i A_i`` singular for a line
    ``l``; ``V = reflect(A)``.  ``W`` has ``l`` as a ``(1, 1)`` subrep on its
    first basis vector, so ``sum kron(A_i, B_i)`` kills ``u (x) e_1``.
    """
    rng = _rng(seed, "crafted", n, d)
    for _ in range(MAX_RETRIES):
        lam = [rng.randint(-bound, bound) for _ in range(2)] + [rng.choice([i for i in range(-bound, bound + 1) if i])]
        ax = random_matrix(rng, n, n, bound)
        ay = random_matrix(rng, n, n, bound)
        u = random_matrix(rng, n, n - 1, bound)
        s = u @ random_matrix(rng, n - 1, n, bound) if n > 1 else RMatrix.zeros(1, 1)
        az = (s - ax.scale(lam[0]) - ay.scale(lam[1])).scale(Fraction(1, lam[2]))
        a = Rep(3, DimVec(n, n), (ax, ay, az))
        try:
            v = reflect(a)
        except NotReflectableError:
            continue
        mats = []
        for li in lam:
            b = [list(r) for r in random_matrix(rng, d, d, bound).to_rows()]
            for i in range(d):
                b[i][0] = li if i == 0 else 0
            mats.append(RMatrix.from_rows(b))
        w = Rep(3, DimVec(d, d), tuple(mats))
        if _reflectable(v) and in_chart(w):
            return v, w
    raise ContractError("could not craft a degenerate pair")


# pairing matrix


def _cell(args) -> tuple[Fraction, int]:
    v, w, with_oracle = args
    val = det(C_matrix(v, w))
    h0 = h0_tensor(v, w)[0] if with_oracle else -1
    return val, h0


def _leading_ranks(m: RMatrix, schedule) -> list:
    out = []
    for s in schedule:
        k = min(s, m.rows, m.cols)
        out.append([s, rank(submatrix(m, range(k), range(k)))])
    return out


def pairing_matrix(cfg: ExperimentConfig, workers: int = 1, oracle: bool = True) -> tuple[RMatrix, PairingReport]:
    """``P[i][j] = det C(V_i, W_j)`` over seeded reflectable ``V_i`` and in-chart ``W_j``."""
    resamples = 0
    vs, ws = [], []
    for i in range(cfg.samples_V):
        v, k = sample_bundle(cfg.r, derive_seed(cfg.seed, "V", i), cfg.entry_bound)
        vs.append(v)
        resamples += k
    for j in range(cfg.samples_W):
        w, k = sample_pencil(cfg.d, derive_seed(cfg.seed, "W", j), cfg.entry_bound)
        ws.append(w)
        resamples += k
    jobs = [(v, w, oracle) for v in vs for w in ws]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            cells = list(ex.map(_cell, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        cells = [_cell(j) for j in jobs]
    m = RMatrix(cfg.samples_V, cfg.samples_W, [c[0] for c in cells])
    zero = sum(1 for c in cells if c[0] == 0)
    disagree = sum(1 for c in cells if oracle and (c[0] == 0) != (c[1] > 0))
    schedule = cfg.schedule or tuple(range(1, max(cfg.samples_V, cfg.samples_W) + 1))
    report = PairingReport(
        config=cfg.to_json(),
        matrix_rank=rank(m),
        saturation=_leading_ranks(m, schedule),
        zero_cells=zero,
        oracle_disagreements=disagree,
        resamples=resamples,
        pairs=len(cells),
        matrix=m.to_json(),
    )
    return m, report


def coeff_span_curve(d: int, schedule, seed: int = 0, bound: int = 3) -> list:
    """Ranks of leading blocks of ``[support_curve(W_j)(p_i)]`` for each size in ``schedule``."""
    size = max(schedule)
    curves = [support_curve(sample_pencil(d, derive_seed(seed, "span-W", j), bound)[0]) for j in range(size)]
    prng = _rng(seed, "span-p")
    pts = [tuple(prng.randint(-bound, bound) for _ in range(3)) for _ in range(size)]
    m = RMatrix(size, size, [c(p) for p in pts for c in curves])
    return _leading_ranks(m, schedule)


def coeff_span_dim(d: int, samples: int | None = None, seed: int = 0, bound: int = 3) -> int:
    """Rank of the point-evaluation matrix of sampled support curves."""
    if samples is None:
        samples = 2 * h0_line(d) + 2
    return coeff_span_curve(d, [samples], seed, bound)[-1][1]


def vanishing_oracle_experiment(cfg: ExperimentConfig, crafted_every: int = 3) -> PairingReport:
    """Compare ``det C = 0`` with ``h0(G (x) F) > 0`` on seeded pairs.

    Uses ``cfg.n`` and ``cfg.d``; ``cfg.samples_V`` pairs are drawn, every
    ``crafted_every``-th one built to have a vanishing pairing.
    """
    resamples = 0
    zero = disagree = hmis = crafted = 0
    details = []
    for i in range(cfg.samples_V):
        s = derive_seed(cfg.seed, "pair", i)
        if crafted_every and i % crafted_every == crafted_every - 1:
            v, w = crafted_pair(cfg.n, cfg.d, s, cfg.entry_bound)
            crafted += 1
        else:
            v, k1 = sample_bundle(cfg.n, s, cfg.entry_bound)
            w, k2 = sample_pencil(cfg.d, s, cfg.entry_bound)
            resamples += k1 + k2
        val = det(C_matrix(v, w))
        h0, h1 = h0_tensor(v, w)
        zero += val == 0
        if (val == 0) != (h0 > 0):
            disagree += 1
        if h0 != h1:
            hmis += 1
        details.append([format_rational(val), h0, h1])
    return PairingReport(
        config=cfg.to_json(),
        matrix_rank=0,
        saturation=[],
        zero_cells=zero,
        oracle_disagreements=disagree,
        resamples=resamples,
        h_mismatches=hmis,
        pairs=cfg.samples_V,
        extra={"crafted": crafted, "cells": details},
    )


def strata_census(n: int, samples: int, seed: int = 0, bound: int = 3) -> StrataReport:
    """Strata indices of seeded reflectable ``(n, 2n)`` reps plus ideal-sheaf sums."""
    counts: Counter = Counter()
    witnesses: dict = {}
    failures = 0
    reps = [sample_bundle(n, derive_seed(seed, "census", i), bound)[0] for i in range(samples)]
    fixtures = []
    prng = _rng(seed, "census-points")
    for k in range(1, n + 1):
        v = None
        for _ in range(k):
            while True:
                p = [prng.randint(-bound, bound) for _ in range(3)]
                if any(p):
                    break
            part = ideal_sheaf_rep(p).rep
            v = part if v is None else direct_sum(v, part)
        if k < n:
            v = direct_sum(v, sample_bundle(n - k, derive_seed(seed, "census-rest", k), bound)[0])
        reps.append(v)
        fixtures.append({"ideal_summands": k})
    lam = lambda3().rep
    for idx, v in enumerate(reps):
        b = BundleRep(v)
        i = strata_index(b)
        rk = rank(C_matrix(v, lam))
        if hom_to_O(b) + rk != 3 * n:
            failures += 1
        counts[i] += 1
        if i not in witnesses:
            witnesses[i] = v.to_json()
        if idx >= samples:
            fixtures[idx - samples]["index"] = i
    return StrataReport(n, seed, dict(counts), failures, fixtures, witnesses)
