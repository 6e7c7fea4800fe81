"""The proving loop: descend from N to a trial-division leaf.

Each level: build the square-root pool, combine prime discriminants into
candidates, schedule them by (h/g, h, D), and for each candidate solve
the norm equation, sieve both m = N+1-U and N+1+U for a smooth cofactor,
apply the early-abort contraction bound, and probable-prime test the
survivor N'.  A hit triggers the curve phase: H_D (cached or computed),
one root mod N, the CM curve and its twists, a point, and the cofactor
order check.  The certified step is appended and the loop recurses on N'.

Compositeness is only ever declared on arithmetic evidence (a factor, a
failed probable-prime test, a square-root failure); an order mismatch
merely discards the point, curve, or discriminant, since unlucky
selections are expected.  Wall-time and call counts are accumulated per
phase (SQRT, CORN, EXTRACT, PRP, HD, jmod) for benchmark reporting.
"""

from __future__ import annotations

import math
import os
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

from . import classpoly as _classpoly
from .certificate import SMALL_THRESHOLD, CertStep, Certificate, serialize
from .curve import (NoPointFoundError, OrderMismatchError, SingularCurveError,
                    curve_from_j, find_point, order_check,
                    quarter_root_bound_ok)
from .modarith import (CompositeDetectedError, find_composite_witness,
                       is_prime_small)
from .polyroot import NoRootError, PolyModN, find_root
from .pool import build_pool, combine, schedule
from .quadratics import solve_4n
from .sieve import FullySmoothError, extract_cofactor, residue_table, sieve_m

_EULER_GAMMA = 0.5772156649015329
_PHASES = ("SQRT", "CORN", "EXTRACT", "PRP", "HD", "jmod")
_POINTS_PER_CURVE = 5
_MAX_GROWTH_ROUNDS = 12
_POOL_HARD_CAP = 256


class ResourceExhaustedError(Exception):
    """Discriminant/pool budget ran out without finding a usable step."""


@dataclass
class ProverConfig:
    d_max: int = 10 ** 6
    h_max: int = 200
    pool_size: int = 0       # 0: derived from the bit length of N
    smooth_bound: int = 0    # 0: max(1000, 8 * bits)
    delta: int = 12
    max_subset_size: int = 2
    prp_rounds: int = 20
    rng_seed: int = 0
    small_threshold: int = SMALL_THRESHOLD
    strict_2n: bool = False
    threads: int = 1         # accepted for interface stability; execution is sequential
    hd_cache_dir: str | None = None

    def __post_init__(self):
        if self.d_max < 4:
            raise ValueError("d_max must be >= 4")
        if self.small_threshold < 1 << 32:
            raise ValueError("small_threshold must be >= 2^32")
        if self.delta < 0 or self.prp_rounds < 1 or self.max_subset_size < 1:
            raise ValueError("bad config")

    def cache_dir(self) -> str | None:
        return self.hd_cache_dir or os.environ.get("ECPP_HD_CACHE") or None


@dataclass
class PhaseStats:
    seconds: dict = field(default_factory=lambda: {p: 0.0 for p in _PHASES})
    calls: dict = field(default_factory=lambda: {p: 0 for p in _PHASES})
    nsteps: int = 0
    cert_bytes: int = 0
    total_seconds: float = 0.0


class Prover:
    def __init__(self, config: ProverConfig | None = None):
        self.config = config or ProverConfig()
        self.stats = PhaseStats()

    @contextmanager
    def _phase(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.stats.seconds[name] += time.perf_counter() - t0
            self.stats.calls[name] += 1

    def prove(self, n: int) -> Certificate:
        if n < 2:
            raise ValueError("n must be >= 2")
        cfg = self.config
        t0 = time.perf_counter()
        if n >= cfg.small_threshold:
            with self._phase("PRP"):
                witness = find_composite_witness(n, cfg.prp_rounds, cfg.rng_seed)
            if witness is not None:
                raise CompositeDetectedError(n, witness=witness,
                                             reason="probable-prime test")
        steps = []
        current = n
        while True:
            step = self.step_once(current)
            steps.append(step)
            if step.kind == "leaf":
                break
            current = step.nprime
        cert = Certificate(tuple(steps))
        self.stats.nsteps = len(steps)
        self.stats.cert_bytes = len(serialize(cert).encode())
        self.stats.total_seconds += time.perf_counter() - t0
        return cert

    def step_once(self, n: int) -> CertStep:
        """One link of the chain: an ecpp step for large n, a leaf below
        the trial-division threshold."""
        cfg = self.config
        # Leaves must stay verifiable by trial division, so the effective
        # threshold never rises above the certificate format's 2^32.
        if n < min(cfg.small_threshold, SMALL_THRESHOLD):
            if not is_prime_small(n):
                raise CompositeDetectedError(n, witness=_small_factor(n),
                                             reason="trial division")
            return CertStep(kind="leaf", n=n)

        bits = n.bit_length()
        bound = cfg.smooth_bound or max(1000, 8 * bits)
        r = cfg.pool_size or max(8, bits // 16)
        with self._phase("EXTRACT"):
            table = residue_table(n, bound)
        t_estimate = math.exp(-_EULER_GAMMA) * math.log(n) / math.log(bound)
        budget = t_estimate / 2
        tried: set[int] = set()

        for _ in range(_MAX_GROWTH_ROUNDS):
            cands, r = self._grown_candidates(n, r, budget)
            for cand in schedule(cands, budget, h_max=cfg.h_max):
                d = cand.info.d
                if d in tried:
                    continue
                tried.add(d)
                with self._phase("CORN"):
                    sol = solve_4n(d, n, cand.sqrt_d)
                if sol is None:
                    continue
                step = self._try_discriminant(n, d, sol, table, bound)
                if step is not None:
                    return step
            r = (3 * r + 2) // 2
            budget *= 2
        raise ResourceExhaustedError(
            f"no usable discriminant for {n} within d_max={cfg.d_max}, "
            f"h_max={cfg.h_max}")

    def _grown_candidates(self, n, r, budget):
        """Enlarge the pool until the accumulated g/h covers the budget.

        Growing before scheduling keeps the processed prefix rich in
        small class numbers instead of forcing the tail of a small pool.
        """
        cfg = self.config
        last_count = -1
        while True:
            with self._phase("SQRT"):
                pool = build_pool(n, r)
            cands = combine(pool, cfg.max_subset_size, d_max=cfg.d_max,
                            h_cap=cfg.h_max)
            coverage = sum(1 / c.weight for c in cands
                           if c.info.h <= cfg.h_max)
            if coverage >= budget or r >= _POOL_HARD_CAP \
                    or len(cands) == last_count:
                return cands, r
            last_count = len(cands)
            r = (3 * r + 2) // 2

    def _try_discriminant(self, n, d, sol, table, bound) -> CertStep | None:
        cfg = self.config
        big_u, v = sol
        with self._phase("EXTRACT"):
            hits_minus, hits_plus = sieve_m(big_u, table, d)
        for u, hits in ((big_u, hits_minus), (-big_u, hits_plus)):
            m = n + 1 - u
            if cfg.strict_2n:
                # Exact m = 2N' certificates contract by one bit per step,
                # so the delta cutoff cannot apply here.
                if m % 2:
                    continue
                c, nprime = 2, m // 2
                if nprime % 2 == 0:
                    continue
            else:
                try:
                    with self._phase("EXTRACT"):
                        fr = extract_cofactor(m, hits, bound)
                except FullySmoothError:
                    continue
                c, nprime = fr.c, fr.nprime
                if c < 2:
                    continue  # m prime would mean no contraction at all
                if n < nprime << cfg.delta:
                    continue
            if not quarter_root_bound_ok(n, nprime):
                continue
            with self._phase("PRP"):
                witness = find_composite_witness(nprime, cfg.prp_rounds,
                                                 cfg.rng_seed)
            if witness is not None:
                continue
            step = self._curve_phase(n, d, u, v, m, c, nprime)
            if step is not None:
                return step
        return None

    def _curve_phase(self, n, d, u, v, m, c, nprime) -> CertStep | None:
        cfg = self.config
        with self._phase("HD"):
            hd = self._class_poly(d)
        with self._phase("jmod"):
            try:
                j0 = find_root(PolyModN.make(list(reversed(hd.coeffs)), n), n,
                               rng_seed=cfg.rng_seed)
            except NoRootError:
                return None  # not expected for a splitting prime; skip D
        try:
            curves = curve_from_j(j0, n)
        except SingularCurveError as exc:
            raise CompositeDetectedError(n, witness=exc.factor,
                                         reason="singular curve") from exc
        for E in curves:
            start = 0
            for _ in range(_POINTS_PER_CURVE):
                try:
                    P = find_point(E, n, start=start)
                except NoPointFoundError:
                    break
                start = P.x + 1
                try:
                    order_check(n, (c, nprime), E, P)
                except OrderMismatchError:
                    continue
                return CertStep(kind="ecpp", n=n, d=d, u=u, v=v, m=m, c=c,
                                nprime=nprime, a=E.a, b=E.b, x=P.x, y=P.y)
        return None

    def _class_poly(self, d):
        directory = self.config.cache_dir()
        if directory:
            cached = _classpoly.load_cache(d, directory)
            if cached is not None:
                return cached
        poly = _classpoly.hilbert_class_poly(d)
        if directory:
            _classpoly.save_cache(poly, directory)
        return poly


def _small_factor(n: int) -> int | None:
    if n < 2:
        return None
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return None


def prove(n: int, config: ProverConfig | None = None) -> Certificate:
    return Prover(config).prove(n)


def prove_with_stats(n: int, config: ProverConfig | None = None):
    prover = Prover(config)
    cert = prover.prove(n)
    return cert, prover.stats


def step_once(n: int, config: ProverConfig | None = None) -> CertStep:
    return Prover(config).step_once(n)
