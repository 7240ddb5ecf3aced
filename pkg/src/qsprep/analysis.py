"""Closed-form resource predictions, split selection and trade-off sweeps."""

from __future__ import annotations

import csv
import io
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from .amplitudes import random_complex_vector
from .errors import SplitOutOfRange, TooWide, ValidationError
from .lowering import metrics
from .simulator import circuit_marginals, max_sim_qubits
from .synthesis import angle_tree_for, check_split, synth_bidirectional

SPLIT_MODES = ("auto", "sublinear", "top_down", "bottom_up", "exact_balance")
CSV_HEADER = ("n", "s", "qubits", "abstract_depth", "native_depth", "cx_count")


def predicted_width(n: int, s: int) -> int:
    check_split(n, s)
    return (s + 1) * 2 ** (n - s) - 1


def predicted_depth(n: int, s: int) -> float:
    check_split(n, s)
    return 2**s + 0.5 * (n * n - n - s * s + s)


def stage2_chain_depth(n: int, s: int) -> int:
    check_split(n, s)
    return sum(i - 1 for i in range(s + 1, n + 1))


@dataclass(frozen=True)
class SplitPrediction:
    n: int
    s: int
    predicted_abstract_depth: float
    predicted_width: int

    @classmethod
    def of(cls, n: int, s: int) -> "SplitPrediction":
        return cls(n, s, predicted_depth(n, s), predicted_width(n, s))


def predictions(n: int) -> list[SplitPrediction]:
    return [SplitPrediction.of(n, s) for s in range(1, n + 1)]


def _balance(n: int, s: float) -> float:
    return (s + 1) * 2 ** (n - s) - 1 - (2**s + 0.5 * (n * n - n - s * s + s))


def balance_root(n: int) -> float:
    """Real ``s`` in ``[1, n]`` where predicted width equals predicted depth.

    When the two curves do not cross inside the interval the endpoint with
    the smaller gap is returned.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    lo, hi = _balance(n, 1.0), _balance(n, float(n))
    if lo == 0.0:
        return 1.0
    if lo * hi > 0:
        return 1.0 if abs(lo) <= abs(hi) else float(n)
    return brentq(lambda s: _balance(n, s), 1.0, float(n), xtol=1e-12)


def min_gap_split(n: int) -> int:
    """Integer split with the smallest ``|width - depth|``, ties to the smaller ``s``."""
    return min(range(1, n + 1), key=lambda s: (abs(predicted_width(n, s) - predicted_depth(n, s)), s))


def choose_split(n: int, mode: str = "auto") -> int:
    """Split for a named strategy.

    ``exact_balance`` rounds the real root of width = depth upward, the same
    direction the asymptotic ``ceil(n/2)`` rule takes.  The integer gap
    minimizer is :func:`min_gap_split`; the two differ by one for some ``n``.
    """
    mode = mode.replace("-", "_")
    if n < 1:
        raise ValidationError("n must be >= 1")
    if mode == "top_down":
        return n
    if mode == "bottom_up":
        return 1
    if mode == "sublinear":
        return math.ceil(n / 2)
    if mode == "exact_balance":
        # The tolerance keeps exact integer roots (n = 2, 5) from rounding up.
        return min(n, max(1, math.ceil(balance_root(n) - 1e-9)))
    if mode == "auto":
        return n if 2**n <= 8 else math.ceil(n / 2)
    raise ValidationError(f"unknown split mode {mode!r}")


def resolve_split(n: int, split: int | str) -> int:
    """Integer split or mode keyword to a validated integer split."""
    if isinstance(split, str) and not split.lstrip("-").isdigit():
        return choose_split(n, split)
    s = int(split)
    check_split(n, s)
    return s


@dataclass(frozen=True)
class SweepRow:
    n: int
    s: int
    width: int
    native_depth: float
    cx_count: float
    abstract_depth: float
    stage1_steps: float
    stage2_cswap_depth: float
    predicted_width: int
    predicted_depth: float
    max_marginal_error: float | None = None

    def csv_values(self) -> tuple:
        return (self.n, self.s, self.width, self.abstract_depth, self.native_depth, self.cx_count)

    def to_json(self) -> dict:
        return asdict(self)


def _median(values):
    m = statistics.median(values)
    return int(m) if float(m).is_integer() else m


def _sweep_point(n: int, s: int, trials: int, seed: int, simulate: bool, cap: int) -> SweepRow:
    if simulate and predicted_width(n, s) > cap:
        raise TooWide(f"(n={n}, s={s}) needs {predicted_width(n, s)} qubits, cap is {cap}")
    rng = np.random.default_rng([seed, n, s])
    reports = []
    errors = []
    width = None
    for _ in range(trials):
        v = random_complex_vector(n, rng)
        circuit = synth_bidirectional(angle_tree_for(v), s)
        reports.append(metrics(circuit))
        width = circuit.width
        if simulate:
            probs = circuit_marginals(circuit, max_qubits=cap).probs
            errors.append(float(np.max(np.abs(probs - v.probabilities()))))
    return SweepRow(
        n=n,
        s=s,
        width=width,
        native_depth=_median([r.native_depth for r in reports]),
        cx_count=_median([r.cx_count for r in reports]),
        abstract_depth=_median([r.abstract_depth for r in reports]),
        stage1_steps=_median([r.abstract_stage1_steps for r in reports]),
        stage2_cswap_depth=_median([r.abstract_stage2_cswap_depth for r in reports]),
        predicted_width=predicted_width(n, s),
        predicted_depth=predicted_depth(n, s),
        max_marginal_error=max(errors) if errors else None,
    )


def sweep(
    n_range: Iterable[int],
    s_range: Iterable[int] | None = None,
    trials: int = 1,
    seed: int = 0,
    simulate: bool = False,
    max_qubits: int | None = None,
    workers: int = 1,
) -> list[SweepRow]:
    """Metrics of dense bidirectional circuits over an ``(n, s)`` grid.

    Each grid point draws its vectors from a generator seeded by
    ``(seed, n, s)``, so rows do not depend on evaluation order.  Splits
    outside ``[1, n]`` are skipped; ``s_range=None`` means every split.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    cap = max_sim_qubits() if max_qubits is None else max_qubits
    s_values = None if s_range is None else sorted(set(s_range))
    grid = []
    for n in sorted(set(n_range)):
        if n < 1:
            raise ValidationError("n must be >= 1")
        for s in s_values if s_values is not None else range(1, n + 1):
            if 1 <= s <= n:
                grid.append((n, s))
    if not grid:
        raise SplitOutOfRange("sweep grid is empty")
    args = [(n, s, trials, seed, simulate, cap) for n, s in grid]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(lambda a: _sweep_point(*a), args))
    else:
        rows = [_sweep_point(*a) for a in args]
    return sorted(rows, key=lambda r: (r.n, r.s))


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_values())
    return buf.getvalue()


def depth_argmin(rows: Sequence[SweepRow]) -> dict[int, int]:
    """Per ``n``, the split with the smallest measured native depth (ties to smaller ``s``)."""
    best: dict[int, SweepRow] = {}
    for row in rows:
        cur = best.get(row.n)
        if cur is None or (row.native_depth, row.s) < (cur.native_depth, cur.s):
            best[row.n] = row
    return {n: row.s for n, row in sorted(best.items())}
