"""Dense and sparse amplitude vectors: ingestion, validation, conversion."""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import NotNormalized, ValidationError, ZeroNorm

NORM_TOL = 1e-9


def _is_power_of_two(k: int) -> bool:
    return k >= 1 and k & (k - 1) == 0


def _norm(values: Iterable[complex]) -> float:
    return math.sqrt(math.fsum(abs(v) ** 2 for v in values))


@dataclass(frozen=True)
class AmplitudeVector:
    """Normalized complex vector of length ``2**n``."""

    entries: tuple[complex, ...]

    def __post_init__(self):
        if len(self.entries) < 2 or not _is_power_of_two(len(self.entries)):
            raise ValidationError(f"length {len(self.entries)} is not a power of two >= 2")
        norm = _norm(self.entries)
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"norm {norm!r} deviates from 1")

    @property
    def n(self) -> int:
        return len(self.entries).bit_length() - 1

    def __len__(self) -> int:
        return len(self.entries)

    def to_numpy(self) -> np.ndarray:
        return np.array(self.entries, dtype=complex)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.to_numpy()) ** 2


@dataclass(frozen=True)
class SparseAmplitudeVector:
    """Nonzero entries ``(index, amplitude)`` of a normalized ``2**n`` vector."""

    n: int
    entries: tuple[tuple[int, complex], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("n must be >= 1")
        if not self.entries:
            raise ValidationError("sparse vector needs at least one entry")
        prev = -1
        for index, _ in self.entries:
            if not prev < index < 2**self.n:
                raise ValidationError(
                    f"index {index} out of range or not strictly increasing"
                )
            prev = index
        norm = _norm(a for _, a in self.entries)
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"norm {norm!r} deviates from 1")

    @property
    def M(self) -> int:
        return len(self.entries)


def load_vector(raw: Sequence[complex], normalize: bool = False, tol: float = NORM_TOL) -> AmplitudeVector:
    """Build an :class:`AmplitudeVector`, zero-padding to the next power of two.

    With ``normalize`` unset, input whose 2-norm differs from one by more
    than ``tol`` is rejected with :class:`NotNormalized`.
    """
    values = [complex(v) for v in raw]
    if not values:
        raise ValidationError("empty input vector")
    if not all(cmath.isfinite(v) for v in values):
        raise ValidationError("input contains NaN or infinity")
    size = max(2, 1 << (len(values) - 1).bit_length())
    values.extend([0j] * (size - len(values)))
    norm = _norm(values)
    if norm == 0.0:
        raise ZeroNorm("all entries are zero")
    if normalize:
        values = [v / norm for v in values]
    elif abs(norm - 1.0) > tol:
        raise NotNormalized(f"norm {norm!r} deviates from 1 by more than {tol}")
    return AmplitudeVector(tuple(values))


def sparsify(v: AmplitudeVector, eps: float = 0.0) -> SparseAmplitudeVector:
    """Keep entries with ``|amplitude| > eps``; renormalize if any were dropped."""
    kept = [(i, a) for i, a in enumerate(v.entries) if abs(a) > eps]
    if not kept:
        raise ZeroNorm(f"no entry exceeds eps={eps}")
    if len(kept) < len(v.entries):
        norm = _norm(a for _, a in kept)
        if norm == 0.0:
            raise ZeroNorm(f"no entry exceeds eps={eps}")
        kept = [(i, a / norm) for i, a in kept]
    return SparseAmplitudeVector(v.n, tuple(kept))


def densify(v: SparseAmplitudeVector) -> AmplitudeVector:
    values = [0j] * (2**v.n)
    for i, a in v.entries:
        values[i] = a
    return AmplitudeVector(tuple(values))


def random_complex_vector(n: int, rng: np.random.Generator) -> AmplitudeVector:
    """Standard-normal real and imaginary parts, normalized."""
    z = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    z /= np.linalg.norm(z)
    return load_vector(z.tolist(), normalize=True)


def random_sparse_vector(n: int, m: int, rng: np.random.Generator) -> SparseAmplitudeVector:
    """``m`` distinct random positions carrying standard-normal complex values."""
    positions = np.sort(rng.choice(2**n, size=m, replace=False))
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    z /= np.linalg.norm(z)
    return SparseAmplitudeVector(n, tuple((int(i), complex(a)) for i, a in zip(positions, z)))


# JSON ----------------------------------------------------------------------


def _parse_amp(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ValidationError(f"cannot read amplitude {value!r}")


def _dump_amp(a: complex) -> list[float]:
    return [a.real, a.imag]


def parse_json(data: dict, normalize: bool = False) -> AmplitudeVector | SparseAmplitudeVector:
    """Read either the dense or the sparse JSON shape; sparse is detected by ``entries``."""
    if "entries" in data:
        if "n" not in data:
            raise ValidationError("sparse input requires 'n'")
        entries = sorted(
            (int(e["index"]), _parse_amp(e["amp"])) for e in data["entries"]
        )
        if normalize:
            norm = _norm(a for _, a in entries)
            if norm == 0.0:
                raise ZeroNorm("all entries are zero")
            entries = [(i, a / norm) for i, a in entries]
        return SparseAmplitudeVector(int(data["n"]), tuple(entries))
    if "amplitudes" in data:
        return load_vector([_parse_amp(a) for a in data["amplitudes"]], normalize=normalize)
    raise ValidationError("JSON input needs 'amplitudes' or 'entries'")


def read_json(path: str | Path, normalize: bool = False) -> AmplitudeVector | SparseAmplitudeVector:
    with open(path) as fh:
        return parse_json(json.load(fh), normalize=normalize)


def to_json(v: AmplitudeVector | SparseAmplitudeVector) -> dict:
    if isinstance(v, SparseAmplitudeVector):
        return {"n": v.n, "entries": [{"index": i, "amp": _dump_amp(a)} for i, a in v.entries]}
    return {"amplitudes": [_dump_amp(a) for a in v.entries]}
