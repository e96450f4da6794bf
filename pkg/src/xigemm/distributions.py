"""Seeded test matrices from the five evaluation distributions.

Bits come from numpy's PCG64 seeded through ``SeedSequence``; samples are
drawn with the legacy ``RandomState`` methods, whose streams numpy keeps
frozen across releases. Together that pins every matrix to its
``(spec, rows, cols)`` on any platform.
"""
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

# CLI names -> kinds
NAMES = {
    "uniform": "uniform",
    "normal": "normal",
    "esp": "exponential",
    "poison": "poisson",
    "kar": "chisquare",
}

_ARITY = {"uniform": 0, "normal": 2, "exponential": 1, "poisson": 1, "chisquare": 1}


@dataclass(frozen=True)
class DistributionSpec:
    kind: str
    params: Tuple[float, ...] = ()
    seed: int = 0

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise ValueError(f"unknown distribution {self.kind!r}")
        if len(self.params) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {_ARITY[self.kind]} parameters, got {self.params}")
        if self.kind == "normal":
            if not self.params[1] > 0:
                raise ValueError("normal stddev must be > 0")
        elif self.params and not self.params[0] > 0:
            raise ValueError(f"{self.kind} parameter must be > 0")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")

    @classmethod
    def uniform(cls, seed=0):
        return cls("uniform", (), seed)

    @classmethod
    def normal(cls, mean=10.0, stddev=3.0, seed=0, variance=None):
        """Normal law; pass ``variance`` instead of ``stddev`` for the other reading."""
        if variance is not None:
            stddev = float(np.sqrt(variance))
        return cls("normal", (float(mean), float(stddev)), seed)

    @classmethod
    def exponential(cls, rate=4.0, seed=0):
        return cls("exponential", (float(rate),), seed)

    @classmethod
    def poisson(cls, rate=10.0, seed=0):
        return cls("poisson", (float(rate),), seed)

    @classmethod
    def chisquare(cls, dof=1.0, seed=0):
        return cls("chisquare", (float(dof),), seed)

    @classmethod
    def from_name(cls, name, seed=0):
        """Spec for a CLI distribution name with the evaluation's default parameters."""
        try:
            kind = NAMES[name]
        except KeyError:
            raise ValueError(f"unknown distribution name {name!r}; choose from {sorted(NAMES)}") from None
        return getattr(cls, kind)(seed=seed)

    def with_seed(self, seed):
        return replace(self, seed=seed)


def _state(seed):
    return np.random.RandomState(np.random.PCG64(np.random.SeedSequence(seed)))


def _draw(spec, rs, shape):
    p = spec.params
    if spec.kind == "uniform":
        return rs.random_sample(shape)
    if spec.kind == "normal":
        return rs.normal(p[0], p[1], shape)
    if spec.kind == "exponential":
        return rs.exponential(1.0 / p[0], shape)
    if spec.kind == "poisson":
        return rs.poisson(p[0], shape)
    return rs.chisquare(p[0], shape)


def _f32(spec, x):
    x = np.ascontiguousarray(x, dtype=np.float32)
    if spec.kind == "uniform":
        # doubles just below 1 round up to 1.0f
        np.minimum(x, np.nextafter(np.float32(1), np.float32(0)), out=x)
    return x


def generate(spec, rows, cols):
    """A ``rows x cols`` float32 matrix of independent draws from ``spec``."""
    if rows < 1 or cols < 1:
        raise ValueError(f"rows and cols must be >= 1, got {rows}x{cols}")
    return _f32(spec, _draw(spec, _state(spec.seed), (rows, cols)))


def generate_pair(spec, m, k, n):
    """Independent operands ``A`` (m x k) and ``B`` (k x n) derived from one seed."""
    sa, sb = np.random.SeedSequence(spec.seed).spawn(2)
    a = _draw(spec, np.random.RandomState(np.random.PCG64(sa)), (m, k))
    b = _draw(spec, np.random.RandomState(np.random.PCG64(sb)), (k, n))
    return _f32(spec, a), _f32(spec, b)
