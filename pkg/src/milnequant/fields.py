"""Local wavevector fields k^2(x) = kappa(x) + i tau(x)."""
from dataclasses import dataclass, field

import numpy as np

from .kernels import fields as _kf

__all__ = ["WaveNumberField", "TableData"]


@dataclass(frozen=True)
class TableData:
    """Cubic-spline representation of a tabulated potential (PPoly layout)."""

    x: np.ndarray
    coeffs: np.ndarray

    @classmethod
    def empty(cls):
        return cls(np.zeros(2), np.zeros((4, 1), dtype=np.complex128))


@dataclass(frozen=True)
class WaveNumberField:
    """k^2(x) = g (E - V(x)) for one potential family at fixed energy.

    ``kind`` and ``params`` address the compiled kernels, so the same object
    drives both the Python-level evaluators and the integrators.
    """

    kind: int
    params: np.ndarray
    energy: float = 0.0
    table: TableData = field(default_factory=TableData.empty)

    @classmethod
    def from_kind(cls, kind, values, g=1.0, energy=0.0, table=None):
        p = np.zeros(_kf.NPARAMS, dtype=np.complex128)
        p[: len(values)] = values
        p[_kf.NPARAMS - 1] = g
        return cls(kind, p, float(energy), table or TableData.empty())

    @classmethod
    def constant(cls, k2):
        """Uniform field; ``k2`` may be complex."""
        # stored as V = -k2 at E = 0
        return cls.from_kind(_kf.CONSTANT, [-complex(k2)], energy=0.0)

    @classmethod
    def harmonic(cls, energy, omega=1.0):
        """k^2 = E - omega^2 x^2."""
        return cls.from_kind(_kf.HARMONIC, [omega * omega], energy=energy)

    @property
    def g(self):
        return self.params[_kf.NPARAMS - 1].real

    def with_energy(self, energy):
        return WaveNumberField(self.kind, self.params, float(energy), self.table)

    def k2(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = _kf.k2_array(self.kind, self.params, self.table.x, self.table.coeffs, xs, self.energy)
        return out if np.ndim(x) else out[0]

    __call__ = k2

    def kappa(self, x):
        return np.real(self.k2(x))

    def tau(self, x):
        return np.imag(self.k2(x))

    def potential(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = _kf.potential_array(self.kind, self.params, self.table.x, self.table.coeffs, xs)
        return out if np.ndim(x) else out[0]

    @property
    def name(self):
        return _kf.KIND_NAMES[self.kind]
