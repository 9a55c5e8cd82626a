"""Order-parameter container shared by the GL modules."""

from dataclasses import dataclass

import numpy as np

BASES = ('complex_sh', 'real_sh', 'labeled_mixed', 'mixed_complex', 'real_2d', 'mixed_2d', 'scalar')


@dataclass(frozen=True)
class OrderParameter:
    """Complex GL order parameter with a basis tag.

    Parameters
    ----------
    components : array_like
        Complex amplitudes. For ``'labeled_mixed'`` the order is
        ``(psi_s, psi_-2, ..., psi_2)`` with a real-harmonic d-block.
    basis : str
        One of ``BASES``.
    """

    components: np.ndarray
    basis: str = 'complex_sh'

    def __post_init__(self):
        v = np.array(self.components, dtype=complex).reshape(-1)
        if self.basis not in BASES:
            raise ValueError('unknown basis %r' % (self.basis,))
        if not np.all(np.isfinite(v)):
            raise ValueError('order parameter has non-finite entries')
        v.setflags(write=False)
        object.__setattr__(self, 'components', v)

    @property
    def n(self):
        return self.components.size

    def to_real(self):
        """Interleaved real coordinates ``(Re psi_1, Im psi_1, ...)``."""
        return complex_to_interleaved(self.components)

    @classmethod
    def from_real(cls, x, basis='complex_sh'):
        return cls(interleaved_to_complex(x), basis)


def complex_to_interleaved(v):
    v = np.asarray(v, dtype=complex)
    out = np.empty(2 * v.size)
    out[0::2] = v.real
    out[1::2] = v.imag
    return out


def interleaved_to_complex(x):
    x = np.asarray(x, dtype=float)
    return x[0::2] + 1j * x[1::2]
