"""Coherent-state transforms, reproducing kernels, quantum-plane rewriting and
group-covariant functional calculi.

Modules: :mod:`groups`, :mod:`grids`, :mod:`reps`, :mod:`cstrans`,
:mod:`qplane`, :mod:`opcalc`; :mod:`cli` and :mod:`service` are the front ends.
"""

from .io import TOOL_VERSION as __version__

__all__ = ["__version__"]
