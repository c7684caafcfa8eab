"""Kernel backend selection.

Imports the compiled extension when present, otherwise the numpy fallback.
Set ``GAUSSNET_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and by tests that compare the two backends).

The split is deliberate (see benchmarks/bench_kernels.py): the compiled
kernels own the per-step paths where interpreter dispatch dominates
(episode rollouts, argmax routing, the GAE scan), while the batch
forward/backward passes stay on numpy, whose BLAS beats naive C loops as
soon as the batch dimension is real.
"""

from __future__ import annotations

import os

from . import _pykernels

_compiled = None
if not os.environ.get("GAUSSNET_PURE_PYTHON"):
    try:
        from . import _ckernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

# batch linear algebra: numpy/BLAS always
mlp3_forward = _pykernels.mlp3_forward
mlp3_backward = _pykernels.mlp3_backward

# per-step kernels: compiled when available
_step_impl = _compiled if _compiled is not None else _pykernels
gae_scan = _step_impl.gae_scan
rollout_episode = _step_impl.rollout_episode
policy_route = _step_impl.policy_route


def available_backends():
    """Name -> module for every importable backend (for tests/benchmarks)."""
    from . import _pykernels

    backends = {"python": _pykernels}
    try:
        from . import _ckernels  # type: ignore[attr-defined]

        backends["cython"] = _ckernels
    except ImportError:
        pass
    return backends
