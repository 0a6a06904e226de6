"""Hot array kernels used by table propagation and dataset counting.

Two interchangeable backends:

* ``numba`` -- ``@njit``-compiled loops (the default when numba imports).
* ``numpy`` -- vectorized equivalents (``np.bincount`` / fancy indexing).

Both accumulate in identical element order, so results are bit-identical;
the backend is an execution detail, never a semantics switch.  Selection is
controlled by the ``SENTINET_KERNELS`` environment variable: ``numba``,
``numpy``, or ``auto`` (default).  ``benchmarks/bench_kernels.py`` times the
two side by side.
"""

import os

import numpy as np

__all__ = [
    "scatter_multiply",
    "gather_add",
    "safe_ratio",
    "backend",
    "IMPLEMENTATIONS",
]


# -- numpy backend -----------------------------------------------------------

def _np_scatter_multiply(dst, src, idx):
    dst *= src[idx]


def _np_gather_add(src, idx, size):
    return np.bincount(idx, weights=src, minlength=size)


def _np_safe_ratio(num, den):
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den != 0.0)
    return out


_NUMPY_IMPL = {
    "scatter_multiply": _np_scatter_multiply,
    "gather_add": _np_gather_add,
    "safe_ratio": _np_safe_ratio,
}


# -- numba backend -----------------------------------------------------------

def _build_numba_impl():
    from numba import njit

    @njit(cache=True)
    def nb_scatter_multiply(dst, src, idx):
        for i in range(dst.shape[0]):
            dst[i] *= src[idx[i]]

    @njit(cache=True)
    def nb_gather_add(src, idx, size):
        out = np.zeros(size, dtype=np.float64)
        for i in range(src.shape[0]):
            out[idx[i]] += src[i]
        return out

    @njit(cache=True)
    def nb_safe_ratio(num, den):
        out = np.zeros(num.shape[0], dtype=np.float64)
        for i in range(num.shape[0]):
            if den[i] != 0.0:
                out[i] = num[i] / den[i]
        return out

    return {
        "scatter_multiply": nb_scatter_multiply,
        "gather_add": nb_gather_add,
        "safe_ratio": nb_safe_ratio,
    }


def _select_backend():
    mode = os.environ.get("SENTINET_KERNELS", "auto").strip().lower()
    if mode not in ("auto", "numba", "numpy"):
        raise ValueError(f"SENTINET_KERNELS must be auto|numba|numpy, got {mode!r}")
    if mode == "numpy":
        return "numpy", _NUMPY_IMPL, None
    try:
        impl = _build_numba_impl()
        return "numba", impl, None
    except ImportError as exc:
        if mode == "numba":
            raise ImportError("SENTINET_KERNELS=numba but numba is unavailable") from exc
        return "numpy", _NUMPY_IMPL, None


_BACKEND_NAME, _IMPL, _ = _select_backend()

IMPLEMENTATIONS = {"numpy": _NUMPY_IMPL}
if _BACKEND_NAME == "numba":
    IMPLEMENTATIONS["numba"] = _IMPL


def backend() -> str:
    """Name of the active kernel backend ('numba' or 'numpy')."""
    return _BACKEND_NAME


def scatter_multiply(dst: np.ndarray, src: np.ndarray, idx: np.ndarray) -> None:
    """In place: dst[i] *= src[idx[i]].  dst and idx have equal length."""
    _IMPL["scatter_multiply"](dst, src, idx)


def gather_add(src: np.ndarray, idx: np.ndarray, size: int) -> np.ndarray:
    """Return out with out[idx[i]] += src[i], accumulated in index order."""
    return _IMPL["gather_add"](src, idx, size)


def safe_ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """Elementwise num/den with 0 wherever den == 0 (annihilated mass stays 0)."""
    return _IMPL["safe_ratio"](num, den)
