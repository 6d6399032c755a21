"""Small dense-eigensolver helpers."""

import numpy as np

from planar_dipoles.errors import EigensolverError

# relative tolerance under which two coefficient magnitudes count as tied
GAUGE_TIE_RTOL = 1e-9


def fix_gauge(vectors):
    """Rotate each column so its largest-magnitude entry is real and >= 0.

    Ties (within GAUGE_TIE_RTOL) go to the smallest index.
    """
    vectors = np.array(vectors, dtype=complex, copy=True)
    mags = np.abs(vectors)
    peak = mags.max(axis=0)
    # first row index reaching the (tie-tolerant) peak in each column
    rows = np.argmax(mags >= peak * (1.0 - GAUGE_TIE_RTOL), axis=0)
    cols = np.arange(vectors.shape[1])
    pivot = vectors[rows, cols]
    phase = np.ones_like(pivot)
    nonzero = peak > 0
    phase[nonzero] = np.conj(pivot[nonzero]) / mags[rows, cols][nonzero]
    vectors *= phase
    vectors[rows[nonzero], cols[nonzero]] = mags[rows, cols][nonzero]
    return vectors


def eigh_checked(matrix):
    """Hermitian eigendecomposition that raises instead of returning garbage."""
    try:
        values, vectors = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigh failed: {exc}") from exc
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(vectors))):
        raise EigensolverError("eigh returned non-finite values")
    return values, vectors
