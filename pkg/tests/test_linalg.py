import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kovatlas.linalg import balance, eigvals, hessenberg, split_zero


def sorted_ev(ev):
    ev = np.asarray(ev, dtype=complex)
    return ev[np.lexsort((np.round(ev.imag, 8), np.round(ev.real, 8)))]


def match(ev, ref, tol):
    # greedy matching is fine for the well-separated spectra used here
    ref = list(ref)
    for v in ev:
        i = int(np.argmin([abs(v - r) for r in ref]))
        assert abs(v - ref[i]) <= tol
        ref.pop(i)


@given(arrays(np.float64, (6, 6), elements=st.floats(-5, 5, allow_nan=False)))
def test_eigvals_vs_numpy(A):
    ev = eigvals(A)
    ref = np.linalg.eigvals(A)
    scale = max(1.0, np.linalg.norm(A))
    assert ev.shape == (6,)
    # eigenvalue sensitivity scales like sqrt(eps) for defective blocks
    match(ev, ref, 1e-6 * scale)
    assert abs(np.sum(ev) - np.trace(A)) <= 1e-9 * scale


def test_known_spectrum():
    A = np.array([[0.0, -8.0], [8.0, 0.0]])
    match(eigvals(A), [8j, -8j], 1e-12)
    D = np.diag([3.0, -1.0, 2.0, 0.0])
    match(eigvals(D), [3, -1, 2, 0], 1e-14)


def test_empty_and_scalar():
    assert eigvals(np.zeros((0, 0))).size == 0
    assert eigvals([[2.5]])[0] == 2.5


def test_hessenberg_structure(rng):
    A = rng.normal(size=(6, 6))
    H = hessenberg(A)
    assert np.allclose(np.tril(H, -2), 0)
    match(np.linalg.eigvals(H), np.linalg.eigvals(A), 1e-9)


def test_balance_preserves_spectrum():
    A = np.array([[1.0, 1e6, 0], [1e-6, 2.0, 1e5], [0, 1e-5, 3.0]])
    match(np.linalg.eigvals(balance(A)), np.linalg.eigvals(A), 1e-8)


def test_split_zero():
    zero, rest = split_zero(np.array([1e-14, 2.0, -1e-13j, 3j]), 1.0, 1e-10)
    assert len(zero) == 2 and len(rest) == 2
