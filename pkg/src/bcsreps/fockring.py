"""Finite Fock-space realization of paired fermion modes.

``P`` pairs give ``2P`` fermion modes. Pair ``p`` holds the modes
``(k, +)`` at index ``2p`` and ``(-k, -)`` at index ``2p + 1``; Jordan-Wigner
sign strings follow that total order, and the vacuum is basis column 0.

Everything here is exact linear algebra on matrices of size ``4**P``, used
as an oracle for the closed forms of the pairing transformation, the
unitary ``exp(iQ)``, the mean-field spectrum and the anomalous average.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from itertools import product

import numpy as np
from scipy import linalg, sparse
from scipy.sparse import linalg as splinalg

from .errors import SizeError

MAX_PAIRS = 6


@dataclass(frozen=True)
class OperatorSet:
    """Annihilators ``a[i]`` for the ``2P`` modes, as sparse CSR matrices."""

    P: int
    a: tuple

    @property
    def dim(self):
        return 4**self.P

    @property
    def n_modes(self):
        return 2 * self.P

    def adag(self, i):
        return self.a[i].conj().T.tocsr()

    def identity(self):
        return sparse.identity(self.dim, dtype=complex, format="csr")


def mode_index(pair, branch):
    """Column-order index of a mode; ``branch`` 0 is ``(k,+)``, 1 is ``(-k,-)``."""
    if branch not in (0, 1):
        raise ValueError("branch must be 0 or 1")
    return 2 * pair + branch


@cache
def build_mode_operators(P: int) -> OperatorSet:
    """Jordan-Wigner annihilators for ``P`` pairs (``dim = 4**P``)."""
    if not 1 <= P <= MAX_PAIRS:
        raise SizeError(f"pair count must lie in [1, {MAX_PAIRS}], got {P}")
    n = 2 * P
    lower = sparse.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
    z = sparse.csr_matrix(np.diag([1.0, -1.0]).astype(complex))
    id2 = sparse.identity(2, dtype=complex, format="csr")
    ops = []
    for i in range(n):
        factors = [z] * i + [lower] + [id2] * (n - i - 1)
        op = factors[0]
        for f in factors[1:]:
            op = sparse.kron(op, f, format="csr")
        op.eliminate_zeros()
        ops.append(op)
    return OperatorSet(P=P, a=tuple(ops))


@dataclass(frozen=True)
class RingReport:
    max_deviation: float
    tol: float
    worst: str
    vacuum_residual: float

    @property
    def passed(self):
        return self.max_deviation <= self.tol and self.vacuum_residual <= self.tol


def _fro(m):
    return float(splinalg.norm(m)) if m.nnz else 0.0


def verify_ring(ops: OperatorSet, tol: float = 1e-12) -> RingReport:
    """Check all canonical anticommutators.

    The deviation of each relation is its Frobenius norm, an upper bound on
    the operator norm. The vacuum residual is ``max_i |a_i e_0|``; it is only
    meaningful for untransformed operators and is reported, not judged,
    when the set came from :func:`bogoliubov_transform`.
    """
    eye = ops.identity()
    adags = [ops.adag(i) for i in range(ops.n_modes)]
    worst, label = 0.0, ""
    for i, j in product(range(ops.n_modes), repeat=2):
        ai, aj = ops.a[i], ops.a[j]
        checks = {
            f"{{a{i}, a{j}^+}}": ai @ adags[j] + adags[j] @ ai - (eye if i == j else 0 * eye),
            f"{{a{i}, a{j}}}": ai @ aj + aj @ ai,
            f"{{a{i}^+, a{j}^+}}": adags[i] @ adags[j] + adags[j] @ adags[i],
        }
        for name, m in checks.items():
            dev = _fro(m)
            if dev > worst:
                worst, label = dev, name
    vac = np.zeros(ops.dim, dtype=complex)
    vac[0] = 1.0
    vacuum = max(float(np.abs(a @ vac).max()) for a in ops.a)
    return RingReport(max_deviation=worst, tol=tol, worst=label, vacuum_residual=vacuum)


def _check_alphas(ops, alphas):
    alphas = np.asarray(alphas, dtype=float)
    if alphas.shape != (ops.P,):
        raise SizeError(f"expected {ops.P} angles, got shape {alphas.shape}")
    return alphas


def bogoliubov_transform(ops: OperatorSet, alphas) -> OperatorSet:
    """Pairwise mixing ``c = cos(a) a +/- sin(a) a^+`` of the two partner modes."""
    alphas = _check_alphas(ops, alphas)
    c = list(ops.a)
    for p, alpha in enumerate(alphas):
        i, j = 2 * p, 2 * p + 1
        u, v = np.cos(alpha), np.sin(alpha)
        c[i] = (u * ops.a[i] + v * ops.adag(j)).tocsr()
        c[j] = (u * ops.a[j] - v * ops.adag(i)).tocsr()
    return OperatorSet(P=ops.P, a=tuple(c))


def pair_annihilator(ops: OperatorSet, p):
    """``a_{-k,-} a_{k,+}`` for pair ``p``."""
    return (ops.a[2 * p + 1] @ ops.a[2 * p]).tocsr()


def pair_generator(ops: OperatorSet, p):
    """Hermitian ``T_p = i (a^+_{k,+} a^+_{-k,-} - a_{-k,-} a_{k,+})``."""
    b = pair_annihilator(ops, p)
    return (1j * (b.conj().T - b)).tocsr()


def generator_Q(ops: OperatorSet, alphas):
    """``Q = sum_p alpha_p T_p`` as a sparse matrix."""
    alphas = _check_alphas(ops, alphas)
    Q = sparse.csr_matrix((ops.dim, ops.dim), dtype=complex)
    for p, alpha in enumerate(alphas):
        Q = Q + alpha * pair_generator(ops, p)
    return Q.tocsr()


def exp_iQ(ops: OperatorSet, alphas):
    """``exp(iQ)`` from the finite product of per-pair factors.

    Each factor is ``1 + i T sin(alpha) + T^2 (cos(alpha) - 1)``, exact because
    ``T^3 = T`` on every pair. The factors act on disjoint even subspaces and
    commute.
    """
    alphas = _check_alphas(ops, alphas)
    U = ops.identity()
    eye = ops.identity()
    for p, alpha in enumerate(alphas):
        T = pair_generator(ops, p)
        U = U @ (eye + 1j * np.sin(alpha) * T + (np.cos(alpha) - 1.0) * (T @ T))
    return U.toarray()


def vacuum_overlap(alphas):
    """Closed-form ``<0| exp(iQ) |0> = prod cos(alpha_p)``; any number of pairs."""
    return float(np.prod(np.cos(np.asarray(alphas, dtype=float))))


def vacuum_overlap_matrix(ops: OperatorSet, alphas):
    """The same overlap read off the ``exp(iQ)`` matrix."""
    return complex(exp_iQ(ops, alphas)[0, 0])


def build_h02(ops: OperatorSet, xi, Delta, mask=None, coupling=None):
    """Dense mean-field pairing Hamiltonian.

    ``sum_p xi_p (n_{k+} + n_{-k-}) - Delta sum_{p in mask} (a^+a^+ + aa)``,
    plus the constant ``Delta^2 / coupling`` when ``coupling`` (``g/V``) is
    given. ``mask`` selects the pairs inside the Debye window; default all.
    """
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (ops.P,):
        raise SizeError(f"expected {ops.P} energies, got shape {xi.shape}")
    if Delta < 0:
        raise ValueError("Delta must be non-negative")
    mask = np.ones(ops.P, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    H = sparse.csr_matrix((ops.dim, ops.dim), dtype=complex)
    for p in range(ops.P):
        for i in (2 * p, 2 * p + 1):
            H = H + xi[p] * (ops.adag(i) @ ops.a[i])
        if mask[p]:
            b = pair_annihilator(ops, p)
            H = H - Delta * (b.conj().T + b)
    H = H.toarray()
    if coupling is not None:
        H += Delta**2 / coupling * np.eye(ops.dim)
    return H


def h02_closed_form_spectrum(xi, Delta, mask=None, coupling=None):
    """All eigenvalues from the diagonal quasiparticle form, sorted.

    Inside the window a pair contributes ``xi - E`` plus ``E`` per occupied
    quasiparticle, ``E = sqrt(xi^2 + Delta^2)``; outside it contributes
    ``xi`` per occupied fermion.
    """
    xi = np.asarray(xi, dtype=float)
    mask = np.ones(xi.size, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    levels = np.zeros(1)
    for x, m in zip(xi, mask):
        if m:
            E = np.hypot(x, Delta)
            pair = (x - E) + E * np.array([0.0, 1.0, 1.0, 2.0])
        else:
            pair = x * np.array([0.0, 1.0, 1.0, 2.0])
        levels = (levels[:, None] + pair[None, :]).ravel()
    if coupling is not None:
        levels = levels + Delta**2 / coupling
    return np.sort(levels)


def thermal_anomalous_average(h, ops: OperatorSet, beta, pair):
    """``Tr(a_{-k,-} a_{k,+} e^{-beta h}) / Tr(e^{-beta h})`` by eigendecomposition."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    w, V = linalg.eigh(h)
    x = -beta * (w - w[0])
    if not np.all(np.isfinite(x)):
        raise OverflowError(
            "Boltzmann exponents are not finite; rescale energies or lower beta")
    weights = np.exp(x)
    b = pair_annihilator(ops, pair)
    diag = np.einsum("in,in->n", V.conj(), b @ V)
    return complex(np.dot(weights, diag) / weights.sum())


def self_consistent_gap(ops: OperatorSet, xi, coupling, beta, mask=None,
                        delta0=1.0, tol=1e-12, max_iter=2000):
    """Iterate ``Delta <- coupling * sum_p <a_{-k,-} a_{k,+}>`` to a fixed point.

    Returns the converged gap and the number of iterations used.
    """
    mask = np.ones(ops.P, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    delta = float(delta0)
    for it in range(1, max_iter + 1):
        h = build_h02(ops, xi, delta, mask)
        new = coupling * sum(
            thermal_anomalous_average(h, ops, beta, p).real
            for p in range(ops.P) if mask[p])
        if abs(new - delta) <= tol * max(1.0, abs(new)):
            return new, it
        delta = new
    raise RuntimeError(f"gap iteration did not converge in {max_iter} steps")


def conjugation_residual(ops: OperatorSet, alphas):
    """``max_i |exp(iQ) a_i exp(-iQ) - c_i|`` (Frobenius) against :func:`bogoliubov_transform`."""
    U = exp_iQ(ops, alphas)
    Ud = U.conj().T
    c = bogoliubov_transform(ops, alphas)
    return max(float(np.linalg.norm(U @ (ops.a[i] @ Ud) - c.a[i].toarray()))
               for i in range(ops.n_modes))
