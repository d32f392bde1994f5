"""Eigen-structure of the 6x6 linearized systems.

Covers decomposition with deterministic ordering, classification of
equilibria (optionally restricted to the constraint null space on S^2),
real stable-subspace bases for manifold seeding, and constraint null
spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import AmbiguousMode, EmptySubspace, NoConvergence, RankDeficient

RESIDUAL_TOL = 1e-10
CONSTRAINT_FILTER_TOL = 1e-8
BOUNDARY_TOL = 1e-9


@dataclass
class EigenStructure:
    """Eigenvalues/vectors sorted by (Re, Im) ascending; vectors unit-norm."""

    values: np.ndarray       # (6,) complex
    vectors: np.ndarray      # (6, 6) complex, columns
    residuals: np.ndarray    # (6,)


@dataclass
class Classification:
    n_stable: int
    n_unstable: int
    n_center: int
    label: str               # asymptotically-stable | stable-focus | saddle
    #                        # | center-degenerate


@dataclass
class SubspaceBasis:
    """Real basis vectors (columns of a 6xk matrix) with their eigenvalues."""

    vectors: np.ndarray      # (6, k)
    eigenvalues: np.ndarray  # (k,) complex

    @property
    def dim(self):
        return self.vectors.shape[1]


def eigen_decompose(a) -> EigenStructure:
    """Dense eigen-decomposition with a deterministic sort and phase.

    Backed by LAPACK's bounded-iteration QR algorithm; a failed iteration
    surfaces as NoConvergence.
    """
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    try:
        w, v = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    order = np.lexsort((w.imag, w.real))
    w = w[order]
    v = v[:, order]
    for i in range(v.shape[1]):
        col = v[:, i] / np.linalg.norm(v[:, i])
        # deterministic phase: largest-magnitude component real positive
        k = int(np.argmax(np.abs(col)))
        col = col * (np.conj(col[k]) / np.abs(col[k]))
        v[:, i] = col
    scale = max(np.linalg.norm(a), 1.0)
    residuals = np.array([np.linalg.norm(a @ v[:, i] - w[i] * v[:, i])
                          for i in range(len(w))])
    if np.any(residuals > RESIDUAL_TOL * scale):
        raise NoConvergence(f"eigenpair residual {residuals.max():.3e} exceeds "
                            f"{RESIDUAL_TOL * scale:.3e}")
    return EigenStructure(values=w, vectors=v, residuals=residuals)


def _constraint_mask(e: EigenStructure, c):
    """Modes whose eigenvectors satisfy C v = 0; the rest are spurious."""
    if c is None:
        return np.ones(len(e.values), dtype=bool)
    c = np.asarray(c, dtype=float)
    if np.linalg.matrix_rank(c, tol=1e-10) != 2:
        raise RankDeficient("constraint matrix must have rank 2")
    res = np.array([np.linalg.norm(c @ e.vectors[:, i])
                    / np.linalg.norm(e.vectors[:, i])
                    for i in range(len(e.values))])
    return res <= CONSTRAINT_FILTER_TOL


def classify_equilibrium(e: EigenStructure, c=None) -> Classification:
    """Count stable/unstable modes, excluding constraint-violating ones."""
    mask = _constraint_mask(e, c)
    values = e.values[mask]
    if np.any(np.abs(values.real) < BOUNDARY_TOL):
        raise AmbiguousMode(
            "eigenvalue on the stability boundary after restriction: "
            f"{values[np.abs(values.real) < BOUNDARY_TOL]}")
    n_stable = int(np.sum(values.real < 0.0))
    n_unstable = int(np.sum(values.real > 0.0))
    if n_unstable > 0:
        label = "saddle"
    elif np.all(np.abs(values.imag) > BOUNDARY_TOL):
        label = "stable-focus"
    else:
        label = "asymptotically-stable"
    return Classification(n_stable=n_stable, n_unstable=n_unstable,
                          n_center=0, label=label)


def stable_subspace(e: EigenStructure, c=None) -> SubspaceBasis:
    """Real basis of the stable eigenspace.

    Complex-conjugate pairs are realified as {Re v, Im v}; when a
    constraint is given, only modes in its null space are kept.
    """
    mask = _constraint_mask(e, c)
    cols = []
    vals = []
    for i in range(len(e.values)):
        if not mask[i]:
            continue
        lam = e.values[i]
        if lam.real >= -BOUNDARY_TOL:
            continue
        if lam.imag < -BOUNDARY_TOL:
            continue  # handled via the conjugate partner
        v = e.vectors[:, i]
        if lam.imag > BOUNDARY_TOL:
            cols.extend([v.real, v.imag])
            vals.extend([lam, np.conj(lam)])
        else:
            cols.append(v.real)
            vals.append(lam)
    if not cols:
        raise EmptySubspace("no stable modes")
    basis = np.column_stack(cols)
    if np.linalg.svd(basis, compute_uv=False).min() <= 1e-8:
        raise EmptySubspace("stable basis is numerically dependent")
    return SubspaceBasis(vectors=basis, eigenvalues=np.array(vals))


def nullspace_basis(c) -> SubspaceBasis:
    """Orthonormal basis of the null space of a rank-2 2x6 constraint."""
    c = np.asarray(c, dtype=float)
    u, s, vt = np.linalg.svd(c)
    if np.sum(s > 1e-10) != 2:
        raise RankDeficient(f"expected rank 2, singular values {s}")
    basis = vt[2:].T  # (6, 4)
    return SubspaceBasis(vectors=basis,
                         eigenvalues=np.zeros(basis.shape[1], dtype=complex))


def paper_style_vector(value, vector):
    """Rescale an eigenvector so its configuration part leads with 1.

    Reproduces the e_i + lambda e_{i+3} convention for decoupled modes;
    vectors with a negligible configuration part are scaled by their
    largest component instead.
    """
    v = np.asarray(vector, dtype=complex)
    top = v[:3]
    if np.linalg.norm(top) > 1e-9:
        k = int(np.argmax(np.abs(top)))
        return v / top[k]
    k = int(np.argmax(np.abs(v)))
    return v / v[k]


def _fmt_complex(z, digits=4):
    if abs(z.imag) < 5e-5:
        return f"{z.real:.{digits}f}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.{digits}f}{sign}{abs(z.imag):.{digits}f}i"


def format_eigen_table(e: EigenStructure, digits=4):
    """Human-readable table: one row per mode, lambda_i then v_i."""
    lines = []
    for i in range(len(e.values)):
        v = paper_style_vector(e.values[i], e.vectors[:, i])
        terms = []
        for j in range(6):
            z = v[j]
            if abs(z) < 5e-5:
                continue
            coeff = _fmt_complex(z, digits)
            if coeff == "1.0000":
                terms.append(f"e{j + 1}")
            elif coeff == "-1.0000":
                terms.append(f"-e{j + 1}")
            else:
                terms.append(f"({coeff})e{j + 1}")
        rhs = " + ".join(terms).replace("+ -", "- ")
        lines.append(f"lambda_{i + 1} = {_fmt_complex(e.values[i], digits):>15}"
                     f"   v_{i + 1} = {rhs}")
    return "\n".join(lines)
