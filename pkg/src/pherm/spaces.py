"""Adapted frames, tensor containers and seeded random generators.

Every tensor in this package is stored componentwise in a fixed adapted
orthonormal frame (e_1, ..., e_d, Je_1, ..., Je_d) of the 2d-dimensional
horizontal space H.  In that frame the metric grid is the identity, J is the
standard block rotation and the fundamental 2-form is omega(X, Y) = g(JX, Y).
When torsion is switched on, tau acts as +1 on span{e_i} and -1 on
span{Je_i}, which fixes the normalization |tau|^2 = 2d.

Scalar products follow the 2-form convention throughout: for 2-tensors
<s, t> = (1/2) sum_ij s_ij t_ij, and for double forms <P, Q> is half the
trace of the composed induced operators on wedge 2-vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

# Identities that are plain products/sums of O(d^2) frame components are
# checked to EXACT_TOL; doubly contracted O(d^4) identities to TOL.
EXACT_TOL = 1e-12
TOL = 1e-9

CURV4_TAGS = (
    "pair_symmetric",
    "bianchi_closed",
    "j_plus",
    "j_minus",
    "tau_plus",
    "tau_minus",
    "primitive",
)

SYMMETRIES = ("symmetric", "antisymmetric", "general")


class SpaceMismatchError(ValueError):
    """Two tensors living on different horizontal spaces were combined."""


class TagError(ValueError):
    """A declared or requested curvature tag cannot be satisfied."""


@dataclass(frozen=True, eq=False)
class HorizontalSpace:
    """A 2d-dimensional Euclidean space with compatible complex structure.

    Optional torsion data (tau, A, B) model the pseudo-Hermitian torsion of a
    contact metric structure: tau is g-symmetric, trace free, anticommutes
    with J and squares to the identity under the |tau|^2 = 2d normalization.
    A(X, Y) = g(tau X, Y) and B(X, Y) = omega(tau X, Y); both are symmetric
    because J tau is g-symmetric.
    """

    d: int
    g: np.ndarray
    J: np.ndarray
    omega: np.ndarray
    tau: Optional[np.ndarray] = None
    A: Optional[np.ndarray] = None
    B: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return 2 * self.d

    @property
    def has_torsion(self) -> bool:
        return self.tau is not None

    def require_torsion(self):
        if self.tau is None:
            raise ValueError("operation requires a space with torsion")

    def __repr__(self):  # keep reprs short, the grids are not informative
        return f"HorizontalSpace(d={self.d}, torsion={self.has_torsion})"


def make_space(d: int, with_torsion: bool = False) -> HorizontalSpace:
    """Build the adapted-frame model space of half-dimension d.

    Parameters
    ----------
    d : int
        Half-dimension; the horizontal space has dimension 2d.
    with_torsion : bool
        If set, equip the space with tau = diag(+1 on e's, -1 on Je's) and
        the associated bilinear forms A, B.
    """
    if d < 1:
        raise ValueError(f"half-dimension must be >= 1, got {d}")
    n = 2 * d
    g = np.eye(n)
    J = np.zeros((n, n))
    J[d:, :d] = np.eye(d)  # J e_i = e_{d+i}
    J[:d, d:] = -np.eye(d)  # J(Je_i) = -e_i
    omega = J.T.copy()  # omega(X, Y) = g(JX, Y) = X^T J^T Y
    if not with_torsion:
        return HorizontalSpace(d, g, J, omega)
    tau = np.diag(np.concatenate([np.ones(d), -np.ones(d)]))
    A = tau.copy()  # A(X, Y) = g(tau X, Y)
    B = tau @ omega  # B(X, Y) = omega(tau X, Y); equals (J tau)^T, symmetric
    return HorizontalSpace(d, g, J, omega, tau, A, B)


def _check_same_space(a, b):
    if a.space is not b.space:
        # allow structurally identical spaces built separately
        sa, sb = a.space, b.space
        if sa.d != sb.d or sa.has_torsion != sb.has_torsion:
            raise SpaceMismatchError("tensors live on incompatible spaces")


@dataclass(frozen=True, eq=False)
class Bil2:
    """A bilinear form on H with a declared symmetry flag."""

    space: HorizontalSpace
    entries: np.ndarray
    symmetry: str = "general"

    def __post_init__(self):
        n = self.space.n
        if self.entries.shape != (n, n):
            raise ValueError(f"expected shape {(n, n)}, got {self.entries.shape}")
        if self.symmetry not in SYMMETRIES:
            raise ValueError(f"unknown symmetry flag {self.symmetry!r}")
        scale = max(1.0, float(np.max(np.abs(self.entries))))
        if self.symmetry == "symmetric":
            if np.max(np.abs(self.entries - self.entries.T)) > TOL * scale:
                raise ValueError("entries are not symmetric")
        elif self.symmetry == "antisymmetric":
            if np.max(np.abs(self.entries + self.entries.T)) > TOL * scale:
                raise ValueError("entries are not antisymmetric")

    def __add__(self, other):
        _check_same_space(self, other)
        sym = self.symmetry if self.symmetry == other.symmetry else "general"
        return Bil2(self.space, self.entries + other.entries, sym)

    def __sub__(self, other):
        _check_same_space(self, other)
        sym = self.symmetry if self.symmetry == other.symmetry else "general"
        return Bil2(self.space, self.entries - other.entries, sym)

    def __mul__(self, c):
        return Bil2(self.space, float(c) * self.entries, self.symmetry)

    __rmul__ = __mul__


def metric_form(space: HorizontalSpace) -> Bil2:
    return Bil2(space, space.g.copy(), "symmetric")


def fundamental_form(space: HorizontalSpace) -> Bil2:
    return Bil2(space, space.omega.copy(), "antisymmetric")


def torsion_forms(space: HorizontalSpace) -> tuple[Bil2, Bil2]:
    """The pair (A, B) of symmetric torsion bilinear forms."""
    space.require_torsion()
    return (
        Bil2(space, space.A.copy(), "symmetric"),
        Bil2(space, space.B.copy(), "symmetric"),
    )


# ---------------------------------------------------------------------------
# raw grid operations shared by the container verifiers and the algebra layer
# ---------------------------------------------------------------------------

def antisym_pairs_grid(q: np.ndarray) -> np.ndarray:
    """Project onto tensors antisymmetric in slots (1,2) and (3,4)."""
    q = 0.5 * (q - np.einsum("yxzw->xyzw", q))
    return 0.5 * (q - np.einsum("xywz->xyzw", q))


def pair_sym_grid(q: np.ndarray) -> np.ndarray:
    return 0.5 * (q + np.einsum("zwxy->xyzw", q))


def bianchi_grid(q: np.ndarray) -> np.ndarray:
    """Cyclic Bianchi sum b(Q)(X,Y,Z,W) = Q(X,Y,Z,W)+Q(Z,X,Y,W)+Q(Y,Z,X,W)."""
    return q + np.einsum("zxyw->xyzw", q) + np.einsum("yzxw->xyzw", q)


def bianchi_project_grid(q: np.ndarray) -> np.ndarray:
    # on pair-symmetric tensors b acts as 3*Id on the fully antisymmetric part
    return q - bianchi_grid(q) / 3.0


def conj_pair_grid(q: np.ndarray, P: np.ndarray, first: bool) -> np.ndarray:
    """Replace (X,Y) -> (PX, PY) in the first or second slot pair."""
    if first:
        return np.einsum("ax,by,abzw->xyzw", P, P, q)
    return np.einsum("cz,dw,xycd->xyzw", P, P, q)


def split_average_grid(q: np.ndarray, P: np.ndarray, sign: int) -> np.ndarray:
    """The +/- projection averaging P-conjugation over both slot pairs."""
    q1 = conj_pair_grid(q, P, first=True)
    q2 = conj_pair_grid(q, P, first=False)
    q12 = conj_pair_grid(q1, P, first=False)
    return 0.25 * (q + sign * q1 + sign * q2 + q12)


def hat_2form_grid(q: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """Induced action on (possibly vector-valued) 2-forms: contract the
    first slot pair, (Q^ gamma)(X,Y) = (1/2) sum_ij Q(e_i,e_j,X,Y) gamma_ij."""
    return 0.5 * np.einsum("ijxy,ij...->xy...", q, gamma)


def ring_grid(q: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Curvature action on (possibly vector-valued) 2-tensors:
    (Q0 s)(X,Y) = sum_ij Q(e_i,X,Y,e_j) s_ij."""
    return np.einsum("ixyj,ij...->xy...", q, s)


def ricci_grid(q: np.ndarray) -> np.ndarray:
    return np.einsum("ixiy->xy", q)


def wedge_trace(space: HorizontalSpace, gamma: np.ndarray) -> float:
    """Adjoint-Lefschetz trace of a 2-form, (1/2) tr gamma(., J.)."""
    return 0.5 * float(np.einsum("ab,ba->", gamma, space.J))


def sym_product_grid(h: np.ndarray, k: np.ndarray) -> np.ndarray:
    prod = np.einsum("xy,zw->xyzw", h, k)
    return prod + np.einsum("zwxy->xyzw", prod)


def kulkarni_grid(h: np.ndarray, k: np.ndarray) -> np.ndarray:
    s = sym_product_grid(h, k)
    return np.einsum("xzyw->xyzw", s) - np.einsum("xwyz->xyzw", s)


def primitive_grid(space: HorizontalSpace, q: np.ndarray) -> np.ndarray:
    d = space.d
    qw = hat_2form_grid(q, space.omega)
    lam = wedge_trace(space, qw)
    core = sym_product_grid(qw, space.omega)
    ww = sym_product_grid(space.omega, space.omega)
    return q - core / d + lam * ww / (2.0 * d * d)


def inner2(s: np.ndarray, t: np.ndarray) -> float:
    """Half-contraction scalar product of (vector-valued) 2-tensors."""
    return 0.5 * float(np.sum(s * t))


def dot4(p: np.ndarray, q: np.ndarray) -> float:
    """Trace of the composition of the induced wedge operators."""
    return 0.25 * float(np.einsum("cdab,abcd->", p, q))


def _tag_residual(space: HorizontalSpace, q: np.ndarray, tag: str) -> float:
    if tag == "pair_symmetric":
        return float(np.max(np.abs(q - pair_sym_grid(q))))
    if tag == "bianchi_closed":
        return float(np.max(np.abs(bianchi_grid(q))))
    if tag == "j_plus":
        return float(np.max(np.abs(q - split_average_grid(q, space.J, +1))))
    if tag == "j_minus":
        return float(np.max(np.abs(q - split_average_grid(q, space.J, -1))))
    if tag == "tau_plus":
        space.require_torsion()
        return float(np.max(np.abs(q - split_average_grid(q, space.tau, +1))))
    if tag == "tau_minus":
        space.require_torsion()
        return float(np.max(np.abs(q - split_average_grid(q, space.tau, -1))))
    if tag == "primitive":
        return float(np.max(np.abs(hat_2form_grid(q, space.omega) @ space.omega.T)))
    raise TagError(f"unknown tag {tag!r}")


@dataclass(frozen=True, eq=False)
class Curv4:
    """A 4-tensor on H, antisymmetric in both slot pairs, with verified tags."""

    space: HorizontalSpace
    entries: np.ndarray
    tags: frozenset = frozenset()

    def __post_init__(self):
        n = self.space.n
        if self.entries.shape != (n, n, n, n):
            raise ValueError(f"expected shape {(n,) * 4}, got {self.entries.shape}")
        unknown = set(self.tags) - set(CURV4_TAGS)
        if unknown:
            raise TagError(f"unknown tags {sorted(unknown)}")
        scale = max(1.0, float(np.max(np.abs(self.entries))))
        if np.max(np.abs(self.entries - antisym_pairs_grid(self.entries))) > TOL * scale:
            raise ValueError("entries are not antisymmetric in both slot pairs")
        for tag in self.tags:
            if _tag_residual(self.space, self.entries, tag) > TOL * scale:
                raise TagError(f"declared tag {tag!r} fails its projector check")

    def has(self, tag: str) -> bool:
        return tag in self.tags

    def __add__(self, other):
        _check_same_space(self, other)
        return Curv4(self.space, self.entries + other.entries, self.tags & other.tags)

    def __sub__(self, other):
        _check_same_space(self, other)
        return Curv4(self.space, self.entries - other.entries, self.tags & other.tags)

    def __mul__(self, c):
        return Curv4(self.space, float(c) * self.entries, self.tags)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Curv4(d={self.space.d}, tags={sorted(self.tags)})"


def wedge_pairs(space: HorizontalSpace) -> list[tuple[int, int]]:
    """Lexicographic basis enumeration of wedge 2-vectors e_i ^ e_j, i < j."""
    n = space.n
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass(frozen=True, eq=False)
class Endo2Forms:
    """Grid of the operator induced on wedge 2-vectors by a 4-tensor."""

    space: HorizontalSpace
    entries: np.ndarray

    def __post_init__(self):
        m = len(wedge_pairs(self.space))
        if self.entries.shape != (m, m):
            raise ValueError(f"expected shape {(m, m)}, got {self.entries.shape}")

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries))


@dataclass(frozen=True, eq=False)
class ComplexFrame:
    """Type (1,0) frame Z_i = (e_i - sqrt(-1) Je_i)/sqrt(2)."""

    space: HorizontalSpace
    Z: np.ndarray  # (d, 2d) complex

    def __post_init__(self):
        d, n = self.space.d, self.space.n
        if self.Z.shape != (d, n):
            raise ValueError(f"expected shape {(d, n)}, got {self.Z.shape}")


def complexify(space: HorizontalSpace) -> ComplexFrame:
    d, n = space.d, space.n
    Z = (np.eye(d, n) - 1j * space.J[:, :d].T) / np.sqrt(2.0)
    return ComplexFrame(space, Z)


# ---------------------------------------------------------------------------
# seeded random generators for property tests
# ---------------------------------------------------------------------------

def random_bil2(space: HorizontalSpace, symmetry: str, seed) -> Bil2:
    """Deterministic random bilinear form with the requested symmetry."""
    if symmetry not in SYMMETRIES:
        raise ValueError(f"unknown symmetry flag {symmetry!r}")
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((space.n, space.n))
    if symmetry == "symmetric":
        m = 0.5 * (m + m.T)
    elif symmetry == "antisymmetric":
        m = 0.5 * (m - m.T)
    return Bil2(space, m, symmetry)


_CONTRADICTORY = [
    {"j_plus", "j_minus"},
    {"tau_plus", "tau_minus"},
]


def random_curv4(space: HorizontalSpace, tags: Iterable[str], seed) -> Curv4:
    """Deterministic random 4-tensor projected onto the requested tag set.

    The requested tags are enforced by alternating the linear projectors
    until convergence; a tag set whose subspaces intersect trivially (or
    contradict outright) is rejected.
    """
    tags = frozenset(tags)
    unknown = tags - set(CURV4_TAGS)
    if unknown:
        raise TagError(f"unknown tags {sorted(unknown)}")
    for clash in _CONTRADICTORY:
        if clash <= tags:
            raise TagError(f"contradictory tag set: {sorted(clash)}")
    if ("bianchi_closed" in tags or "primitive" in tags) and "pair_symmetric" not in tags:
        raise TagError("bianchi_closed/primitive projections require pair_symmetric")
    if {"tau_plus", "tau_minus"} & tags:
        space.require_torsion()

    rng = np.random.default_rng(seed)
    q = antisym_pairs_grid(rng.standard_normal((space.n,) * 4))
    for _ in range(200):
        prev = q
        if "pair_symmetric" in tags:
            q = pair_sym_grid(q)
        if "j_plus" in tags:
            q = split_average_grid(q, space.J, +1)
        if "j_minus" in tags:
            q = split_average_grid(q, space.J, -1)
        if "tau_plus" in tags:
            q = split_average_grid(q, space.tau, +1)
        if "tau_minus" in tags:
            q = split_average_grid(q, space.tau, -1)
        if "bianchi_closed" in tags:
            q = bianchi_project_grid(q)
        if "primitive" in tags:
            q = primitive_grid(space, q)
        if np.max(np.abs(q - prev)) < 1e-15:
            break
    scale = float(np.max(np.abs(q)))
    if scale < 1e-10:
        raise TagError(f"tag set {sorted(tags)} admits only the zero tensor at d={space.d}")
    q = q / scale
    for tag in tags:
        if _tag_residual(space, q, tag) > 1e-10:
            raise TagError(f"tag set {sorted(tags)} could not be satisfied jointly")
    return Curv4(space, q, tags)
