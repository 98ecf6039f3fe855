"""Finite-scale witnesses for weak containment via Hilbert-Schmidt operators.

Groups are the discrete Heisenberg group (elements ``HeisElem``) and Z^d (integer
tuples).  Representations are finite-dimensional and given by generator images.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import DimMismatch, FrameMismatch, InvalidValue, NumericalFailure, PrimMismatch, UnsupportedCosetSpace
from .heisenberg import GEN_X, GEN_Y, GEN_Z, HeisElem, HeisIrrep, heis_prim_of_irrep, shift_clock

UNITARY_TOL = 1e-9


def _as_group_elem(group: str, g, d: int = 1):
    if group == "H3":
        if isinstance(g, HeisElem):
            return g
        return HeisElem(*g)
    if isinstance(g, int):
        g = (g,)
    g = tuple(int(c) for c in g)
    if len(g) != d:
        raise DimMismatch(f"expected an element of Z^{d}")
    return g


def group_mul(group: str, g, h):
    if group == "H3":
        return g * h
    return tuple(a + b for a, b in zip(g, h))


def group_generators(group: str, d: int = 1) -> dict[str, object]:
    if group == "H3":
        return {"X": GEN_X, "Y": GEN_Y, "Z": GEN_Z}
    return {f"e{i + 1}": tuple(int(i == j) for j in range(d)) for i in range(d)}


# ---------------------------------------------------------------- representations


@dataclass(frozen=True, eq=False)
class FinRep:
    """A unitary representation of H3 or Z^d on C^n given by generator images.

    For H3 the images are keyed "X", "Y", "Z"; for Z^d they are keyed "e1", ..., "ed".
    """

    group: str
    n: int
    images: dict[str, np.ndarray]
    d: int = 1

    def __post_init__(self):
        if self.group not in ("H3", "Zd"):
            raise InvalidValue("group must be 'H3' or 'Zd'")
        keys = set(group_generators(self.group, self.d))
        if set(self.images) != keys:
            raise InvalidValue(f"generator images must be keyed {sorted(keys)}")
        imgs = {}
        for k, m in self.images.items():
            m = np.asarray(m, dtype=complex)
            if m.shape != (self.n, self.n):
                raise DimMismatch(f"image of {k} is not {self.n}x{self.n}")
            if np.max(np.abs(m @ m.conj().T - np.eye(self.n))) > UNITARY_TOL:
                raise InvalidValue(f"image of {k} is not unitary")
            imgs[k] = m
        object.__setattr__(self, "images", imgs)
        for a, b in self._relations():
            if np.max(np.abs(a - b)) > UNITARY_TOL:
                raise InvalidValue("group relations fail for the generator images")

    def _relations(self):
        im = self.images
        if self.group == "H3":
            x, y, z = im["X"], im["Y"], im["Z"]
            return [(y @ x, z @ x @ y), (z @ x, x @ z), (z @ y, y @ z)]
        mats = list(im.values())
        return [(a @ b, b @ a) for a, b in itertools.combinations(mats, 2)]

    @classmethod
    def from_heis_irrep(cls, r: HeisIrrep) -> "FinRep":
        return cls("H3", r.n, dict(r.generator_images()))

    @classmethod
    def character(cls, angles, d: int | None = None) -> "FinRep":
        """One-dimensional representation e_i -> exp(2 pi i angles[i]) of Z^d."""
        angles = [float(a) for a in np.atleast_1d(angles)]
        d = len(angles) if d is None else d
        return cls("Zd", 1, {f"e{i + 1}": np.array([[np.exp(2j * np.pi * a)]]) for i, a in enumerate(angles)}, d)

    @cached_property
    def _power_cache(self) -> dict:
        return {}

    def _power(self, key: str, k: int) -> np.ndarray:
        cache = self._power_cache
        if (key, k) not in cache:
            m = self.images[key] if k >= 0 else self.images[key].conj().T
            cache[(key, k)] = np.linalg.matrix_power(m, abs(k))
        return cache[(key, k)]

    def image(self, g) -> np.ndarray:
        g = _as_group_elem(self.group, g, self.d)
        if self.group == "H3":
            return self._power("X", g.x) @ self._power("Y", g.y) @ self._power("Z", g.z)
        out = np.eye(self.n, dtype=complex)
        for i, k in enumerate(g):
            out = out @ self._power(f"e{i + 1}", k)
        return out

    def images_of(self, elems) -> np.ndarray:
        """Stacked images, shape (len(elems), n, n)."""
        return np.stack([self.image(g) for g in elems]) if elems else np.zeros((0, self.n, self.n))


@dataclass(frozen=True, eq=False)
class HSOperator:
    """A Hilbert-Schmidt operator between finite-dimensional spaces."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.atleast_2d(np.asarray(self.matrix, dtype=complex)))

    @cached_property
    def norm(self) -> float:
        return float(np.sqrt(np.real(np.trace(self.matrix.conj().T @ self.matrix))))

    def normalized(self) -> "HSOperator":
        if self.norm == 0:
            raise NumericalFailure("cannot normalize the zero operator")
        return HSOperator(self.matrix / self.norm)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def hs_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, "fro"))


def hs_defect(T: HSOperator, pi: FinRep, rho: FinRep, gens) -> float:
    """max over g of ||T pi(g) - rho(g) T||_2 for T: H_pi -> H_rho."""
    if pi.group != rho.group:
        raise DimMismatch("representations of different groups")
    if T.shape != (rho.n, pi.n):
        raise DimMismatch(f"T has shape {T.shape}, expected {(rho.n, pi.n)}")
    t = T.matrix
    return max((hs_norm(t @ pi.image(g) - rho.image(g) @ t) for g in gens), default=0.0)


# ---------------------------------------------------------------- Folner sets


@dataclass(frozen=True)
class FolnerSet:
    group: str
    N: int
    elements: tuple
    d: int = 1

    @classmethod
    def h3_box(cls, N: int) -> "FolnerSet":
        """{(x, y, z): |x|, |y| <= N, |z| <= N^2}."""
        r = range(-N, N + 1)
        rz = range(-N * N, N * N + 1)
        return cls("H3", N, tuple(HeisElem(x, y, z) for x in r for y in r for z in rz))

    @classmethod
    def zd_box(cls, N: int, d: int = 1) -> "FolnerSet":
        """The cube [0, N)^d."""
        return cls("Zd", N, tuple(itertools.product(range(N), repeat=d)), d)

    @cached_property
    def as_set(self) -> frozenset:
        return frozenset(self.elements)

    def __len__(self):
        return len(self.elements)


def folner_ratio(F: FolnerSet, g) -> Fraction:
    """|gF symmetric-difference F| / |F|, by enumeration."""
    g = _as_group_elem(F.group, g, F.d)
    shifted = {group_mul(F.group, g, h) for h in F.elements}
    return Fraction(len(shifted ^ F.as_set), len(F))


# ---------------------------------------------------------------- Powers-Stormer witness


@dataclass(frozen=True)
class BoundRow:
    generator: str
    defect_sq: float
    folner_ratio: Fraction

    @property
    def bound_ok(self) -> bool:
        return self.defect_sq <= float(self.folner_ratio) + 1e-9


@dataclass(frozen=True, eq=False)
class AmenabilityWitness:
    T: HSOperator
    rows: tuple[BoundRow, ...]


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    a = (a + a.conj().T) / 2
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def amenability_witness(pi: FinRep, F: FolnerSet, check: bool = True) -> AmenabilityWitness:
    """T = ((1/|F|) sum_h pi(h) p pi(h)^*)^{1/2} with p the projection onto e_0.

    Since Tr p = 1 the average has trace one, so T already has ||T||_2 = 1.
    """
    if pi.group != F.group or pi.d != F.d:
        raise DimMismatch("representation and Folner set live on different groups")
    cols = pi.images_of(list(F.elements))[:, :, 0]
    avg = cols.T @ cols.conj() / len(F)
    t = psd_sqrt(avg)
    rows = []
    for name, g in group_generators(pi.group, pi.d).items():
        u = pi.image(g)
        rows.append(BoundRow(name, hs_norm(u @ t @ u.conj().T - t) ** 2, folner_ratio(F, g)))
    if check and not all(r.bound_ok for r in rows):
        bad = [r.generator for r in rows if not r.bound_ok]
        raise NumericalFailure(f"Powers-Stormer bound violated for {bad}")
    return AmenabilityWitness(HSOperator(t).normalized(), tuple(rows))


# ---------------------------------------------------------------- Greenleaf vectors


_COSET_LABELS = {
    # H3 / Gamma1 is labelled by y, H3 / Gamma2 by x; both quotients are Z.
    ("H3", "Gamma1"): lambda g: (g.y,),
    ("H3", "Gamma2"): lambda g: (g.x,),
}


@dataclass(frozen=True)
class CosetAction:
    group: str
    subgroup: str
    d: int = 1

    def __post_init__(self):
        if (self.group, self.subgroup) not in _COSET_LABELS and (self.group, self.subgroup) != ("Zd", "Trivial"):
            raise UnsupportedCosetSpace(f"{self.group}/{self.subgroup} is not supported")

    def label(self, g) -> tuple:
        if self.group == "Zd":
            return tuple(g)
        return _COSET_LABELS[(self.group, self.subgroup)](g)

    def representative(self, label: tuple):
        if self.group == "Zd":
            return label
        return HeisElem(0, label[0], 0) if self.subgroup == "Gamma1" else HeisElem(label[0], 0, 0)

    def act(self, g, label: tuple) -> tuple:
        return self.label(group_mul(self.group, g, self.representative(label)))


@dataclass(frozen=True)
class GreenleafVector:
    values: dict[tuple, float]
    rows: tuple[BoundRow, ...]


def greenleaf_vector(action: CosetAction, F: FolnerSet, basepoint=None, check: bool = True) -> GreenleafVector:
    """f = ((1/|F|) sum_h delta_{h x})^{1/2} on the coset space, with defects of the generators."""
    if action.group != F.group or action.d != F.d:
        raise DimMismatch("coset action and Folner set live on different groups")
    if basepoint is None:
        basepoint = (0,) * (action.d if action.group == "Zd" else 1)
    basepoint = tuple(np.atleast_1d(basepoint).tolist())
    counts: dict[tuple, int] = {}
    for h in F.elements:
        c = action.act(h, basepoint)
        counts[c] = counts.get(c, 0) + 1
    n = len(F)
    f = {c: np.sqrt(k / n) for c, k in counts.items()}
    rows = []
    for name, g in group_generators(action.group, action.d).items():
        moved = {action.act(g, c): v for c, v in f.items()}  # (pi(g) f)(g c) = f(c)
        support = set(moved) | set(f)
        defect_sq = float(sum((moved.get(c, 0.0) - f.get(c, 0.0)) ** 2 for c in support))
        rows.append(BoundRow(name, defect_sq, folner_ratio(F, g)))
    if check and not all(r.bound_ok for r in rows):
        raise NumericalFailure("Greenleaf bound violated")
    return GreenleafVector(f, tuple(rows))


def greenleaf_defect_sq(vec: GreenleafVector, action: CosetAction, g) -> float:
    g = _as_group_elem(action.group, g, action.d)
    moved = {action.act(g, c): v for c, v in vec.values.items()}
    support = set(moved) | set(vec.values)
    return float(sum((moved.get(c, 0.0) - vec.values.get(c, 0.0)) ** 2 for c in support))


# ---------------------------------------------------------------- intertwiners


def exact_intertwiner(pi: HeisIrrep, rho: HeisIrrep, tol: float = 1e-9) -> np.ndarray | None:
    """A unitary W = v^k u^l with W pi(g) = rho(g) W, or None.

    Conjugating by v^k multiplies pi(X) by z^k and fixes pi(Y); conjugating by u^l
    multiplies pi(Y) by z^{-l} and fixes pi(X).  The two exponents are found separately.
    """
    if heis_prim_of_irrep(pi) != heis_prim_of_irrep(rho):
        raise PrimMismatch("the irreducibles have different kernels")
    n = pi.n
    u, v = shift_clock(n, pi.prim.z.a if pi.prim else heis_prim_of_irrep(pi).z.a)
    sources = FinRep.from_heis_irrep(pi), FinRep.from_heis_irrep(rho)

    def conj(w, key):
        return w @ sources[0].images[key] @ w.conj().T

    ks = [k for k in range(n) if np.max(np.abs(conj(np.linalg.matrix_power(v, k), "X") - sources[1].images["X"])) <= tol]
    ls = [l for l in range(n) if np.max(np.abs(conj(np.linalg.matrix_power(u, l), "Y") - sources[1].images["Y"])) <= tol]
    if not ks or not ls:
        return None
    w = np.linalg.matrix_power(v, ks[0]) @ np.linalg.matrix_power(u, ls[0])
    gens = group_generators("H3").values()
    if hs_defect(HSOperator(w).normalized(), *sources, gens) > tol:
        return None
    return w


@dataclass(frozen=True, eq=False)
class ApproxIntertwiner:
    T: HSOperator
    defect: float
    rank: int


def approx_intertwiner_from_states(pi: FinRep, rho: FinRep, reference: FinRep, xi, Q: HSOperator,
                                   E, frame, frame_prime, F, rank_tol: float = 1e-10) -> ApproxIntertwiner:
    """T = sum_{k,k'} q_{k'k} eta'_{k'} eta_k^* with eta_k = sum_h a_{k,h} xi_h.

    e_k = sum_h a_{k,h} reference(h) xi is an orthonormal basis of the span of the
    reference frame, read off the Gram matrix; q is the matrix of Q compressed to that
    span.  ``frame`` and ``frame_prime`` are vectors of H_pi and H_rho indexed by E.
    """
    E = list(E)
    frame = np.asarray(frame, dtype=complex)
    frame_prime = np.asarray(frame_prime, dtype=complex)
    if frame.shape != (len(E), pi.n) or frame_prime.shape != (len(E), rho.n):
        raise FrameMismatch("frames must be indexed by E and live in the spaces of pi and rho")
    xi = np.asarray(xi, dtype=complex)
    if xi.shape != (reference.n,) or Q.shape != (reference.n, reference.n):
        raise DimMismatch("xi and Q must live on the reference representation")
    m = np.stack([reference.image(h) @ xi for h in E], axis=1)
    lam, vecs = np.linalg.eigh(m.conj().T @ m)
    keep = lam > rank_tol * max(1.0, lam.max(initial=0.0))
    if not keep.any():
        raise FrameMismatch("the reference frame spans the zero space")
    a = (vecs[:, keep] / np.sqrt(lam[keep])).T  # a[k, h]
    basis = m @ a.T
    q = basis.conj().T @ Q.matrix @ basis
    eta = frame.T @ a.T
    eta_p = frame_prime.T @ a.T
    t = HSOperator(eta_p @ q @ eta.conj().T).normalized()
    return ApproxIntertwiner(t, hs_defect(t, pi, rho, F), int(keep.sum()))


def matching_basis_vector(pi: HeisIrrep, rho: HeisIrrep, tol: float = 1e-9) -> int | None:
    """An index j whose vector state under rho agrees with that of e_0 under pi.

    On a clock-and-shift irreducible the state of e_j is supported on X^{n k} Y^y Z^z
    with value a^k (beta z^j)^y z^z, so it suffices to match the value on Y.
    """
    if pi.n != rho.n:
        return None
    target = pi.matY[0, 0]
    for j in range(rho.n):
        if abs(rho.matY[j, j] - target) <= tol:
            return j
    return None


def heis_frame_elements(n: int) -> list[HeisElem]:
    """X^i Y^j for 0 <= i, j < n; their images of e_0 span C^n."""
    return [HeisElem(i, j, 0) for i in range(n) for j in range(n)]


def approx_heis_intertwiner(pi: HeisIrrep, rho: HeisIrrep, gens=None) -> ApproxIntertwiner:
    """Run the state-based constructor for two irreducibles with matching vector states."""
    j = matching_basis_vector(pi, rho)
    if j is None:
        raise FrameMismatch("no basis vector of rho matches the state of e_0 under pi")
    P, R = FinRep.from_heis_irrep(pi), FinRep.from_heis_irrep(rho)
    n = pi.n
    E = heis_frame_elements(n)
    xi = np.eye(n, dtype=complex)[0]
    xi_p = np.eye(n, dtype=complex)[j]
    frame = [P.image(h) @ xi for h in E]
    frame_p = [R.image(h) @ xi_p for h in E]
    q = HSOperator(np.eye(n) / np.sqrt(n))
    gens = list(group_generators("H3").values()) if gens is None else gens
    return approx_intertwiner_from_states(P, R, P, xi, q, E, frame, frame_p, gens)
