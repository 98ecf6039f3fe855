"""The discrete Heisenberg group, its finite-dimensional irreducibles and its primitive spectrum.

Elements are stored in the normal form X^x Y^y Z^z, matching the unipotent matrix
[[1, y, z], [0, 1, x], [0, 0, 1]].  Z is central and Y X = Z X Y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import InfiniteOrder, InvalidValue, NotScalar, UnsupportedProfile
from .exactnum import TorusElem, angle


@dataclass(frozen=True, order=True)
class HeisElem:
    x: int = 0
    y: int = 0
    z: int = 0

    def __mul__(self, other: "HeisElem") -> "HeisElem":
        return heis_mul(self, other)

    def inverse(self) -> "HeisElem":
        return HeisElem(-self.x, -self.y, self.x * self.y - self.z)

    def __pow__(self, k: int) -> "HeisElem":
        base = self if k >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(k)):
            out = out * base
        return out

    def matrix(self) -> tuple:
        return ((1, self.y, self.z), (0, 1, self.x), (0, 0, 1))

    @classmethod
    def from_matrix(cls, m) -> "HeisElem":
        if [list(m[1][:2]), list(m[2])] != [[0, 1], [0, 0, 1]] or m[0][0] != 1:
            raise InvalidValue("not an upper unitriangular integer matrix")
        return cls(int(m[1][2]), int(m[0][1]), int(m[0][2]))


def heis_mul(g: HeisElem, h: HeisElem) -> HeisElem:
    return HeisElem(g.x + h.x, g.y + h.y, g.z + h.z + g.y * h.x)


IDENTITY = HeisElem(0, 0, 0)
GEN_X = HeisElem(1, 0, 0)
GEN_Y = HeisElem(0, 1, 0)
GEN_Z = HeisElem(0, 0, 1)
GENERATORS = {"X": GEN_X, "Y": GEN_Y, "Z": GEN_Z}


class NamedSubgroup(Enum):
    GAMMA1 = "Gamma1"  # <X, Z>
    GAMMA2 = "Gamma2"  # <Y, Z>
    CENTER = "Center"
    FULL = "Full"
    TRIVIAL = "Trivial"

    def contains(self, g: HeisElem) -> bool:
        if self is NamedSubgroup.FULL:
            return True
        if self is NamedSubgroup.TRIVIAL:
            return g == IDENTITY
        if self is NamedSubgroup.CENTER:
            return g.x == 0 and g.y == 0
        if self is NamedSubgroup.GAMMA1:
            return g.y == 0
        return g.x == 0

    def generators(self) -> tuple[HeisElem, ...]:
        return {
            NamedSubgroup.GAMMA1: (GEN_X, GEN_Z),
            NamedSubgroup.GAMMA2: (GEN_Y, GEN_Z),
            NamedSubgroup.CENTER: (GEN_Z,),
            NamedSubgroup.FULL: (GEN_X, GEN_Y, GEN_Z),
            NamedSubgroup.TRIVIAL: (),
        }[self]


# ---------------------------------------------------------------- primitive ideals

@dataclass(frozen=True)
class HeisPrim:
    """Kernel parameter (z, a, b): z = pi(Z), a = pi(X)^n, b = pi(Y)^n with n = ord z.

    When z has infinite order the kernel depends on z alone and a = b = 0.
    """

    z: TorusElem
    a: TorusElem = TorusElem(0)
    b: TorusElem = TorusElem(0)

    def __post_init__(self):
        for f in ("z", "a", "b"):
            object.__setattr__(self, f, angle(getattr(self, f)))
        if self.z.order is None and (self.a != TorusElem(0) or self.b != TorusElem(0)):
            raise InvalidValue("a and b must be 0 when z has infinite order")

    @property
    def order(self) -> int | None:
        return self.z.order


def _phase(t) -> complex:
    return complex(np.exp(2j * np.pi * float(t)))


def _angle_float(e: TorusElem, theta: float = math.pi) -> float:
    return float(e.a) + float(e.b) * theta


@dataclass(frozen=True, eq=False)
class HeisIrrep:
    """Clock-and-shift model: matX = alpha*u, matY = beta*v, matZ = z*I."""

    n: int
    matX: np.ndarray
    matY: np.ndarray
    matZ: np.ndarray
    rootA: TorusElem
    rootB: TorusElem
    prim: HeisPrim | None = None

    def matrix(self, g: HeisElem) -> np.ndarray:
        """pi(X^x Y^y Z^z) from the closed form alpha^x beta^y z^{ky+z} on e_k -> e_{k+x}."""
        n = self.n
        alpha = self.matX[1 % n, 0] if n > 1 else self.matX[0, 0]
        beta = self.matY[0, 0]
        zeta = self.matZ[0, 0]
        ks = np.arange(n)
        out = np.zeros((n, n), dtype=complex)
        out[(ks + g.x) % n, ks] = alpha ** g.x * beta ** g.y * zeta ** (ks * g.y + g.z)
        return out

    def generator_images(self) -> dict[str, np.ndarray]:
        return {"X": self.matX, "Y": self.matY, "Z": self.matZ}


def shift_clock(n: int, z_angle: Fraction) -> tuple[np.ndarray, np.ndarray]:
    """u with u e_k = e_{k+1 mod n} and v = diag(z^k)."""
    u = np.roll(np.eye(n, dtype=complex), 1, axis=0)
    v = np.diag([_phase(z_angle * k) for k in range(n)])
    return u, v


def heis_irrep(p: HeisPrim, root_choice_a: int = 0, root_choice_b: int = 0) -> HeisIrrep:
    n = p.order
    if n is None:
        raise InfiniteOrder("z has infinite order; the irreducibles are infinite-dimensional")
    if not (0 <= root_choice_a < n and 0 <= root_choice_b < n):
        raise InvalidValue(f"root choices must lie in [0, {n})")
    u, v = shift_clock(n, p.z.a)
    root_a = TorusElem((p.a.a + root_choice_a) / n, p.a.b / n)
    root_b = TorusElem((p.b.a + root_choice_b) / n, p.b.b / n)
    mat_x = _phase(_angle_float(root_a)) * u
    mat_y = _phase(_angle_float(root_b)) * v
    mat_z = _phase(p.z.a) * np.eye(n, dtype=complex)
    return HeisIrrep(n, mat_x, mat_y, mat_z, root_a, root_b, p)


def _scalar_of(m: np.ndarray, tol: float, what: str) -> complex:
    c = m[0, 0]
    if np.max(np.abs(m - c * np.eye(m.shape[0]))) > tol:
        raise NotScalar(f"{what} is not a scalar matrix")
    return complex(c)


def _snap_angle(c: complex, max_den: int) -> TorusElem:
    t = (np.angle(c) / (2 * np.pi)) % 1.0
    return TorusElem(Fraction(t).limit_denominator(max_den))


def heis_prim_of_irrep(r: HeisIrrep, tol: float = 1e-6, max_den: int = 10_000) -> HeisPrim:
    """Read (z, a, b) off the scalars matZ, matX^n, matY^n, snapping to rational angles.

    Angles are snapped with denominator at most ``max_den``; an irrational a or b
    therefore cannot round-trip.
    """
    n = r.n
    z = _snap_angle(_scalar_of(r.matZ, tol, "matZ"), max_den)
    a = _snap_angle(_scalar_of(np.linalg.matrix_power(r.matX, n), tol, "matX^n"), max_den)
    b = _snap_angle(_scalar_of(np.linalg.matrix_power(r.matY, n), tol, "matY^n"), max_den)
    return HeisPrim(z, a, b)


def check_irrep_relations(r: HeisIrrep, tol: float = 1e-9) -> dict[str, float]:
    """Residuals of unitarity, X^n = a, Y^n = b, YX = ZXY and Z scalar."""
    n = r.n
    eye = np.eye(n)
    res = {
        "unitary_X": np.max(np.abs(r.matX @ r.matX.conj().T - eye)),
        "unitary_Y": np.max(np.abs(r.matY @ r.matY.conj().T - eye)),
        "commutation": np.max(np.abs(r.matY @ r.matX - r.matZ @ r.matX @ r.matY)),
        "Z_scalar": np.max(np.abs(r.matZ - r.matZ[0, 0] * eye)),
    }
    if r.prim is not None:
        a = _phase(_angle_float(r.prim.a))
        b = _phase(_angle_float(r.prim.b))
        res["X_power"] = np.max(np.abs(np.linalg.matrix_power(r.matX, n) - a * eye))
        res["Y_power"] = np.max(np.abs(np.linalg.matrix_power(r.matY, n) - b * eye))
        u, v = shift_clock(n, r.prim.z.a)
        res["u_power"] = np.max(np.abs(np.linalg.matrix_power(u, n) - eye))
        res["v_power"] = np.max(np.abs(np.linalg.matrix_power(v, n) - eye))
    return {k: float(v) for k, v in res.items()}


# ---------------------------------------------------------------- restriction hulls

@dataclass(frozen=True)
class ResHull:
    """Characters (c, z) of Gamma1 = <X,Z> or Gamma2 = <Y,Z> weakly contained in the restriction.

    ``pairs`` is None when every c in the circle occurs (z of infinite order).
    """

    subgroup: NamedSubgroup
    z: TorusElem
    pairs: tuple[tuple[TorusElem, TorusElem], ...] | None

    def __len__(self):
        if self.pairs is None:
            raise TypeError("hull is the whole circle")
        return len(self.pairs)


def res_hull(p: HeisPrim, subgroup: NamedSubgroup) -> ResHull:
    if subgroup not in (NamedSubgroup.GAMMA1, NamedSubgroup.GAMMA2):
        raise InvalidValue("restriction hulls are defined for Gamma1 and Gamma2")
    n = p.order
    if n is None:
        return ResHull(subgroup, p.z, None)
    w = p.a if subgroup is NamedSubgroup.GAMMA1 else p.b
    cs = sorted((TorusElem((w.a + k) / n, w.b / n) for k in range(n)), key=lambda c: (c.a, c.b))
    return ResHull(subgroup, p.z, tuple((c, p.z) for c in cs))


# ---------------------------------------------------------------- convergence in Prim

@dataclass(frozen=True)
class HeisConst:
    """z_n = z for all n, a_n -> a, b_n -> b."""

    z: TorusElem
    a: TorusElem = TorusElem(0)
    b: TorusElem = TorusElem(0)

    def __post_init__(self):
        HeisPrim(self.z, self.a, self.b)  # validates the constraint
        for f in ("z", "a", "b"):
            object.__setattr__(self, f, angle(getattr(self, f)))

    @classmethod
    def at(cls, p: HeisPrim) -> "HeisConst":
        return cls(p.z, p.a, p.b)


@dataclass(frozen=True)
class HeisOrderEscape:
    """ord z_n -> infinity with z_n -> z (a_n, b_n arbitrary)."""

    z: TorusElem

    def __post_init__(self):
        object.__setattr__(self, "z", angle(self.z))


@dataclass(frozen=True)
class HeisIrrationalZ:
    """Every z_n has infinite order and z_n -> z."""

    z: TorusElem

    def __post_init__(self):
        object.__setattr__(self, "z", angle(self.z))


HeisPrimProfile = HeisConst | HeisOrderEscape | HeisIrrationalZ


def heis_prim_converges(profile: HeisPrimProfile, target: HeisPrim) -> bool:
    """Convergence (z_n, a_n, b_n) -> (z, a, b): z_n -> z, and along every subsequence
    with ord z_n = ord z (finite) also a_n -> a and b_n -> b.
    """
    if isinstance(profile, HeisConst):
        if profile.z != target.z:
            return False
        if profile.z.order is None:
            return True
        return profile.a == target.a and profile.b == target.b
    if isinstance(profile, (HeisOrderEscape, HeisIrrationalZ)):
        # orders are never (eventually) equal to a finite ord(target.z): the subsequence clause is vacuous
        return profile.z == target.z
    raise UnsupportedProfile(f"unsupported Heisenberg profile {profile!r}")


def rational_angle(x) -> TorusElem:
    e = angle(x)
    if not e.is_torsion():
        raise InvalidValue(f"{x} is not a rational angle")
    return e


def order_lcm(*orders: int | None) -> int | None:
    if any(o is None for o in orders):
        return None
    return math.lcm(*orders)


__all__ = [
    "HeisElem", "heis_mul", "IDENTITY", "GEN_X", "GEN_Y", "GEN_Z", "GENERATORS", "NamedSubgroup",
    "HeisPrim", "HeisIrrep", "heis_irrep", "heis_prim_of_irrep", "check_irrep_relations",
    "shift_clock", "ResHull", "res_hull", "HeisConst", "HeisOrderEscape", "HeisIrrationalZ",
    "HeisPrimProfile", "heis_prim_converges", "rational_angle", "order_lcm",
]
