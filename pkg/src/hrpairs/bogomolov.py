"""Sheaf-side numerics: slopes, discriminants, and curvature-trace positivity.

Numerical sheaf data is a triple (rank, c1, c2) of ring elements; the
discriminant is Delta = 2*r*c2 - (r-1)*c1^2 and the Bogomolov value is its
integral against a degree-(d-2) class.

Curvature lives in a local unitary frame as an r x r matrix of (1,1)-forms
F with F_ji = -conj(F_ij).  Chern-Weil normalization: c1-form = (i/2pi)tr F,
and for the trace-free part F0 the discriminant form is (r/4pi^2) tr(F0^2),
via the polarization identity r*tr(F^2) - (tr F)^2 = r*tr(F0^2).  The trace
check integrates each term F0_ij ^ F0_ji ^ Omega_{d-2}; with every entry in
the kernel of a ^ Omega_{d-1} and (Omega_{d-1}, Omega_{d-2}) a
Hodge-Riemann pair, every term is nonnegative and vanishing total means
projectively flat.
"""

import math
from fractions import Fraction

from .errors import ConfigError, ConsistencyError, DegreeError
from .exterior import PPForm, integrate_top, wedge
from .scalars import conj as _conj
from .scalars import imag_part, real_part
from .verdict import DEGENERATE, FAIL, PASS, Verdict, jsonable


class SheafClassData:
    """Numerical data (rank, c1, c2) of a sheaf class in a ring model."""

    __slots__ = ("rank", "c1", "c2")

    def __init__(self, rank, c1, c2):
        if not isinstance(rank, int) or rank < 1:
            raise ConfigError(f"rank must be a positive integer, got {rank!r}")
        if c1.degree != 1 or c2.degree != 2:
            raise DegreeError(
                f"need degrees (1, 2) for (c1, c2), got ({c1.degree}, {c2.degree})"
            )
        if c1.model is not c2.model:
            raise ConfigError("c1 and c2 belong to different ring models")
        self.rank = rank
        self.c1 = c1
        self.c2 = c2

    @property
    def model(self):
        return self.c1.model

    def twist(self, x):
        """Data of the tensor with a line class x (degree-1 element)."""
        r = self.rank
        c1 = self.c1 + r * x
        c2 = self.c2 + (r - 1) * (self.c1 * x) + math.comb(r, 2) * (x * x)
        return SheafClassData(r, c1, c2)

    def __repr__(self):
        return f"SheafClassData(rank={self.rank}, c1={self.c1}, c2={self.c2})"


def slope(E, eta_top):
    """mu_eta(E) = int(c1(E) * eta) / rank(E)."""
    val = (E.c1 * eta_top).integrate()
    if isinstance(val, Fraction):
        return val / E.rank
    return val / float(E.rank)


def discriminant(E):
    """Delta(E) = 2r c2 - (r-1) c1^2 as a degree-2 ring element."""
    r = E.rank
    return 2 * r * E.c2 - (r - 1) * (E.c1 * E.c1)


def bogomolov_value(E, eta_mid):
    """int(Delta(E) * eta_mid); nonnegative for Bogomolov pairs on semistable data."""
    return (discriminant(E) * eta_mid).integrate()


def extension_class(F, G):
    """Whitney data of an extension 0 -> F -> E -> G -> 0."""
    r = F.rank + G.rank
    c1 = F.c1 + G.c1
    c2 = F.c2 + G.c2 + F.c1 * G.c1
    return SheafClassData(r, c1, c2)


def extension_identity(F, G):
    """Residual of the slope-discriminant identity for an extension; always 0.

    With E the extension data and xi = c1(F)/rk F - c1(G)/rk G:

        -(rk F * rk G / rk E) xi^2
            = Delta(E)/rk E - Delta(F)/rk F - Delta(G)/rk G.

    Returns (residual, parts); the residual is the left side minus the right
    and vanishes identically.
    """
    E = extension_class(F, G)
    rf, rg, re_ = F.rank, G.rank, E.rank
    xi = Fraction(1, rf) * F.c1 - Fraction(1, rg) * G.c1
    lhs = Fraction(-rf * rg, re_) * (xi * xi)
    terms = {
        "extension": Fraction(1, re_) * discriminant(E),
        "sub": Fraction(1, rf) * discriminant(F),
        "quotient": Fraction(1, rg) * discriminant(G),
    }
    rhs = terms["extension"] - terms["sub"] - terms["quotient"]
    return lhs - rhs, {"xi": xi, "lhs": lhs, **terms}


# -- curvature matrices ----------------------------------------------------


class CurvatureMatrix:
    """r x r matrix of (1,1)-forms, F_ji = -conj(F_ij) when admissible."""

    __slots__ = ("size", "dim", "entries")

    def __init__(self, entries, check=True, tol=0.0):
        r = len(entries)
        if r == 0 or any(len(row) != r for row in entries):
            raise ConfigError("curvature entries must form a square matrix")
        d = entries[0][0].dim
        for row in entries:
            for f in row:
                if f.dim != d or (f.p, f.q) != (1, 1):
                    raise DegreeError(
                        f"curvature entries must be (1,1)-forms on C^{d}, got {f!r}"
                    )
        self.size = r
        self.dim = d
        self.entries = [list(row) for row in entries]
        if check:
            res = self.anti_selfadjoint_residual()
            scale = max(self.max_abs(), 1.0)
            if res > tol * scale:
                raise ConsistencyError(
                    f"matrix is not anti-selfadjoint: residual {res}"
                )

    @classmethod
    def zero(cls, r, d):
        z = PPForm.zero(d, 1, 1)
        return cls([[z for _ in range(r)] for _ in range(r)], check=False)

    def is_exact(self):
        return all(f.is_exact() for row in self.entries for f in row)

    def max_abs(self):
        return max(f.max_abs() for row in self.entries for f in row)

    def anti_selfadjoint_residual(self):
        worst = 0.0
        for i in range(self.size):
            for j in range(self.size):
                diff = self.entries[j][i] + self.entries[i][j].conj()
                worst = max(worst, diff.max_abs())
        return worst

    def trace(self):
        t = self.entries[0][0]
        for i in range(1, self.size):
            t = t + self.entries[i][i]
        return t

    def adjoint(self):
        return CurvatureMatrix(
            [[self.entries[j][i].conj() for j in range(self.size)]
             for i in range(self.size)],
            check=False,
        )

    def __add__(self, other):
        if not isinstance(other, CurvatureMatrix) or other.size != self.size:
            return NotImplemented
        return CurvatureMatrix(
            [[self.entries[i][j] + other.entries[i][j] for j in range(self.size)]
             for i in range(self.size)],
            check=False,
        )

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, c):
        return CurvatureMatrix(
            [[f * c for f in row] for row in self.entries], check=False
        )

    __rmul__ = __mul__

    def map_entries(self, fn):
        return CurvatureMatrix(
            [[fn(f) for f in row] for row in self.entries], check=False
        )


def anti_selfadjoint_part(F):
    """(F - F^adj)/2; fixed points are exactly the admissible matrices."""
    half = Fraction(1, 2) if F.is_exact() else 0.5
    return (F + (-1) * F.adjoint()) * half


def trace_free_part(F):
    """Remove (tr F / r) times the identity."""
    r = F.size
    scalar = F.trace() * (Fraction(1, r) if F.is_exact() else 1.0 / r)
    out = [row[:] for row in F.entries]
    for i in range(r):
        out[i][i] = out[i][i] - scalar
    return CurvatureMatrix(out, check=False)


def trace_of_square(F):
    """tr(F ^ F) = sum_ij F_ij ^ F_ji as a (2,2)-form."""
    total = PPForm.zero(F.dim, 2, 2)
    for i in range(F.size):
        for j in range(F.size):
            total = total + wedge(F.entries[i][j], F.entries[j][i])
    return total


def chern_forms(F):
    """(c1-form, c2-form) of a curvature matrix, floats, with the 2pi factors."""
    t1 = F.trace()
    t1sq = wedge(t1, t1)
    t2 = trace_of_square(F)
    c1 = t1 * complex(0.0, 1.0 / (2.0 * math.pi))
    c2 = (t2 - t1sq) * (1.0 / (8.0 * math.pi ** 2))
    return c1, c2


def _pairing_functional(omega_top):
    """Coefficients m[(j,k)] of a -> int(a ^ omega_top) on (1,1) monomials."""
    d = omega_top.dim
    m = {}
    for j in range(d):
        for k in range(d):
            mono = PPForm.monomial(d, (j,), (k,), 1)
            m[(j, k)] = integrate_top(wedge(mono, omega_top), allow_complex=True)
    return m


def constraint_project(F, omega_top):
    """Nearest admissible curvature: anti-selfadjoint, trace-free, and with
    every entry in the kernel of a -> a ^ omega_top.

    The kernel projection subtracts along the Riesz direction of the pairing
    functional, which is a real (1,1)-form, so the first two constraints
    survive the third.
    """
    d = F.dim
    if omega_top.dim != d or (omega_top.p, omega_top.q) != (d - 1, d - 1):
        raise DegreeError(
            f"need a ({d - 1},{d - 1})-form on C^{d}, got {omega_top!r}"
        )
    A = trace_free_part(anti_selfadjoint_part(F))
    m = _pairing_functional(omega_top)
    denom = sum(real_part(v) ** 2 + imag_part(v) ** 2 for v in m.values())
    if denom == 0:
        return A
    riesz = PPForm(d, 1, 1, {
        ((j,), (k,)): _conj(v) for (j, k), v in m.items() if v != 0
    })

    def project(alpha):
        val = integrate_top(wedge(alpha, omega_top), allow_complex=True)
        if val == 0:
            return alpha
        return alpha - riesz * (val / denom)

    return A.map_entries(project)


def _entry_values(F, omega_mid, allow_complex=True):
    vals = [[None] * F.size for _ in range(F.size)]
    for i in range(F.size):
        for j in range(F.size):
            prod = wedge(wedge(F.entries[i][j], F.entries[j][i]), omega_mid)
            vals[i][j] = integrate_top(prod, allow_complex=allow_complex)
    return vals


def trace_check(F0, omega_top, omega_mid, zero_tol=1e-9, check_constraints=True):
    """Per-term positivity of tr(F0^2) paired with omega_mid.

    Terms are v_ij = int(F0_ij ^ F0_ji ^ omega_mid); preconditions (checked
    unless check_constraints=False): F0 anti-selfadjoint, trace-free, and
    F0_ij ^ omega_top = 0 entrywise.  Passing means every v_ij >= -tol*scale;
    a vanishing total flags the projectively-flat equality case.  The
    discriminant normalization is delta = (r/4pi^2) * total.
    """
    d = F0.dim
    r = F0.size
    if omega_mid.dim != d or (omega_mid.p, omega_mid.q) != (d - 2, d - 2):
        raise DegreeError(
            f"need a ({d - 2},{d - 2})-form on C^{d}, got {omega_mid!r}"
        )
    fscale = max(F0.max_abs(), 1.0)
    if check_constraints:
        res = F0.anti_selfadjoint_residual()
        if res > zero_tol * fscale:
            raise ConfigError(f"curvature is not anti-selfadjoint: residual {res}")
        tr_res = F0.trace().max_abs()
        if tr_res > zero_tol * fscale:
            raise ConfigError(f"curvature is not trace-free: residual {tr_res}")
        oscale = max(omega_top.max_abs(), 1.0)
        for i in range(r):
            for j in range(r):
                v = integrate_top(
                    wedge(F0.entries[i][j], omega_top), allow_complex=True
                )
                if abs(complex(v)) > zero_tol * fscale * oscale:
                    raise ConfigError(
                        f"entry ({i},{j}) violates the kernel constraint: {v}"
                    )

    raw = _entry_values(F0, omega_mid)
    exact = F0.is_exact() and omega_mid.is_exact()
    terms = [[None] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            v = raw[i][j]
            im = imag_part(v)
            if exact:
                if im != 0:
                    raise ConsistencyError(
                        f"term ({i},{j}) is not real: {v}"
                    )
            elif abs(im) > zero_tol * max(1.0, abs(complex(v))):
                raise ConsistencyError(f"term ({i},{j}) is not real: {v}")
            terms[i][j] = real_part(v)

    scale = max(1.0, max(abs(float(t)) for row in terms for t in row))
    total = sum(t for row in terms for t in row)
    if exact:
        negatives = [
            (i, j, terms[i][j])
            for i in range(r) for j in range(r) if terms[i][j] < 0
        ]
        flat = total == 0
    else:
        negatives = [
            (i, j, terms[i][j])
            for i in range(r) for j in range(r)
            if terms[i][j] < -zero_tol * scale
        ]
        flat = abs(float(total)) <= zero_tol * scale
    ok = not negatives
    details = {
        "rank": r,
        "terms": jsonable(terms),
        "total": jsonable(total),
        "delta_value": r * float(total) / (4.0 * math.pi ** 2),
        "projectively_flat": flat,
        "scale": scale,
        "curvature_max_abs": F0.max_abs(),
        "backend": "exact" if exact else "float",
    }
    witness = {} if ok else {"negative_terms": jsonable(negatives)}
    return Verdict(
        PASS if ok else FAIL,
        witness=witness,
        tolerances={} if exact else {"zero_tol": zero_tol},
        details=details,
    )


def random_curvature(r, d, rng, scale=1.0):
    """Raw complex random matrix of (1,1)-forms (feed through constraint_project)."""
    entries = []
    for _ in range(r):
        row = []
        for _ in range(r):
            coeffs = {}
            for j in range(d):
                for k in range(d):
                    c = rng.standard_normal() + 1j * rng.standard_normal()
                    coeffs[((j,), (k,))] = scale * c
            row.append(PPForm(d, 1, 1, coeffs))
        entries.append(row)
    return CurvatureMatrix(entries, check=False)


# -- Higgs fields ----------------------------------------------------------


class HiggsField:
    """r x r matrix of (1,0)-forms theta with theta ^ theta = 0."""

    __slots__ = ("size", "dim", "entries")

    def __init__(self, entries, check=True, tol=0.0):
        r = len(entries)
        if r == 0 or any(len(row) != r for row in entries):
            raise ConfigError("Higgs entries must form a square matrix")
        d = entries[0][0].dim
        for row in entries:
            for f in row:
                if f.dim != d or (f.p, f.q) != (1, 0):
                    raise DegreeError(
                        f"Higgs entries must be (1,0)-forms on C^{d}, got {f!r}"
                    )
        self.size = r
        self.dim = d
        self.entries = [list(row) for row in entries]
        if check:
            res = self.square_residual()
            scale = max(1.0, max(f.max_abs() for row in entries for f in row)) ** 2
            if res > tol * scale:
                raise ConsistencyError(
                    f"Higgs field fails theta ^ theta = 0: residual {res}"
                )

    @classmethod
    def tensor(cls, N, phi, check=True):
        """theta = N (x) phi for a constant matrix N and a (1,0)-form phi."""
        if (phi.p, phi.q) != (1, 0):
            raise DegreeError(f"phi must be a (1,0)-form, got {phi!r}")
        entries = [[phi * c for c in row] for row in N]
        return cls(entries, check=check)

    def square_residual(self):
        worst = 0.0
        for i in range(self.size):
            for j in range(self.size):
                acc = PPForm.zero(self.dim, 2, 0)
                for k in range(self.size):
                    acc = acc + wedge(self.entries[i][k], self.entries[k][j])
                worst = max(worst, acc.max_abs())
        return worst


def higgs_curvature_term(theta, tol=1e-9):
    """[theta, theta^adj] = theta ^ theta^adj + theta^adj ^ theta.

    The result is an anti-selfadjoint matrix of (1,1)-forms, the extra
    curvature the Higgs field contributes on top of the Chern connection.
    """
    r = theta.size
    d = theta.dim
    scale = max(1.0, max(f.max_abs() for row in theta.entries for f in row)) ** 2
    if theta.square_residual() > tol * scale:
        raise ConsistencyError("Higgs field fails theta ^ theta = 0")
    adj = [[theta.entries[j][i].conj() for j in range(r)] for i in range(r)]
    entries = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = PPForm.zero(d, 1, 1)
            for k in range(r):
                acc = acc + wedge(theta.entries[i][k], adj[k][j])
                acc = acc + wedge(adj[i][k], theta.entries[k][j])
            row.append(acc)
        entries.append(row)
    return CurvatureMatrix(entries, check=False)


def random_higgs(r, d, rng, scale=1.0):
    """Nilpotent-tensor Higgs field N (x) phi1 + N^2 (x) phi2, N strictly upper."""
    N = [[0j] * r for _ in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            N[i][j] = scale * (rng.standard_normal() + 1j * rng.standard_normal())
    N2 = [
        [sum(N[i][k] * N[k][j] for k in range(r)) for j in range(r)]
        for i in range(r)
    ]

    def random_10():
        return PPForm(d, 1, 0, {
            ((j,), ()): rng.standard_normal() + 1j * rng.standard_normal()
            for j in range(d)
        })

    phi1, phi2 = random_10(), random_10()
    entries = [
        [phi1 * N[i][j] + phi2 * N2[i][j] for j in range(r)]
        for i in range(r)
    ]
    return HiggsField(entries, check=True, tol=1e-12)
