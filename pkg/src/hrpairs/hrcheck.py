"""Hodge-Riemann property and pair checks on intersection-ring models.

For a degree-(d-2) class eta, the Gram form on degree-1 classes is

    Q_eta(a, b) = int(a * eta * b).

eta has the Hodge-Riemann property with respect to an ample direction h when
Q_eta(h, h) > 0 and Q_eta has signature (1, 0, n-1).  A pair of classes
(eta_top, eta_mid) of degrees (d-1, d-2) is a Hodge-Riemann pair when

  1. eta_mid has the Hodge-Riemann property w.r.t. h,
  2. int(h * eta_top) > 0,
  3. int(eta_mid * beta^2) > 0 for the quotient beta = eta_top / eta_mid.

Whenever condition 2 holds and nothing is degenerate, the result is
cross-checked against the equivalent characterization "Q_eta_mid negative
definite on {a : int(a * eta_top) = 0} and Q_eta_mid(h, h) > 0".

Verdicts carry inertia triples; in the exact backend those come from
rational congruence with no tolerance, and eigenvalues are float evidence.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConfigError, ConsistencyError, DegreeError, SingularPairingError
from .exterior import PPForm, form_from_hermitian, hermitian_from_form, std_kahler
from .linalg import (
    float_kernel_vector,
    float_signature,
    float_solve,
    hermitian_rational_inertia,
    rational_inertia,
    rational_nullspace,
    rational_solve,
)
from .ring import torus_ring
from .symfunc import Partition, derived, evaluate, schur
from .verdict import DEGENERATE, FAIL, PASS, Verdict, jsonable


def _is_exact_matrix(Q):
    return all(not isinstance(x, float) for row in Q for x in row)


def signature(Q, zero_tol=1e-9):
    """Inertia (pos, zero, neg) of a symmetric matrix plus eigenvalue evidence.

    Rational matrices are classified exactly (zero_tol ignored); float
    matrices go through numpy with the relative zero threshold.
    """
    if len(Q) == 0:
        return (0, 0, 0), []
    Qf = [[float(x) for x in row] for row in Q]
    if _is_exact_matrix(Q):
        sig = rational_inertia(Q)
        _, eigs = float_signature(Qf, zero_tol)
        return sig, eigs
    return float_signature(Qf, zero_tol)


def gram(model, eta, degree=1):
    """Gram matrix int(b_i * eta * b_j) over the degree-1 basis (symmetric)."""
    d = model.dimension
    if eta.degree + 2 * degree != d:
        raise DegreeError(
            f"eta has degree {eta.degree}; need {d - 2 * degree} to pair degree-{degree} classes"
        )
    basis = [model.basis_element(degree, i) for i in range(len(model.basis(degree)))]
    images = [eta * b for b in basis]
    n = len(basis)
    Q = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = (basis[i] * images[j]).integrate()
            Q[i][j] = v
            Q[j][i] = v
    return Q


def _quadratic_value(Q, v, w=None):
    if w is None:
        w = v
    total = None
    for i, a in enumerate(v):
        if a == 0:
            continue
        for j, b in enumerate(w):
            if b == 0:
                continue
            t = a * Q[i][j] * b
            total = t if total is None else total + t
    return 0 if total is None else total


def _kernel_witness(Q, exact, zero_tol):
    if exact:
        null = rational_nullspace(Q)
        return [str(x) for x in null[0]] if null else None
    return float_kernel_vector(Q, zero_tol)


def has_hr_property(model, eta, h=None, zero_tol=1e-9, _gram=None):
    """Does Q_eta have Lorentzian signature (1, 0, n-1), positive on h?

    With h omitted, only the signature is checked and a certifying positive
    direction (the top float eigenvector) is reported as witness.
    """
    Q = gram(model, eta) if _gram is None else _gram
    exact = _is_exact_matrix(Q)
    sig, eigs = signature(Q, zero_tol)
    pos, zero, neg = sig
    n = len(Q)
    tolerances = {} if exact else {"zero_tol": zero_tol}
    details = {"backend": "exact" if exact else "float"}
    if zero > 0:
        return Verdict(
            DEGENERATE, sig, eigs,
            witness={"kernel_vector": _kernel_witness(Q, exact, zero_tol)},
            tolerances=tolerances, details=details,
        )
    lorentzian = pos == 1 and neg == n - 1
    if h is not None:
        hval = _quadratic_value(Q, h.coeffs)
        details["h_pairing"] = jsonable(hval)
        ok = lorentzian and hval > 0
        witness = {} if ok else {"signature": sig, "h_pairing": jsonable(hval)}
    else:
        ok = lorentzian
        witness = {}
        if ok and n > 0:
            w, v = np.linalg.eigh(np.asarray([[float(x) for x in r] for r in Q]))
            witness["certifying_direction"] = [float(x) for x in v[:, -1]]
    return Verdict(
        PASS if ok else FAIL, sig, eigs,
        witness=witness, tolerances=tolerances, details=details,
    )


def divide(model, gamma, eta, zero_tol=1e-9):
    """The class gamma / eta: solves eta * x = gamma for x of degree 1.

    Raises SingularPairingError (with a kernel witness when available) if the
    multiplication map by eta is singular or gamma is not in its image.
    """
    qdeg = gamma.degree - eta.degree
    if qdeg != 1:
        raise DegreeError(
            f"division expects quotient degree 1, got {qdeg} "
            f"(gamma degree {gamma.degree}, eta degree {eta.degree})"
        )
    n = len(model.basis(1))
    cols = [(eta * model.basis_element(1, j)).coeffs for j in range(n)]
    m = len(model.basis(gamma.degree))
    M = [[cols[j][i] for j in range(n)] for i in range(m)]
    exact = _is_exact_matrix(M) and gamma.is_exact()
    if exact:
        x = rational_solve(M, gamma.coeffs)
        if x is None:
            null = rational_nullspace(M)
            raise SingularPairingError(
                "multiplication by eta is singular on degree-1 classes",
                witness=[str(v) for v in null[0]] if null else None,
            )
    else:
        Mf = [[float(v) for v in row] for row in M]
        x = float_solve(Mf, [float(v) for v in gamma.coeffs], zero_tol)
        if x is None:
            MtM = (np.asarray(Mf).T @ np.asarray(Mf)).tolist()
            raise SingularPairingError(
                "multiplication by eta is numerically singular on degree-1 classes",
                witness=float_kernel_vector(MtM, zero_tol),
            )
    return model.from_coeffs(1, x)


def _restricted_negdef(Q, functional, zero_tol, exact):
    """Signature of Q restricted to the hyperplane {functional = 0}."""
    n = len(Q)
    if exact:
        null = rational_nullspace([functional])
        B = null  # rows are basis vectors of the hyperplane
        R = [
            [_quadratic_value(Q, u, v) for v in B]
            for u in B
        ]
        sig = rational_inertia(R) if R else (0, 0, 0)
        return sig
    f = np.asarray([float(x) for x in functional])
    if np.linalg.norm(f) == 0.0:
        B = np.eye(n)
    else:
        _, _, vh = np.linalg.svd(f[None, :])
        B = vh[1:].T
    Qf = np.asarray([[float(x) for x in row] for row in Q])
    R = B.T @ Qf @ B
    sig, _ = float_signature(R, zero_tol)
    return sig


def is_hr_pair(model, eta_top, eta_mid, h, zero_tol=1e-9):
    """Check the three Hodge-Riemann pair conditions for (eta_top, eta_mid).

    Any zero inertia along the way yields outcome "degenerate" (never a hard
    pass/fail); otherwise the kernel characterization is recomputed and a
    disagreement raises ConsistencyError.
    """
    d = model.dimension
    if eta_top.degree != d - 1 or eta_mid.degree != d - 2:
        raise DegreeError(
            f"pair must have degrees ({d - 1}, {d - 2}), got "
            f"({eta_top.degree}, {eta_mid.degree})"
        )
    if h.degree != 1:
        raise DegreeError(f"h must have degree 1, got {h.degree}")
    Q = gram(model, eta_mid)
    exact = _is_exact_matrix(Q) and eta_top.is_exact() and h.is_exact()
    tolerances = {} if exact else {"zero_tol": zero_tol}

    prop = has_hr_property(model, eta_mid, h=h, zero_tol=zero_tol, _gram=Q)
    c2val = (h * eta_top).integrate()
    details = {
        "hr_property": prop.to_dict(),
        "pairing_with_h": jsonable(c2val),
    }
    if prop.outcome == DEGENERATE:
        return Verdict(
            DEGENERATE, prop.signature, prop.eigenvalues,
            witness=prop.witness, tolerances=tolerances, details=details,
        )

    quotient = None
    c3val = None
    try:
        quotient = divide(model, eta_top, eta_mid, zero_tol)
        c3val = (eta_mid * quotient * quotient).integrate()
        details["quotient"] = jsonable(quotient.coeffs)
        details["quotient_square_value"] = jsonable(c3val)
    except SingularPairingError as exc:
        # Gram nondegenerate but the division failed: numerically borderline
        return Verdict(
            DEGENERATE, prop.signature, prop.eigenvalues,
            witness={"division": str(exc), "kernel_vector": exc.witness},
            tolerances=tolerances, details=details,
        )

    passed = prop.passed and c2val > 0 and c3val > 0

    if c2val > 0:
        functional = [
            (model.basis_element(1, i) * eta_top).integrate()
            for i in range(len(model.basis(1)))
        ]
        rsig = _restricted_negdef(Q, functional, zero_tol, exact)
        hval = _quadratic_value(Q, h.coeffs)
        kernel_pass = (
            rsig == (0, 0, len(Q) - 1) and hval > 0
        )
        details["kernel_characterization"] = {
            "restricted_signature": rsig,
            "h_pairing": jsonable(hval),
            "pass": kernel_pass,
        }
        if rsig[1] > 0:
            return Verdict(
                DEGENERATE, prop.signature, prop.eigenvalues,
                witness={"restricted_signature": rsig},
                tolerances=tolerances, details=details,
            )
        if kernel_pass != passed:
            raise ConsistencyError(
                "three-condition check and kernel characterization disagree: "
                f"{passed} vs {kernel_pass}"
            )

    witness = {}
    if not passed:
        witness["failed_conditions"] = [
            name
            for name, ok in [
                ("hr_property", prop.passed),
                ("pairing_with_h_positive", c2val > 0),
                ("quotient_square_positive", c3val > 0),
            ]
            if not ok
        ]
    return Verdict(
        PASS if passed else FAIL,
        prop.signature,
        prop.eigenvalues,
        witness=witness,
        tolerances=tolerances,
        details=details,
    )


def pos_cone_contains(model, beta, eta, h, zero_tol=1e-9):
    """Membership of a degree-1 class in the eta-positive cone.

    Requires int(beta * eta * h) > 0 and int(beta^2 * eta) > 0.
    """
    if beta.degree != 1 or h.degree != 1:
        raise DegreeError("beta and h must have degree 1")
    v1 = (beta * eta * h).integrate()
    v2 = (beta * beta * eta).integrate()
    ok = v1 > 0 and v2 > 0
    return Verdict(
        PASS if ok else FAIL,
        witness={} if ok else {"pairing_with_h": jsonable(v1), "square": jsonable(v2)},
        tolerances={"zero_tol": zero_tol},
        details={"pairing_with_h": jsonable(v1), "square": jsonable(v2)},
    )


# -- pointwise (form-level) checks ----------------------------------------


def _check_strictly_positive(omega, zero_tol):
    H = hermitian_from_form(omega)
    if omega.is_exact():
        sig = hermitian_rational_inertia(H)
    else:
        Hf = [[complex(x) for x in row] for row in H]
        sig, _ = float_signature(Hf, zero_tol)
    if sig != (omega.dim, 0, 0):
        raise ConfigError(
            f"omega is not strictly positive: Hermitian inertia {sig}"
        )


def pointwise_hr_pair(omega_top, omega_mid, omega, zero_tol=1e-9):
    """Hodge-Riemann pair check for constant-coefficient forms.

    omega_top is a (d-1,d-1)-form, omega_mid a (d-2,d-2)-form and omega a
    strictly positive (1,1)-form; the check runs inside the full (p,p)-form
    model on C^d.
    """
    d = omega_top.dim
    if (omega_top.p, omega_top.q) != (d - 1, d - 1):
        raise DegreeError(f"expected a ({d - 1},{d - 1})-form, got {omega_top!r}")
    if (omega_mid.p, omega_mid.q) != (d - 2, d - 2):
        raise DegreeError(f"expected a ({d - 2},{d - 2})-form, got {omega_mid!r}")
    _check_strictly_positive(omega, zero_tol)
    model = torus_ring(d)
    return is_hr_pair(
        model,
        model.from_form(omega_top),
        model.from_form(omega_mid),
        model.from_form(omega),
        zero_tol=zero_tol,
    )


def random_kahler(d, rng, delta=1e-3):
    """Random strictly positive (1,1)-form: A^* A + delta * Id, A complex Gaussian."""
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    H = A.conj().T @ A + delta * np.eye(d)
    return form_from_hermitian([[complex(x) for x in row] for row in H], exact=False)


def schur_form_pair(lam, omegas, dim):
    """(s_lam, derived s_lam) evaluated on (1,1)-forms; the candidate pair."""
    e = len(omegas)
    p = schur(lam, e)
    one = PPForm.one(dim, exact=all(w.is_exact() for w in omegas))
    top = evaluate(p, omegas, one)
    mid = evaluate(derived(p, 1), omegas, one)
    return top, mid


@dataclass
class SearchReport:
    """Outcome of a randomized search over Schur-form Hodge-Riemann pairs."""

    config: dict
    trials: int = 0
    passes: int = 0
    failures: list = field(default_factory=list)
    degenerates: int = 0
    min_margin: float = None

    @property
    def all_passed(self):
        return self.passes == self.trials

    def to_dict(self):
        return {
            "config": jsonable(self.config),
            "trials": self.trials,
            "passes": self.passes,
            "degenerates": self.degenerates,
            "failures": jsonable(self.failures),
            "min_margin": self.min_margin,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def sample_search(dim, num_vars, partition, trials=100, seed=0, zero_tol=1e-9,
                  delta=1e-3):
    """Randomized search for failures of the Schur-pair Hodge-Riemann check.

    Each trial draws num_vars random Kahler forms on C^dim, builds the pair
    (s_lam, s'_lam) for the given partition of dim - 1, and runs the
    pointwise check against the standard Kahler form.  Trials derive their
    RNG from (seed, trial) so results are order-independent.
    """
    lam = partition if isinstance(partition, Partition) else Partition.parse(str(partition))
    if lam.weight != dim - 1:
        raise ConfigError(
            f"partition {lam} has weight {lam.weight}; need dim - 1 = {dim - 1}"
        )
    if num_vars < len(lam):
        raise ConfigError(
            f"{num_vars} variables cannot carry a partition with {len(lam)} rows"
        )
    report = SearchReport(config={
        "dim": dim, "num_vars": num_vars, "partition": str(lam),
        "trials": trials, "seed": seed, "zero_tol": zero_tol, "delta": delta,
    })
    reference = std_kahler(dim, exact=False)
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        omegas = [random_kahler(dim, rng, delta) for _ in range(num_vars)]
        top, mid = schur_form_pair(lam, omegas, dim)
        verdict = pointwise_hr_pair(top, mid, reference, zero_tol)
        report.trials += 1
        eigs = verdict.eigenvalues or []
        if eigs:
            margin = min(abs(e) for e in eigs) / max(abs(e) for e in eigs)
            if report.min_margin is None or margin < report.min_margin:
                report.min_margin = margin
        if verdict.passed:
            report.passes += 1
        else:
            if verdict.outcome == DEGENERATE:
                report.degenerates += 1
            report.failures.append({
                "trial": trial,
                "rng_key": [seed, trial],
                "verdict": verdict.to_dict(),
            })
    return report
