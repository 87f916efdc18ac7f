"""Hodge-Riemann property / pair verdicts on the worked models."""

import json
from fractions import Fraction
from importlib import resources

import numpy as np
import pytest

from hrpairs.errors import (
    ConfigError,
    DegreeError,
    SingularPairingError,
)
from hrpairs.exterior import form_from_dict, std_kahler, wedge, wedge_all
from hrpairs.hrcheck import (
    divide,
    gram,
    has_hr_property,
    is_hr_pair,
    pointwise_hr_pair,
    pos_cone_contains,
    random_kahler,
    sample_search,
    schur_form_pair,
    signature,
)
from hrpairs.ring import parse_element, relation_ring, subring, torus_ring
from hrpairs.symfunc import Partition


def delv_model():
    data = json.loads(
        resources.files("hrpairs").joinpath("fixtures/delv.json").read_text()
    )
    amb = torus_ring(4)
    gens = {
        name: amb.from_form(form_from_dict(d)) for name, d in data["forms"].items()
    }
    return subring(amb, gens, name="delv"), data


# -- signatures ------------------------------------------------------------


def test_signature_exact_and_float_agree():
    rng = np.random.default_rng(1)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        A = rng.integers(-5, 6, size=(n, n))
        Q = [[Fraction(int(A[i][j] + A[j][i])) for j in range(n)] for i in range(n)]
        exact_sig, _ = signature(Q)
        float_sig, eigs = signature([[float(x) for x in row] for row in Q])
        assert exact_sig == float_sig
        assert len(eigs) == n


def test_signature_flags_rank_drops_exactly():
    Q = [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]]
    assert signature(Q)[0] == (1, 1, 0)
    # the float backend needs the relative tolerance to see it
    assert signature([[1.0, 1.0], [1.0, 1.0]])[0] == (1, 1, 0)


def test_lorentzian_signature_of_kahler_gram():
    for d in (2, 3, 4):
        model = torus_ring(d)
        omega = model.label("omega_std")
        Q = gram(model, omega ** (d - 2))
        sig, _ = signature(Q)
        assert sig == (1, 0, d * d - 1)


def test_gram_checks_degrees():
    model = torus_ring(3)
    with pytest.raises(DegreeError):
        gram(model, model.one())  # needs degree d - 2 = 1
    with pytest.raises(DegreeError):
        gram(model, model.label("omega_std") ** 2)


# -- the delv example ------------------------------------------------------


def test_delv_gram_matrix():
    model, _ = delv_model()
    eta = parse_element(model, "theta1*theta2")
    assert gram(model, eta) == [
        [0, 4, 0],
        [4, 0, 0],
        [0, 0, -4],
    ]


def test_delv_pair_passes():
    model, _ = delv_model()
    eta = parse_element(model, "theta1*theta2")
    h = parse_element(model, "theta1+theta2")
    verdict = is_hr_pair(model, eta * h, eta, h)
    assert verdict.outcome == "pass"
    assert tuple(verdict.signature) == (1, 0, 2)
    assert verdict.details["kernel_characterization"]["pass"] is True


def test_delv_quotient_recovers_h():
    model, _ = delv_model()
    eta = parse_element(model, "theta1*theta2")
    h = parse_element(model, "theta1+theta2")
    assert divide(model, eta * h, eta) == h


def test_delv_kernel_form_pairs_to_zero():
    """The recorded kernel form really wedges eta to zero, and is real."""
    model, data = delv_model()
    forms = {name: form_from_dict(d) for name, d in data["forms"].items()}
    alpha = form_from_dict(data["kernel_form"])
    assert wedge(wedge(forms["theta1"], forms["theta2"]), alpha).is_zero()
    assert alpha.is_real()


def test_delv_positive_cone():
    model, _ = delv_model()
    eta = parse_element(model, "theta1*theta2")
    h = parse_element(model, "theta1+theta2")
    lam = model.label("lambda")
    inside = pos_cone_contains(model, h, eta, h)
    assert inside.passed
    assert inside.details == {"pairing_with_h": 8, "square": 8}
    assert not pos_cone_contains(model, lam, eta, h).passed  # int lambda^2 eta = -4
    assert not pos_cone_contains(model, model.zero(1), eta, h).passed


def test_pos_cone_is_consistent_with_pair_verdict():
    model, _ = delv_model()
    eta = parse_element(model, "theta1*theta2")
    h = parse_element(model, "theta1+theta2")
    top = eta * h
    beta = divide(model, top, eta)
    agrees = (
        pos_cone_contains(model, beta, eta, h).passed
        and has_hr_property(model, eta, h=h).passed
    )
    assert agrees == is_hr_pair(model, top, eta, h).passed


# -- classical torus pairs -------------------------------------------------


@pytest.mark.parametrize("d", [2, 3, 4])
def test_classical_kahler_pair(d):
    model = torus_ring(d)
    omega = model.label("omega_std")
    verdict = is_hr_pair(model, omega ** (d - 1), omega ** (d - 2), omega)
    assert verdict.passed
    assert tuple(verdict.signature) == (1, 0, d * d - 1)


def test_torus_quotient_of_kahler_powers():
    model = torus_ring(3)
    omega = model.label("omega_std")
    assert divide(model, omega ** 2, omega) == omega
    assert divide(model, model.zero(2), omega).is_zero()


# -- the 16-dimensional limit example --------------------------------------


def nonhr_inputs():
    model, data = delv_model()
    amb = model.ambient
    forms = {name: form_from_dict(d) for name, d in data["forms"].items()}
    h = amb.from_form(forms["theta1"] + forms["theta2"])
    eta = amb.from_form(wedge(forms["theta1"], forms["theta2"]))
    return amb, h, eta


def test_nonhr_limit_passes_off_the_boundary():
    amb, h, eta = nonhr_inputs()
    verdict = is_hr_pair(amb, h ** 3, eta + Fraction(1, 10) * h * h, h)
    assert verdict.passed
    assert tuple(verdict.signature) == (1, 0, 15)


def test_nonhr_limit_is_degenerate_at_the_boundary():
    amb, h, eta = nonhr_inputs()
    verdict = is_hr_pair(amb, h ** 3, eta, h)
    assert verdict.outcome == "degenerate"
    assert tuple(verdict.signature) == (1, 6, 9)
    assert verdict.witness  # carries a kernel witness


def test_nonhr_limit_fails_just_past_the_boundary():
    amb, h, eta = nonhr_inputs()
    verdict = is_hr_pair(amb, h ** 3, eta - Fraction(1, 100) * h * h, h)
    assert verdict.outcome == "fail"


# -- invariance properties -------------------------------------------------


def test_h_independence_of_the_hr_property():
    """Once one valid h works, every sampled positive-cone h' agrees."""
    model, _ = delv_model()
    eta = parse_element(model, "theta1*theta2")
    h = parse_element(model, "theta1+theta2")
    assert has_hr_property(model, eta, h=h).passed
    rng = np.random.default_rng(99)
    found = 0
    while found < 10:
        coeffs = [Fraction(int(c)) for c in rng.integers(-3, 4, size=3)]
        hp = model.from_coeffs(1, coeffs)
        Q = gram(model, eta)
        val = sum(
            Q[i][j] * coeffs[i] * coeffs[j]
            for i in range(3)
            for j in range(3)
        )
        if val <= 0:
            continue
        found += 1
        assert has_hr_property(model, eta, h=hp).passed


def test_scaling_invariance_of_verdicts():
    model, _ = delv_model()
    eta = parse_element(model, "theta1*theta2")
    h = parse_element(model, "theta1+theta2")
    base = is_hr_pair(model, eta * h, eta, h)
    for c_top, c_mid, c_h in [(2, 3, 5), (Fraction(1, 7), Fraction(2, 9), 1)]:
        scaled = is_hr_pair(model, c_top * (eta * h), c_mid * eta, c_h * h)
        assert scaled.outcome == base.outcome
    amb, hh, eeta = nonhr_inputs()
    before = is_hr_pair(amb, hh ** 3, eeta - Fraction(1, 100) * hh * hh, hh)
    after = is_hr_pair(amb, 3 * hh ** 3, Fraction(5, 2) * (eeta - Fraction(1, 100) * hh * hh), hh)
    assert before.outcome == after.outcome == "fail"


def test_divide_is_a_two_sided_inverse():
    rng = np.random.default_rng(21)
    model = torus_ring(3)
    omega = model.label("omega_std")
    n = len(model.basis(1))
    for _ in range(10):
        x = model.from_coeffs(1, [Fraction(int(c)) for c in rng.integers(-4, 5, size=n)])
        assert divide(model, omega * x, omega) == x


def test_divide_reports_singular_pairings():
    model = relation_ring(
        3,
        [("xi", 1), ("f", 1)],
        [((0, 2), []), ((3, 0), [(-1, (2, 1))])],
        integration=[((2, 1), 1)],
    )
    f = model.label("f")
    gamma = model.label("xi") ** 2
    with pytest.raises(SingularPairingError) as err:
        divide(model, gamma, f)
    assert err.value.witness is not None


def test_cauchy_schwarz_for_passing_pairs():
    """(Q(alpha,beta))^2 >= Q(alpha,alpha) Q(beta,beta) for the quotient beta."""
    checked = []
    model, _ = delv_model()
    eta = parse_element(model, "theta1*theta2")
    h = parse_element(model, "theta1+theta2")
    checked.append((model, eta * h, eta, h))
    t3 = torus_ring(3)
    om = t3.label("omega_std")
    checked.append((t3, om ** 2, om, om))
    for model, top, mid, hh in checked:
        assert is_hr_pair(model, top, mid, hh).passed
        Q = gram(model, mid)
        beta = divide(model, top, mid)
        n = len(Q)
        bb = sum(Q[i][j] * beta.coeffs[i] * beta.coeffs[j] for i in range(n) for j in range(n))
        for k in range(n):
            ab = sum(Q[k][j] * beta.coeffs[j] for j in range(n))
            aa = Q[k][k]
            assert ab * ab >= aa * bb


# -- pointwise checks ------------------------------------------------------


def test_pointwise_classical_case():
    omega = std_kahler(3, exact=False)
    top = wedge(omega, omega)
    verdict = pointwise_hr_pair(top, omega, omega)
    assert verdict.passed
    assert tuple(verdict.signature) == (1, 0, 8)


def test_pointwise_rejects_non_positive_omega():
    omega = std_kahler(3, exact=False)
    with pytest.raises(ConfigError):
        pointwise_hr_pair(wedge(omega, omega), omega, omega * (-1.0))


def test_pointwise_flags_negated_middle_form():
    omega = std_kahler(3, exact=False)
    verdict = pointwise_hr_pair(wedge(omega, omega), omega * (-1.0), omega)
    assert not verdict.passed


def test_schur_pair_of_two_kahler_forms_passes():
    rng = np.random.default_rng(12)
    for d in (2, 3):
        omegas = [random_kahler(d, rng) for _ in range(2)]
        top, mid = schur_form_pair(Partition((d - 1,)), omegas, d)
        verdict = pointwise_hr_pair(top, mid, std_kahler(d, exact=False))
        assert verdict.passed, verdict.to_dict()


# -- random search harness -------------------------------------------------


def test_sample_search_is_deterministic():
    a = sample_search(3, 3, Partition((2,)), trials=6, seed=5)
    b = sample_search(3, 3, Partition((2,)), trials=6, seed=5)
    assert a.to_dict() == b.to_dict()
    assert a.trials == 6 and a.passes == 6 and not a.failures
    assert a.min_margin is not None and a.min_margin > 0


def test_sample_search_empty_report():
    report = sample_search(3, 3, Partition((2,)), trials=0, seed=1)
    assert report.trials == 0 and report.passes == 0
    assert report.min_margin is None
    assert report.all_passed


def test_sample_search_validates_partition_weight():
    with pytest.raises(ConfigError):
        sample_search(3, 3, Partition((3,)), trials=1, seed=0)  # weight != d-1
    with pytest.raises(ConfigError):
        sample_search(4, 1, Partition((2, 1)), trials=1, seed=0)  # too few forms


def test_sample_search_report_serializes():
    report = sample_search(2, 2, Partition((1,)), trials=3, seed=9)
    data = json.loads(report.to_json())
    assert data["passes"] == 3
    assert data["config"]["dim"] == 2
