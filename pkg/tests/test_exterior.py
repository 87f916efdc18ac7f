"""Sign conventions of PPForm checked against brute-force wedge words."""

import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from hrpairs.errors import ConsistencyError, DegreeError
from hrpairs.exterior import (
    PPForm,
    embed,
    extend_hat,
    form_from_dict,
    form_from_hermitian,
    form_from_json,
    form_to_dict,
    form_to_json,
    hermitian_from_form,
    integrate_top,
    positivity_dminus1,
    restrict_to_plane,
    std_kahler,
    wedge,
    wedge_all,
)
from hrpairs.scalars import GaussianRational, conj as gauss_conj, i_power


# -- brute-force oracle on wedge words -------------------------------------
#
# A wedge word is a tuple of symbols ("z", j) for dz_j and ("zb", j) for
# dzbar_j, in the order the factors are multiplied.  Canonical order puts all
# dz factors first (ascending), then all dzbar factors (ascending); each
# adjacent transposition flips the sign.  Everything below is computed this
# slow literal way, then compared against the PPForm implementation.


def sort_word(word):
    """Bubble sort into canonical order, counting transpositions."""
    word = list(word)
    sign = 1
    for _ in range(len(word)):
        for j in range(len(word) - 1):
            if word[j] > word[j + 1]:
                word[j], word[j + 1] = word[j + 1], word[j]
                sign = -sign
    for a, b in zip(word, word[1:]):
        if a == b:
            return None, 0
    return tuple(word), sign


def word_of(I, J):
    return tuple(("z", j) for j in I) + tuple(("zb", j) for j in J)


def brute_conj_word(I, J):
    # conjugation swaps dz_j <-> dzbar_j factorwise and keeps the order
    raw = tuple(("zb", j) for j in I) + tuple(("z", j) for j in J)
    return sort_word(raw)


def brute_wedge(coeffs_x, coeffs_y):
    """Multiply two {word: coeff} dicts symbol by symbol."""
    out = {}
    for (wx, cx), (wy, cy) in itertools.product(coeffs_x.items(), coeffs_y.items()):
        word, sign = sort_word(wx + wy)
        if sign == 0:
            continue
        out[word] = out.get(word, 0) + sign * cx * cy
    return {w: c for w, c in out.items() if c != 0}


def as_words(form):
    return {
        word_of(I, J): c
        for (I, J), c in form.coeffs.items()
    }


def subsets(d, n):
    return list(itertools.combinations(range(d), n))


def test_conjugation_sign_matches_transposition_count():
    """conj(dz_I dzbar_J) picks up exactly (-1)^(pq) under resorting."""
    d = 4
    for p in range(4):
        for q in range(4):
            for I in subsets(d, p):
                for J in subsets(d, q):
                    word, sign = brute_conj_word(I, J)
                    assert word == word_of(J, I)
                    assert sign == (-1) ** (p * q)
                    mono = PPForm.monomial(d, I, J, GaussianRational(2, 3))
                    got = mono.conj()
                    assert got.coeffs == {(J, I): GaussianRational(2, -3) * sign}


def test_reality_sign_on_diagonal_generators():
    """i^(p^2) dz_I dzbar_I is fixed by conjugation, for every p."""
    d = 4
    for p in range(d + 1):
        # transposition count says conj(dz_I dzbar_I) = (-1)^(p^2) dz_I dzbar_I
        for I in subsets(d, p):
            _, sign = brute_conj_word(I, I)
            assert sign == (-1) ** (p * p)
            u = PPForm.monomial(d, I, I, i_power(p * p))
            # conj multiplies the coefficient by conj(i^(p^2)) * (-1)^(p^2)
            # = (-i)^(p^2) * (-1)^(p^2) = i^(p^2), so u is real on the nose
            assert u.conj() == u
            assert u.is_real()
            if p % 2 == 1:
                bad = PPForm.monomial(d, I, I, GaussianRational(1))
                assert not bad.is_real()


def test_reality_condition_off_diagonal():
    """A (p,p)-form is real iff c_JI = (-1)^(p^2) conj(c_IJ)."""
    d = 4
    for p, I, J in [(1, (0,), (2,)), (2, (0, 1), (1, 3)), (3, (0, 1, 2), (0, 2, 3))]:
        c = GaussianRational(3, 5)
        sign = GaussianRational((-1) ** (p * p))
        good = PPForm(d, p, p, {(I, J): c, (J, I): sign * gauss_conj(c)})
        assert good.is_real()
        bad = PPForm(d, p, p, {(I, J): c, (J, I): sign * c})
        assert not bad.is_real()


def test_conj_is_an_involution_and_multiplicative():
    rng = np.random.default_rng(42)
    for _ in range(20):
        d = int(rng.integers(2, 5))
        x = random_form(rng, d)
        y = random_form(rng, d)
        assert x.conj().conj() == x
        assert wedge(x, y).conj() == wedge(x.conj(), y.conj())


def random_form(rng, d, exact=True, terms=3):
    p = int(rng.integers(0, d + 1))
    q = int(rng.integers(0, d + 1))
    coeffs = {}
    for _ in range(terms):
        I = tuple(sorted(int(v) for v in rng.choice(d, size=p, replace=False)))
        J = tuple(sorted(int(v) for v in rng.choice(d, size=q, replace=False)))
        if exact:
            c = GaussianRational(int(rng.integers(-5, 6)), int(rng.integers(-5, 6)))
        else:
            c = complex(rng.standard_normal(), rng.standard_normal())
        if c != 0:
            coeffs[(I, J)] = c
    return PPForm(d, p, q, coeffs)


def test_wedge_matches_brute_force_on_random_forms():
    rng = np.random.default_rng(7)
    for _ in range(60):
        d = int(rng.integers(1, 5))
        x = random_form(rng, d)
        y = random_form(rng, d)
        got = wedge(x, y)
        want = brute_wedge(as_words(x), as_words(y))
        assert as_words(got) == want


def test_wedge_graded_commutativity():
    rng = np.random.default_rng(11)
    for _ in range(40):
        d = int(rng.integers(1, 5))
        x = random_form(rng, d)
        y = random_form(rng, d)
        sign = (-1) ** ((x.p + x.q) * (y.p + y.q))
        lhs = wedge(x, y)
        rhs = wedge(y, x)
        assert lhs == rhs * GaussianRational(sign)


def test_wedge_associativity():
    rng = np.random.default_rng(13)
    for _ in range(25):
        d = int(rng.integers(1, 5))
        x, y, z = (random_form(rng, d, terms=2) for _ in range(3))
        assert wedge(wedge(x, y), z) == wedge(x, wedge(y, z))


# -- volume normalization --------------------------------------------------


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_volume_form_integrates_to_one(d):
    full = tuple(range(d))
    vol = PPForm.monomial(d, full, full, i_power(d * d))
    assert integrate_top(vol) == Fraction(1)
    assert vol.is_real()


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_std_kahler_total_volume_is_factorial(d):
    omega = std_kahler(d)
    power = wedge_all([omega] * d, dim=d)
    import math

    assert integrate_top(power) == math.factorial(d)


def test_integrate_top_rejects_wrong_degree_and_complex_values():
    with pytest.raises(DegreeError):
        integrate_top(std_kahler(2))
    full = (0, 1, 2)
    crooked = PPForm.monomial(3, full, full, GaussianRational(1))  # missing i^9
    with pytest.raises(ConsistencyError):
        integrate_top(crooked)
    assert integrate_top(crooked, allow_complex=True) == i_power(-9)


# -- restriction to planes -------------------------------------------------


def test_restriction_normalization_on_unitary_frames():
    d = 4
    omega = std_kahler(d)
    e = [[1 if i == j else 0 for i in range(d)] for j in range(d)]
    assert restrict_to_plane(omega, [e[0]]) == 1
    omega2 = wedge(omega, omega)
    assert restrict_to_plane(omega2, [e[0], e[2]]) == 2  # omega^2 = 2! * (vol of plane)


def test_restriction_is_unitarily_invariant():
    rng = np.random.default_rng(3)
    d, p = 3, 2
    omega = std_kahler(d, exact=False)
    omega2 = wedge(omega, omega)
    for _ in range(10):
        A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        Qm, _ = np.linalg.qr(A)
        frame = [list(Qm[:, k]) for k in range(p)]
        val = restrict_to_plane(omega2, frame)
        assert abs(val - 2.0) < 1e-9


def test_restriction_scales_by_frame_determinant():
    d = 2
    omega = std_kahler(d)
    val = restrict_to_plane(omega, [[GaussianRational(3), GaussianRational(0, 4)]])
    # |3|^2 + |4i|^2
    assert val == 25


# -- hermitian bridge ------------------------------------------------------


def test_form_from_hermitian_round_trip_exact():
    H = [[Fraction(2), GaussianRational(1, 1)], [GaussianRational(1, -1), Fraction(5)]]
    form = form_from_hermitian(H)
    assert form.is_real()
    back = hermitian_from_form(form)
    assert back[0][0] == 2 and back[1][1] == 5
    assert back[0][1] == GaussianRational(1, 1)
    assert back[1][0] == GaussianRational(1, -1)


def test_std_kahler_is_identity_matrix():
    got = hermitian_from_form(std_kahler(3))
    for j in range(3):
        for k in range(3):
            assert got[j][k] == (1 if j == k else 0)


def test_positivity_check_on_kahler_powers():
    for d in (2, 3):
        omega = std_kahler(d)
        power = wedge_all([omega] * (d - 1), dim=d)
        verdict = positivity_dminus1(power)
        assert verdict.outcome == "pass"
        assert verdict.signature == (d, 0, 0)


def test_positivity_check_flags_indefinite_form():
    H = [[Fraction(1), 0], [0, Fraction(-1)]]
    form = form_from_hermitian(H)  # (1,1) on C^2, d-1 = 1
    verdict = positivity_dminus1(form)
    assert verdict.outcome == "fail"
    assert verdict.signature == (1, 0, 1)
    assert "pairing_matrix" in verdict.witness


# -- hat extension ---------------------------------------------------------


def test_extend_hat_agrees_with_std_kahler():
    assert extend_hat(std_kahler(2), GaussianRational(1)) == std_kahler(3)


def test_extend_hat_splits_powers():
    """(omega + t theta)^2 = omega^2 + 2 t omega theta when theta^2 = 0."""
    omega = std_kahler(2)
    hat = extend_hat(omega, GaussianRational(1))
    theta = hat - embed(omega, 3)
    hat2 = wedge(hat, hat)
    expect = wedge(embed(omega, 3), embed(omega, 3)) + wedge(embed(omega, 3), theta) * GaussianRational(2)
    assert hat2 == expect
    assert wedge(theta, theta).is_zero()


def test_embed_rejects_shrinking():
    with pytest.raises(DegreeError):
        embed(std_kahler(3), 2)


# -- serialization ---------------------------------------------------------


def test_json_round_trip_exact():
    rng = np.random.default_rng(19)
    for _ in range(10):
        f = random_form(rng, 3)
        assert form_from_json(form_to_json(f)) == f


def test_json_round_trip_float():
    rng = np.random.default_rng(23)
    f = random_form(rng, 3, exact=False)
    g = form_from_json(form_to_json(f))
    assert (g - f).max_abs() == 0


def test_form_dict_uses_one_based_indices():
    f = PPForm.monomial(3, (0, 2), (1, 2), GaussianRational(1, 2))
    data = form_to_dict(f)
    (entry,) = data["terms"]
    assert entry["I"] == [1, 3] and entry["J"] == [2, 3]
    assert form_from_dict(data) == f


def test_bad_index_tuples_rejected():
    with pytest.raises(DegreeError):
        PPForm(3, 2, 0, {((1, 1), ()): GaussianRational(1)})
    with pytest.raises(DegreeError):
        PPForm(3, 1, 0, {((3,), ()): GaussianRational(1)})
