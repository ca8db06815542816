import itertools
import math

import pytest

from conic_census.errors import CapacityError, DomainError
from conic_census.normform import Form, omega_inf, omega_p, padic_volume, predict_norm_form
from conic_census.symbols import hilbert


def test_parse_and_evaluate():
    f = Form.parse("x0**2 + 3*x1**2")
    assert f.nvars == 2 and f.degree == 2 and f.n == 1
    assert f((2, 1)) == 7
    assert Form.parse("x0*x1 - x2**2")((2, 3, 1)) == 5
    for bad in ["x0**2 + x1", "y**2", "x0**2/2", "x0**2 +"]:
        with pytest.raises(DomainError):
            Form.parse(bad)


def test_odd_degree_rejected():
    with pytest.raises(DomainError):
        predict_norm_form("x0**3 + x1**3", -1)
    with pytest.raises(DomainError):
        omega_p(Form.parse("x0**2"), 0, 3)


def test_omega_inf_cases():
    f = Form.parse("x0**2 + x1**2")
    assert omega_inf(f, 3) == 4  # (n + 1) 2^n with n = 1
    assert omega_inf(Form.parse("x0**2+x1**2+x2**2"), 5) == 12
    assert omega_inf(f, -1) == pytest.approx(4)
    # x0^2 - x1^2 > 0 on half the square
    assert omega_inf(Form.parse("x0**2 - x1**2"), -1) == pytest.approx(2, rel=0.01)


def _brute_volume(form: Form, a: int, p: int, k: int) -> tuple[float, float]:
    """Volume of {x : (g(x), a)_p = 1} from integer representatives mod p^k, and the undecided share."""
    q = p**k
    good = undecided = 0
    need = 3 if p == 2 else 1
    for x in itertools.product(range(q), repeat=form.nvars):
        g = form(x)
        v = 0
        while g and g % p == 0 and v < k:
            g //= p
            v += 1
        if g == 0 or k - v < need:
            undecided += 1
            continue
        good += hilbert(form(x), a, p) == 1
    return good / q**form.nvars, undecided / q**form.nvars


@pytest.mark.parametrize("p, k", [(3, 3), (2, 6), (7, 2)])
def test_padic_volume_against_brute_force(p, k):
    f = Form.parse("x0**2 + 3*x1**2")
    vol, und = padic_volume(f, -1, p, k)
    brute, brute_und = _brute_volume(f, -1, p, k)
    # both decide the same classes; they differ only in how undecided mass is filled in
    assert abs(vol - brute) <= max(und, brute_und) + 1e-12


def test_unramified_prime_has_full_volume():
    f = Form.parse("x0**2 + 3*x1**2")
    om = omega_p(f, -1, 5)
    assert om.volume == pytest.approx(1.0, abs=om.undetermined + 1e-12)


def test_frozen_local_factors():
    f = Form.parse("x0**2 + 3*x1**2")
    assert omega_p(f, -1, 2).value == pytest.approx(0.530, abs=5e-3)
    assert omega_p(f, -1, 3).value == pytest.approx(0.816, abs=5e-3)
    deep = omega_p(f, -1, 3, depth=4)
    assert deep.depth == 4
    assert abs(deep.value - omega_p(f, -1, 3).value) < 0.02


def test_budget():
    with pytest.raises(CapacityError):
        padic_volume(Form.parse("x0**2+x1**2+x2**2+x3**2"), -1, 7, 4)


def test_prediction_fields():
    pr = predict_norm_form("x0**2 + 3*x1**2", -1, prime_bound=300)
    assert pr.omega_inf == pytest.approx(4)
    assert pr.naive == pytest.approx(pr.anticanonical / math.sqrt(2))
    assert pr.truncation_sensitivity < 0.02
    assert pr.naive == pytest.approx(0.617, rel=0.02)
