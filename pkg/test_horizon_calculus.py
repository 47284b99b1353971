# test_horizon_calculus.py
"""
Exact horizon identities and conservation laws.
"""

from fractions import Fraction

import pytest
import sympy as sp

from core.errors import UsageError
from horizon_calculus import (
    ExactCoefficient,
    background_horizon_jet,
    derive_conservation_law,
    format_law_table,
    restrict_commuted_wave,
    substitute_law,
)


def coeff(value, power):
    return ExactCoefficient(Fraction(value), power)


# ============================================================================
# Exact coefficients
# ============================================================================

def test_exact_arithmetic():
    a = coeff(1, -2)
    b = coeff(3, -1)
    assert a * b == coeff(3, -3)
    assert b / a == coeff(3, 1)
    assert a + coeff(1, -2) == coeff(2, -2)
    assert (a - a).is_zero
    with pytest.raises(UsageError):
        _ = a + b


def test_exact_rendering():
    assert str(coeff(1, -1)) == "1/M"
    assert str(coeff(1, -2)) == "1/M^2"
    assert str(coeff(-12, -3)) == "-12/M^3"
    assert str(coeff(Fraction(1, 2), -1)) == "1/(2*M)"
    assert coeff(3, -1).evaluate(2.0) == pytest.approx(1.5)
    assert coeff(3, -1).to_dict() == {"numerator": 3, "denominator": 1, "mass_power": -1}


def test_background_jets_match_sympy():
    r, m = sp.symbols("r M", positive=True)
    exprs = {
        "D": (1 - m / r) ** 2,
        "R": 2 / r - 2 * m / r**2,
        "2/r": 2 / r,
        "r^-2": r**-2,
    }
    for symbol, expr in exprs.items():
        for order in range(7):
            exact = background_horizon_jet(symbol, order)
            value = sp.simplify(sp.diff(expr, r, order).subs(r, m) * m ** (-exact.mass_power))
            assert Fraction(int(sp.numer(value)), int(sp.denom(value))) == exact.value, (symbol, order)


def test_background_jet_rejects_unknown_symbol():
    with pytest.raises(UsageError, match="Invalid symbol"):
        background_horizon_jet("Q", 0)


# ============================================================================
# Identities
# ============================================================================

@pytest.mark.parametrize("k", range(11))
@pytest.mark.parametrize("l", range(11))
def test_radial_coefficient_of_restricted_identity(k, l):
    identity = restrict_commuted_wave(k, l)
    assert identity.coefficient("r", k) == coeff(k * (k + 1) - l * (l + 1), -2)


def test_identity_leading_transversal_term():
    identity = restrict_commuted_wave(3, 1)
    assert identity.coefficient("dv", 4) == coeff(2, 0)
    assert all(sym.kind in ("dv", "r") for sym, _ in identity.nonzero_terms())


def test_identity_order_limits():
    with pytest.raises(UsageError):
        restrict_commuted_wave(33, 0)
    with pytest.raises(UsageError):
        restrict_commuted_wave(0, -1)


# ============================================================================
# Conservation laws
# ============================================================================

def test_law_l0():
    law = derive_conservation_law(0)
    assert law.betas == (coeff(1, -1),)
    assert law.alphas == ()
    assert law.jet_count == 2


def test_law_l1():
    law = derive_conservation_law(1)
    assert law.betas == (coeff(1, -2), coeff(3, -1))


@pytest.mark.parametrize("l", range(1, 6))
def test_substituted_law_has_only_advanced_terms(l):
    law = derive_conservation_law(l)
    identity = substitute_law(law)
    assert identity.nonzero_terms()
    assert all(sym.kind == "dv" for sym, _ in identity.nonzero_terms())


@pytest.mark.parametrize("l", range(0, 6))
def test_betas_scale_with_mass(l):
    law = derive_conservation_law(l)
    for i, beta in enumerate(law.betas):
        if not beta.is_zero:
            assert beta.mass_power == -(l + 1 - i)


def test_law_evaluation():
    law = derive_conservation_law(1)
    assert law.evaluate([1.0, 2.0, 3.0], mass=1.0) == pytest.approx(3.0 + 1.0 + 6.0)
    assert law.evaluate([1.0, 2.0, 3.0], mass=2.0) == pytest.approx(3.0 + 0.25 + 3.0)
    with pytest.raises(UsageError):
        law.evaluate([1.0, 2.0])


def test_law_table_and_dict():
    law = derive_conservation_law(1)
    table = format_law_table(law, 1.0)
    assert "1/M^2" in table
    assert "3/M" in table
    payload = law.to_dict(1.0)
    assert payload["betas"][1]["numerator"] == 3
    assert payload["betas"][1]["mass_power"] == -1
    assert payload["betas"][0]["decimal"] == pytest.approx(1.0)
