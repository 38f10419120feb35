"""Smoke test for the paramark Python bindings.

Build and install the extension first:

    pip install --no-build-isolation ./crates/python

then run `python3 python/smoke_test.py` from the repository root.
"""

from fractions import Fraction
from pathlib import Path

import paramark_py as pm

FIXTURES = Path(__file__).resolve().parent.parent / "crates" / "core" / "tests" / "fixtures"


def main():
    die = pm.Model.load(FIXTURES / "knuth_yao_die.pmodel")
    assert die.kind == "pmc"
    assert die.params == ["x", "y"]
    assert die.reach({"x": Fraction(2, 5), "y": Fraction(7, 10)}) == Fraction(1, 10)
    assert die.reach({"x": "1/2", "y": "1/2"}) == Fraction(1, 6)

    coins = pm.Model.load(FIXTURES / "two_coins.pmodel")
    assert coins.solution_function() == "x*y - x + 1"
    assert pm.check_witness(coins, {"x": Fraction(1, 2), "y": Fraction(1, 2)}, "ge", Fraction(1, 2))
    assert pm.cross_check(coins, "ge", "gp") == (0, 25)
    assert "(check-sat)" in pm.encode(coins, relop="lt", domain="gp")
    witnesses = pm.sweep(coins, "lt", Fraction(1, 4), resolution=4)
    assert witnesses and all(value < Fraction(1, 4) for _, value in witnesses)

    choice = pm.Model.load(FIXTURES / "two_strategies.pmodel")
    assert choice.reach({"x": Fraction(1, 2), "y": Fraction(1, 3)}) == (Fraction(1, 4), Fraction(2, 5))
    tree, coin_map = pm.pmdp_exists_to_pmc(choice)
    assert tree.kind == "pmc" and len(coin_map) == 1

    chain, shift, scale = pm.poly_to_pmc("-2*x^2*y + y")
    assert (shift, scale) == (2, 8)
    assert chain.reach({"x": 1, "y": 1}) == Fraction(1, 8)

    unsat = "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n"
    answer, witness = pm.qualitative(pm.sat3_to_pmc(unsat, "positive"), "positive", domain="bool")
    assert not answer and witness is None

    shifted = pm.normalize_threshold(coins, Fraction(1, 3))
    point = {"x": Fraction(1, 3), "y": Fraction(1, 5)}
    assert shifted.reach(point) == Fraction(1, 2) * coins.reach(point) + Fraction(1, 3)

    try:
        die.reach({"x": 0.5, "y": 0.5})
    except ValueError:
        pass
    else:
        raise AssertionError("floats must be rejected")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
