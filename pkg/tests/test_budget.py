import math

import pytest

from susykink.model import (
    BudgetParams,
    budget_table,
    coherence_budget,
    critical_time,
    lattice_hopping,
    scattering_rate,
)
from susykink.modules.dressing import mhz


def test_reference_chain_length():
    assert coherence_budget(BudgetParams()) == pytest.approx(200.0, rel=0.2)


def test_preparation_term_vanishes_without_kappa():
    p = BudgetParams(kappa=0.0)
    assert coherence_budget(p, include_preparation=True) == coherence_budget(p, include_preparation=False)
    assert coherence_budget(BudgetParams(kappa=10.0)) < coherence_budget(p)


def test_budget_balances_scattering_against_transit_time():
    p = BudgetParams()
    L = coherence_budget(p)
    assert scattering_rate(p, L) * L * critical_time(p) == pytest.approx(1.0, rel=1e-10)


def test_budget_grows_with_lifetime_and_shrinks_with_detuning():
    base = BudgetParams()
    longer = base.model_copy(update={"tau0": 4 * base.tau0})
    assert coherence_budget(longer) == pytest.approx(2 * coherence_budget(base))
    far = base.model_copy(update={"Delta": mhz(200.0)})
    assert coherence_budget(far) < coherence_budget(base)


def test_budget_table_rows():
    rows = budget_table([5.0, 10.0, 20.0])
    assert len(rows) == 9
    assert {r["lifetime"] for r in rows} == {"0K", "30K", "273K"}
    zero_k = [r for r in rows if r["lifetime"] == "0K"]
    assert [r["delta_over_omega"] for r in zero_k] == [5.0, 10.0, 20.0]
    assert zero_k[1]["L_max"] == pytest.approx(coherence_budget(BudgetParams()))
    assert zero_k[0]["J"] > zero_k[1]["J"] > zero_k[2]["J"]
    with pytest.raises(ValueError):
        budget_table([0.0])


def test_budget_parameter_validation():
    with pytest.raises(ValueError):
        BudgetParams(lam=0.0)
    with pytest.raises(ValueError):
        BudgetParams(tau0=-1.0)


def test_lattice_hopping():
    depth = 10.0
    expected = 4 / math.sqrt(math.pi) * depth**0.75 * math.exp(-2 * math.sqrt(depth))
    assert lattice_hopping(depth) == pytest.approx(expected)
    assert lattice_hopping(5.0) > lattice_hopping(10.0) > lattice_hopping(20.0)
    with pytest.raises(ValueError):
        lattice_hopping(0.0)
