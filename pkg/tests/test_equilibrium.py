import numpy as np
import pytest

from tradeclear import (
    ConvergenceFailure,
    DimensionMismatch,
    ExportMatrix,
    ImportMatrix,
    PositivityViolation,
    PriceVector,
    TauMatrix,
    ZeroSpend,
    balance_vector,
    build_goods_coupling,
    build_ideal_exports,
    build_mixing_matrix,
    build_price_map,
    clearing_residual,
    solve_prices,
    verify_stationarity,
)

from conftest import random_instance
from oracles import clearing_defect_loops, value_space_prices


def test_price_vector_rejects_nonpositive():
    with pytest.raises(PositivityViolation):
        PriceVector.simplex([1.0, 0.0])
    with pytest.raises(PositivityViolation):
        PriceVector.simplex([1.0, -0.5])


def test_price_vector_simplex_normalizes():
    prices = PriceVector.simplex([2.0, 6.0])
    assert np.allclose(prices.values, [0.25, 0.75], atol=1e-15)
    assert prices.normalization == "simplex"


def test_price_vector_raw_keeps_scale():
    prices = PriceVector.raw([2.0, 6.0])
    assert np.array_equal(prices.values, [2.0, 6.0])
    assert prices.normalization == "raw"


def test_price_map_two_good_example():
    imports = ImportMatrix([[2, 1], [1, 2]])
    price_map = build_price_map(imports, TauMatrix(np.eye(2)))
    assert np.allclose(price_map.entries, [[2 / 3, 1 / 3], [1 / 3, 2 / 3]], atol=1e-15)


def test_price_map_rejects_zero_world_imports():
    with pytest.raises(PositivityViolation):
        build_price_map(ImportMatrix([[0, 0], [1, 2]]), TauMatrix(np.eye(2)))


def test_solve_prices_swap_structure():
    # one good per country, all allocation crossed: symmetric answer
    imports = ImportMatrix(np.eye(2))
    tau = TauMatrix([[0, 1], [1, 0]])
    solution = solve_prices(imports, tau)
    assert np.allclose(solution.prices.values, [0.5, 0.5], atol=1e-12)
    assert solution.eigenvalue == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(solution.country_values, [0.5, 0.5], atol=1e-12)
    assert np.max(np.abs(solution.clearing_residual)) < 1e-12
    assert np.max(np.abs(solution.balance_residual)) < 1e-12


def test_solve_prices_two_good_example_is_immediate():
    imports = ImportMatrix([[2, 1], [1, 2]])
    solution = solve_prices(imports, TauMatrix(np.eye(2)))
    assert np.allclose(solution.prices.values, [0.5, 0.5], atol=1e-12)
    assert solution.eigenvalue == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(solution.country_values, [1.5, 1.5], atol=1e-12)
    # uniform start is already the fixed point here
    assert solution.iterations == 1
    assert solution.step_delta == 0.0


def test_solve_prices_single_good():
    imports = ImportMatrix([[3, 4]])
    tau = TauMatrix([[1.0], [1.0]])
    solution = solve_prices(imports, tau)
    assert solution.prices.values[0] == pytest.approx(1.0, abs=1e-15)
    assert solution.eigenvalue == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(solution.country_values, [3.0, 4.0], atol=1e-12)


def test_solve_prices_runs_out_of_iterations():
    imports = ImportMatrix([[2, 1], [1, 5]])
    tau = TauMatrix([[0.3, 0.7], [0.6, 0.4]])
    with pytest.raises(ConvergenceFailure) as info:
        solve_prices(imports, tau, max_iterations=1)
    assert info.value.iterations == 1
    assert info.value.step_delta > 1e-12
    assert info.value.exit_code == 3


def test_solve_prices_rejects_reducible_structure():
    from tradeclear import IrreducibilityViolation

    with pytest.raises(IrreducibilityViolation):
        solve_prices(ImportMatrix(np.eye(2)), TauMatrix(np.eye(2)))


def test_value_shares_sum_to_one():
    imports = ImportMatrix([[2, 1], [1, 2]])
    solution = solve_prices(imports, TauMatrix(np.eye(2)))
    shares = solution.value_shares()
    assert shares.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(shares, [0.5, 0.5], atol=1e-12)


def test_clearing_residual_hand_case():
    imports = ImportMatrix(np.eye(2))
    exports = ExportMatrix([[0, 1], [1, 0]])
    prices = PriceVector.simplex([0.9, 0.1])
    residual = clearing_residual(imports, exports, prices)
    # supply each good at earn/spend ratio, subtract demanded quantity
    assert residual[0] == pytest.approx(0.1 / 0.9 - 1.0, abs=1e-15)
    assert residual[1] == pytest.approx(0.9 / 0.1 - 1.0, abs=1e-15)


def test_clearing_residual_matches_loop_oracle(rng):
    for _ in range(20):
        imports, tau = random_instance(rng)
        exports = build_ideal_exports(imports, tau)
        prices = PriceVector.simplex(rng.uniform(0.1, 1.0, size=imports.good_count))
        residual = clearing_residual(imports, exports, prices)
        oracle = clearing_defect_loops(imports.entries, exports.entries, prices.values)
        assert np.allclose(residual, oracle, atol=1e-10)


def test_clearing_residual_zero_spend():
    imports = ImportMatrix([[0, 1], [0, 2]])
    exports = ExportMatrix([[1, 0], [2, 0]])
    with pytest.raises(ZeroSpend):
        clearing_residual(imports, exports, PriceVector.simplex([0.5, 0.5]))


def test_balance_vector_hand_case():
    imports = ImportMatrix(np.eye(2))
    exports = ExportMatrix([[0, 1], [1, 0]])
    balance = balance_vector(imports, exports, PriceVector.simplex([0.9, 0.1]))
    assert np.allclose(balance, [-0.8, 0.8], atol=1e-15)


def test_balance_vector_shape_guard():
    imports = ImportMatrix(np.eye(2))
    exports = ExportMatrix([[0, 1, 0], [1, 0, 0]])
    with pytest.raises(DimensionMismatch):
        balance_vector(imports, exports, PriceVector.simplex([0.9, 0.1]))


def test_verify_stationarity_detects_drift():
    imports = ImportMatrix([[2, 1], [1, 2]])
    mixing = build_mixing_matrix(imports, TauMatrix(np.eye(2)))
    solution = solve_prices(imports, TauMatrix(np.eye(2)))
    good = verify_stationarity(mixing, solution.country_values)
    assert good.passed
    bad = verify_stationarity(mixing, np.array([2.0, 1.0]))
    assert not bad.passed
    assert bad.violations[0].check == "stationarity"


def test_solver_agrees_with_country_space_oracle(rng):
    for _ in range(10):
        imports, tau = random_instance(rng)
        solution = solve_prices(imports, tau)
        oracle_prices, oracle_values = value_space_prices(imports.entries, tau.entries)
        assert np.allclose(solution.prices.values, oracle_prices, atol=1e-8)
        scaled = oracle_values / oracle_values.sum() * solution.country_values.sum()
        assert np.allclose(solution.country_values, scaled, atol=1e-7)


def test_solver_certificates_on_random_instances(rng):
    for _ in range(30):
        imports, tau = random_instance(rng)
        solution = solve_prices(imports, tau)
        assert np.all(solution.prices.values > 0)
        assert solution.prices.values.sum() == pytest.approx(1.0, abs=1e-12)
        assert abs(solution.eigenvalue - 1.0) < 1e-9
        assert np.max(np.abs(solution.clearing_residual)) < 1e-9
        assert np.max(np.abs(solution.balance_residual)) < 1e-9
        mixing = build_mixing_matrix(imports, tau)
        assert verify_stationarity(mixing, solution.country_values).passed
