import numpy as np
import pytest

from tradeclear import (
    DimensionMismatch,
    ImportMatrix,
    IrreducibilityViolation,
    NegativeEntry,
    PositivityViolation,
    TauMatrix,
    build_goods_coupling,
    build_ideal_exports,
    build_mixing_matrix,
    check_irreducible,
    strongly_connected_components,
    validate_tau,
)

from conftest import random_instance
from oracles import mixing_by_loops, reachable_irreducible


def test_validate_tau_accepts_unit_rows():
    assert validate_tau(np.eye(2)).passed
    assert validate_tau(TauMatrix([[0.3, 0.7], [0.5, 0.5]])).passed


def test_validate_tau_flags_bad_row_sum():
    report = validate_tau(np.array([[0.5, 0.4], [0.5, 0.5]]))
    assert not report.passed
    violation = report.violations[0]
    assert violation.check == "tau_row_sum"
    assert violation.index == 0
    assert violation.magnitude == pytest.approx(0.1)


def test_validate_tau_flags_negative_entry():
    report = validate_tau(np.array([[1.2, -0.2], [0.5, 0.5]]))
    assert not report.passed
    assert report.violations[0].check == "tau_nonnegative"


def test_validate_tau_tolerates_tiny_drift():
    tau = np.array([[0.5, 0.5 + 5e-13], [0.5, 0.5]])
    assert validate_tau(tau).passed


def test_tau_normalized_makes_rows_exact():
    tau = TauMatrix([[0.3, 0.7 + 5e-13], [0.2, 0.8]])
    exact = tau.normalized()
    assert np.all(exact.entries.sum(axis=1) == 1.0)


def test_tau_normalized_rejects_zero_row():
    with pytest.raises(PositivityViolation):
        TauMatrix([[0.0, 0.0], [0.5, 0.5]]).normalized()


def test_mixing_matrix_two_country_example():
    imports = ImportMatrix([[2, 1], [1, 2]])
    mixing = build_mixing_matrix(imports, TauMatrix(np.eye(2)))
    assert np.allclose(mixing.entries, [[2 / 3, 1 / 3], [1 / 3, 2 / 3]], atol=1e-15)
    assert mixing.row_stochastic()


def test_mixing_matrix_matches_loop_oracle(rng):
    for _ in range(20):
        imports, tau = random_instance(rng)
        mixing = build_mixing_matrix(imports, tau)
        oracle = mixing_by_loops(imports.entries, tau.entries)
        assert np.allclose(mixing.entries, oracle, atol=1e-12)
        assert mixing.row_stochastic()


def test_mixing_matrix_requires_positive_world_imports():
    with pytest.raises(PositivityViolation):
        build_mixing_matrix(ImportMatrix([[0, 0], [1, 2]]), TauMatrix(np.eye(2)))


def test_goods_coupling_shape_and_values():
    imports = ImportMatrix([[2, 1], [1, 2]])
    coupling = build_goods_coupling(imports, TauMatrix(np.eye(2)))
    assert np.array_equal(coupling.entries, [[2, 1], [1, 2]])


def test_goods_coupling_rejects_misshapen_tau():
    with pytest.raises(DimensionMismatch):
        build_goods_coupling(ImportMatrix([[2, 1], [1, 2]]), TauMatrix([[0.5, 0.5]]))


def test_scc_cycle_is_one_component():
    assert strongly_connected_components([[1], [2], [0]]) == [[0, 1, 2]]


def test_scc_chain_in_condensation_order():
    # 0 -> 1 -> 2 with no way back: sources first
    assert strongly_connected_components([[1], [2], []]) == [[0], [1], [2]]


def test_scc_two_blocks():
    # block {0,1} feeds block {2,3}
    adjacency = [[1], [0, 2], [3], [2]]
    assert strongly_connected_components(adjacency) == [[0, 1], [2, 3]]


def test_scc_handles_deep_chain():
    n = 50000
    adjacency = [[i + 1] for i in range(n - 1)] + [[]]
    components = strongly_connected_components(adjacency)
    assert len(components) == n
    assert components[0] == [0]
    assert components[-1] == [n - 1]


def test_check_irreducible_identity_splits():
    verdict = check_irreducible(np.eye(2))
    assert not verdict.irreducible
    assert len(verdict.components) == 2


def test_check_irreducible_positive_matrix():
    assert check_irreducible(np.ones((3, 3))).irreducible


def test_check_irreducible_permutation_cycle():
    cycle = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=float)
    assert check_irreducible(cycle).irreducible


def test_check_irreducible_one_by_one():
    # a single node is trivially strongly connected, even with weight zero
    assert check_irreducible(np.array([[0.0]])).irreducible
    assert check_irreducible(np.array([[2.5]])).irreducible


def test_check_irreducible_agrees_with_reachability(rng):
    for _ in range(200):
        k = int(rng.integers(2, 7))
        pattern = (rng.random((k, k)) < 0.35).astype(float)
        assert check_irreducible(pattern).irreducible == reachable_irreducible(pattern)


def test_check_irreducible_rejects_bad_input():
    with pytest.raises(DimensionMismatch):
        check_irreducible(np.ones((2, 3)))
    with pytest.raises(NegativeEntry):
        check_irreducible(np.array([[1.0, -1.0], [0.0, 1.0]]))


def test_ideal_exports_two_country_identity_tau():
    # C = I with cross allocation: each country supplies the other's good
    imports = ImportMatrix(np.eye(2))
    exports = build_ideal_exports(imports, TauMatrix([[0, 1], [1, 0]]))
    assert np.allclose(exports.entries, [[0, 1], [1, 0]], atol=1e-15)


def test_ideal_exports_two_country_mixed():
    imports = ImportMatrix([[2, 1], [1, 2]])
    exports = build_ideal_exports(imports, TauMatrix(np.eye(2)))
    assert np.allclose(exports.entries, [[5 / 3, 4 / 3], [4 / 3, 5 / 3]], atol=1e-15)


def test_ideal_exports_factor_through_mixing(rng):
    for _ in range(20):
        imports, tau = random_instance(rng)
        exports = build_ideal_exports(imports, tau)
        mixing = build_mixing_matrix(imports, tau)
        assert np.allclose(
            exports.entries, imports.entries @ mixing.entries, atol=1e-12, rtol=0
        )
        # constructed structure conserves world totals per good
        assert np.allclose(
            exports.entries.sum(axis=1), imports.entries.sum(axis=1), rtol=1e-12
        )


def test_ideal_exports_rejects_reducible_coupling():
    with pytest.raises(IrreducibilityViolation) as info:
        build_ideal_exports(ImportMatrix(np.eye(2)), TauMatrix(np.eye(2)))
    assert len(info.value.components) == 2


def test_ideal_exports_rejects_zero_world_imports():
    with pytest.raises(PositivityViolation):
        build_ideal_exports(ImportMatrix([[0, 0], [1, 2]]), TauMatrix([[0.5, 0.5], [0.5, 0.5]]))
