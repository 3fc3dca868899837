"""Duality diagnostics: the odd-component bimodule, the phi and psi maps, the
functor D with its natural transformations, and the (M, theta) equivalence."""

import pytest

from altschur import GF, QQ, BipartiteGraph
from altschur.enumeration import enum_M, enum_N, graph_index
from altschur.koszul import (
    ASModule,
    IncompatibleTheta,
    SModule,
    ThetaPair,
    as_module_to_pair,
    bimodule_data,
    column_module,
    eta_map,
    find_module_isomorphism,
    koszul_dual,
    module_homs,
    pair_to_as_module,
    phi_analysis,
    psi_analysis,
    regular_as_module,
    regular_smodule,
    ringel_dual,
    zero_smodule,
)
from altschur.linalg import ExactMatrix, SpanSolver


# -- bimodule data ----------------------------------------------------------------


def test_bimodule_trivial_cell():
    bd = bimodule_data(1, 1, QQ)
    assert len(bd.left_mult) == 1
    assert bd.left_mult[0].rows == [[QQ.one]]
    assert bd.right_mult[0].rows == [[QQ.one]]


def test_bimodule_shapes():
    bd = bimodule_data(2, 3, QQ)
    assert len(bd.left_mult) == len(enum_M(2, 3)) == 20
    assert all(m.shape == (4, 4) for m in bd.left_mult)
    assert all(m.shape == (4, 4) for m in bd.right_mult)


def test_bimodule_commutation_full():
    bimodule_data(2, 2, QQ).check_commutation(level="full")


def test_bimodule_commutation_detects_corruption():
    bd = bimodule_data(2, 2, QQ)
    probe = ExactMatrix.zeros(QQ, 6, 6)
    probe.rows[0][1] = QQ.one
    bd.left_mult[2] = probe
    with pytest.raises(ValueError, match="commute"):
        bd.check_commutation(level="full")


# -- module construction checks -----------------------------------------------------


def test_regular_module_dims():
    assert regular_smodule(2, 2, QQ).dim == 10
    assert regular_as_module(2, 2, QQ).dim == 16


def test_smodule_rejects_corrupted_action():
    good = regular_smodule(2, 2, QQ).action
    bad = list(good)
    bad[3] = bad[3].scale(QQ.from_int(2))
    with pytest.raises(ValueError, match="not multiplicative"):
        SModule(2, 2, QQ, 10, bad)
    # the same data passes with validation off
    assert SModule(2, 2, QQ, 10, bad, validate="none").dim == 10


def test_smodule_identity_check():
    doubled = [a.scale(QQ.from_int(2)) for a in regular_smodule(2, 2, QQ).action]
    with pytest.raises(ValueError, match="identity"):
        SModule(2, 2, QQ, 10, doubled)


def test_smodule_shape_and_count_checks():
    with pytest.raises(ValueError, match="action matrices"):
        SModule(2, 2, QQ, 3, [ExactMatrix.identity(QQ, 3)])
    with pytest.raises(ValueError, match="shape"):
        SModule(2, 2, QQ, 3, [ExactMatrix.identity(QQ, 2) for _ in range(10)])


def test_smodule_unknown_validation_level():
    with pytest.raises(ValueError, match="validation level"):
        regular_smodule(2, 2, QQ, validate="paranoid")


# -- phi --------------------------------------------------------------------------


@pytest.mark.parametrize("field", [QQ, GF(3), GF(5)])
def test_phi_iso_2_2(field):
    report = phi_analysis(2, 2, field)
    assert (report.tensor_dim, report.phi_rank, report.target_dim) == (10, 10, 10)
    assert report.iso


def test_phi_no_odd_part():
    report = phi_analysis(1, 2, QQ)
    assert report.tensor_dim == 0
    assert not report.surjective
    assert not report.iso
    assert report.method == "empty"


def test_phi_single_odd_symbol():
    report = phi_analysis(2, 4, QQ)
    assert report.tensor_dim == 1
    assert report.phi_rank == 1
    assert report.target_dim == 35
    assert report.injective and not report.surjective


def test_phi_json_keys():
    data = phi_analysis(2, 2, QQ).to_json_dict()
    assert set(data) == {
        "tensor_dim",
        "phi_rank",
        "target_dim",
        "surjective",
        "injective",
        "iso",
        "method",
    }


# -- psi --------------------------------------------------------------------------


@pytest.mark.parametrize(
    "n,d,kernel_dim,commutant_dim",
    [
        (1, 1, 0, 1),
        (2, 2, 0, 10),
        (2, 3, 16, 4),
        (2, 4, 34, 1),
    ],
)
def test_psi_dims(n, d, kernel_dim, commutant_dim):
    report = psi_analysis(n, d, QQ)
    assert report.kernel_dim == kernel_dim
    assert report.commutant_dim == commutant_dim
    assert report.source_dim == len(enum_M(n, d))
    assert report.iso == (n >= d)


def test_psi_gf5_matches_rational():
    report = psi_analysis(2, 3, GF(5))
    assert report.kernel_dim == 16
    assert not report.iso


def test_psi_kernel_contains_parallel_edge_symbol():
    """Three parallel edges land on zero: the left multiplication by that even
    symbol kills every odd symbol."""
    report = psi_analysis(2, 3, QQ)
    target = graph_index("M", 2, 3)[BipartiteGraph.from_adj([[3, 0], [0, 0]])]
    solver = SpanSolver(QQ, report.kernel_vectors)
    assert solver.coordinates({target: QQ.one}) is not None


def test_psi_kernel_elements_annihilate():
    from altschur import multiply, zeta
    from altschur.algebra import GradedElement

    report = psi_analysis(2, 3, QQ)
    elems = report.kernel_elements()
    assert len(elems) == report.kernel_dim
    for x in elems[:4]:
        for a in enum_N(2, 3):
            assert multiply(x, GradedElement.from_symbol(zeta(a), QQ)).is_zero()


def test_psi_json_keys():
    data = psi_analysis(2, 2, QQ).to_json_dict()
    assert set(data) == {"kernel_dim", "commutant_dim", "source_dim", "iso", "method"}


# -- the functor D ----------------------------------------------------------------


def test_koszul_dual_of_regular():
    D1 = koszul_dual(regular_smodule(2, 2, QQ))
    assert D1.dim == 6
    assert koszul_dual(D1).dim == 10


def test_koszul_dual_of_zero():
    assert koszul_dual(zero_smodule(2, 2, QQ)).dim == 0


def test_koszul_dual_of_regular_is_odd_component():
    """D applied to the left regular module recovers the odd component with
    its left action."""
    D1 = koszul_dual(regular_smodule(2, 2, QQ))
    bd = bimodule_data(2, 2, QQ)
    odd = SModule(2, 2, QQ, len(enum_N(2, 2)), bd.left_mult)
    witness = find_module_isomorphism(D1, odd)
    assert witness is not None
    assert witness.rank() == D1.dim


def test_eta_regular_2_2():
    report = eta_map(regular_smodule(2, 2, QQ))
    assert (report.source_dim, report.target_dim, report.rank) == (10, 10, 10)
    assert report.iso


@pytest.mark.parametrize("lam", [(1, 1), (2, 0)])
def test_eta_column_modules(lam):
    report = eta_map(column_module(2, 2, QQ, lam))
    assert report.iso


def test_eta_fails_when_phi_does():
    report = eta_map(regular_smodule(2, 4, QQ))
    assert report.source_dim == 1
    assert report.target_dim == 35
    assert not report.iso


def test_eta_zero_module():
    report = eta_map(zero_smodule(2, 2, QQ))
    assert report.iso
    assert report.to_json_dict()["rank"] == 0


def test_ringel_dual_dims():
    assert ringel_dual(regular_smodule(2, 2, QQ)).dim == 6
    assert ringel_dual(zero_smodule(2, 2, QQ)).dim == 0


def test_ringel_adjunction_dimensions():
    """Hom(D(M), N) and Hom(M, Hom(S⁻, N)) have the same dimension."""
    M = column_module(2, 2, QQ, (1, 1))
    N = regular_smodule(2, 2, QQ)
    assert len(module_homs(koszul_dual(M), N)) == len(module_homs(M, ringel_dual(N)))


def test_module_homs_of_regular():
    S = regular_smodule(2, 2, QQ)
    assert len(module_homs(S, S)) == 10


def test_module_homs_parameter_mismatch():
    with pytest.raises(ValueError, match="matching parameters"):
        module_homs(regular_smodule(2, 2, QQ), regular_smodule(2, 2, GF(5)))


# -- modules over the full algebra as pairs ----------------------------------------


def test_pair_roundtrip_regular():
    AS = regular_as_module(2, 2, QQ)
    pair = as_module_to_pair(AS)
    assert pair.theta.shape == (16, 16)
    back = pair_to_as_module(pair)
    assert back.action == AS.action
    assert back.odd_action == AS.odd_action


def test_zero_theta_rejected():
    base = as_module_to_pair(regular_as_module(2, 2, QQ)).base
    D1 = koszul_dual(base, validate="none")
    zero_theta = ExactMatrix.zeros(QQ, base.dim, D1.dim)
    with pytest.raises(IncompatibleTheta, match="squared"):
        pair_to_as_module(ThetaPair(base, zero_theta))


def test_zero_module_zero_theta_valid():
    Z = zero_smodule(2, 2, QQ)
    module = pair_to_as_module(ThetaPair(Z, ExactMatrix.zeros(QQ, 0, 0)))
    assert module.dim == 0


def test_theta_shape_checked():
    base = regular_smodule(2, 2, QQ)
    with pytest.raises(ValueError, match="shape"):
        pair_to_as_module(ThetaPair(base, ExactMatrix.zeros(QQ, 10, 3)))


def test_corrupted_odd_action_fails_descent():
    AS = regular_as_module(2, 2, QQ)
    odd = list(AS.odd_action)
    corrupt = ExactMatrix.zeros(QQ, 16, 16)
    for i in range(16):
        for j in range(16):
            corrupt.rows[i][j] = odd[0].rows[i][j]
    corrupt.rows[0][0] = QQ.from_int(7)
    odd[0] = corrupt
    sneaky = ASModule(2, 2, QQ, 16, list(AS.action), odd, validate="none")
    with pytest.raises(IncompatibleTheta, match="descend"):
        as_module_to_pair(sneaky)


def test_as_module_rejects_corrupted_odd_block():
    AS = regular_as_module(2, 2, QQ)
    odd = list(AS.odd_action)
    odd[1] = odd[1].scale(QQ.from_int(3))
    with pytest.raises(ValueError, match="action mismatch"):
        ASModule(2, 2, QQ, 16, list(AS.action), odd, validate="full")
