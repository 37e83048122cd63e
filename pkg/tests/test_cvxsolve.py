import json

import numpy as np
import pytest

from rcrm_ia.core.filters import FilterSet
from rcrm_ia.core.links import build_links
from rcrm_ia.core.metrics import user_dims
from rcrm_ia.cvxsolve.admm import polish_ranks, project_lmi, solve
from rcrm_ia.cvxsolve.oracle import grid_min_ratio, grid_oracle_precoders, grid_oracle_zeroforcers, unit_directions
from rcrm_ia.cvxsolve.problem import (
    NuclearLmiProblem,
    VariableLayout,
    compile_affine,
    dump_problem,
    stacked_operator,
)
from rcrm_ia.cvxsolve.subproblems import (
    build_precoder_problem,
    build_zeroforcer_problem,
    cellular_masks,
    solve_precoders,
    solve_precoders_cellular,
    solve_zeroforcers,
)
from rcrm_ia.errors import ContractViolation
from rcrm_ia.model.channels import ChannelSet, gen_cellular_channels, gen_iid_channels
from rcrm_ia.numerics import hermitian_part, min_eig_herm, nuclear_norm, qr_orthonormalize, singular_values
from rcrm_ia.schemas.solver import SolveStatus
from rcrm_ia.schemas.system import SystemConfig
from rcrm_ia.utils.seeding import make_rng
from tests.helpers import FAST_SOLVER, crandn

FEAS_TOL = 1e-4


def _unit_filters(rng, K, rows, d):
    return [qr_orthonormalize(crandn(rng, rows, d)) for _ in range(K)]


def _assert_signals_feasible(ch, U, V, eps):
    for k in range(ch.K):
        S = U[k].conj().T @ ch.channel(k, k) @ V[k]
        assert np.linalg.norm(S - S.conj().T) <= FEAS_TOL
        assert min_eig_herm(hermitian_part(S)) >= eps - FEAS_TOL


def test_layout_pack_unpack_with_masks():
    mask = np.array([[True, False], [True, True]])
    layout = VariableLayout(shapes=((2, 2), (1, 3)), masks=(mask, np.ones((1, 3), dtype=bool)))
    assert layout.n_complex == 6 and layout.n_real == 12
    X = np.array([[1 + 2j, 9.0], [3.0, -1j]])
    Y = np.array([[0.5, 1j, 2.0]])
    theta = layout.pack([X, Y])
    np.testing.assert_allclose(theta[:6], [1.0, 3.0, 0.0, 0.5, 0.0, 2.0])
    np.testing.assert_allclose(theta[6:], [2.0, 0.0, -1.0, 0.0, 1.0, 0.0])
    back = layout.unpack(theta)
    np.testing.assert_allclose(back[0], np.where(mask, X, 0))
    np.testing.assert_allclose(back[1], Y)
    with pytest.raises(ContractViolation):
        layout.pack([X])
    with pytest.raises(ContractViolation):
        VariableLayout(shapes=((2, 2),), masks=(np.ones((2, 3), dtype=bool),))


def test_compile_affine_handles_conjugation(rng):
    M = crandn(rng, 3, 2)
    C = crandn(rng, 2, 2)
    layout = VariableLayout.dense([(3, 2)])

    def fn(X):
        return [X[0].conj().T @ M + C, 2 * X[0]]

    maps = compile_affine(fn, layout)
    assert [m.shape for m in maps] == [(2, 2), (3, 2)]
    for _ in range(5):
        theta = rng.standard_normal(layout.n_real)
        for m, expected in zip(maps, fn(layout.unpack(theta))):
            np.testing.assert_allclose(m.apply(theta), expected, atol=1e-12)
    assert not maps[0].is_zero


def test_problem_checks_eps_and_shapes():
    layout = VariableLayout.dense([(2, 1)])
    (lmi,) = compile_affine(lambda X: [X[0].conj().T @ np.ones((2, 1))], layout)
    with pytest.raises(ContractViolation):
        NuclearLmiProblem(layout=layout, nuclear_terms=(), lmi_terms=(lmi,), eps=0.0)
    (rect,) = compile_affine(lambda X: [X[0]], layout)
    with pytest.raises(ContractViolation):
        NuclearLmiProblem(layout=layout, nuclear_terms=(), lmi_terms=(rect,), eps=0.1)


def test_stacked_operator_and_equality_constraints(cfg_cellular, rng):
    ch = gen_cellular_channels(cfg_cellular, rng)
    U = _unit_filters(rng, 3, 4, 2)
    problem = build_precoder_problem(ch, U, 0.1, masks=cellular_masks(cfg_cellular))
    A, b, slices = stacked_operator(problem)
    assert A.shape == (sum(2 * t.shape[0] * t.shape[1] for t in problem.nuclear_terms + problem.lmi_terms),
                       problem.layout.n_real)
    assert len(slices) == 6 and b.shape == (A.shape[0],)
    # each precoder has 6 x 2 entries, 6 of them free
    assert len(problem.equality_constraints) == 3 * 6
    assert problem.free_vars == ((6, 2),) * 3


def test_project_lmi():
    W = np.array([[1.0, 2.0], [0.0, -3.0]], dtype=complex)
    P = project_lmi(W, 0.1)
    np.testing.assert_allclose(P, P.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(P)[0] >= 0.1 - 1e-12
    Q = np.array([[2.0, 0.5j], [-0.5j, 1.0]])
    np.testing.assert_allclose(project_lmi(Q, 0.1), Q, atol=1e-12)


def test_single_user_precoder_problem_has_zero_objective():
    cfg = SystemConfig(K=1, M_t=3, M_r=3, d=2)
    rng = make_rng(3)
    ch = gen_iid_channels(cfg, rng)
    U = _unit_filters(rng, 1, 3, 2)
    problem = build_precoder_problem(ch, U, cfg.eps)
    assert problem.nuclear_terms == ()
    V, report = solve_precoders(ch, U, cfg, options=FAST_SOLVER)
    assert V is not None
    assert report.objective == 0.0
    assert report.status != SolveStatus.INFEASIBLE
    _assert_signals_feasible(ch, U, V, cfg.eps)


def test_no_cross_links_gives_zero_objective(cfg_tiny):
    rng = make_rng(8)
    H = np.array(gen_iid_channels(cfg_tiny, rng).H)
    H[0, 1] = H[1, 0] = 0
    ch = ChannelSet(H=H)
    U = _unit_filters(rng, 2, 2, 1)
    V, report = solve_precoders(ch, U, cfg_tiny, options=FAST_SOLVER)
    assert V is not None
    assert report.objective <= 1e-6
    _assert_signals_feasible(ch, U, V, cfg_tiny.eps)


def test_precoder_solution_is_feasible_and_objective_matches_links(cfg_4x8_d1):
    rng = make_rng(11)
    ch = gen_iid_channels(cfg_4x8_d1, rng)
    U = _unit_filters(rng, 3, 4, 1)
    V, report = solve_precoders(ch, U, cfg_4x8_d1, options=FAST_SOLVER)
    assert V is not None
    assert report.status != SolveStatus.INFEASIBLE
    assert report.primal_feasibility <= FEAS_TOL
    _assert_signals_feasible(ch, U, V, cfg_4x8_d1.eps)
    links = build_links(ch, FilterSet(V=tuple(V), U=tuple(U)))
    assert report.objective == pytest.approx(sum(nuclear_norm(J) for J in links.J), rel=1e-9, abs=1e-12)


def test_zeroforcer_solution_is_feasible(cfg_4x8_d1):
    rng = make_rng(12)
    ch = gen_iid_channels(cfg_4x8_d1, rng)
    V = _unit_filters(rng, 3, 8, 1)
    U, report = solve_zeroforcers(ch, V, cfg_4x8_d1, options=FAST_SOLVER)
    assert U is not None and len(U) == 3
    assert report.status != SolveStatus.INFEASIBLE
    _assert_signals_feasible(ch, U, V, cfg_4x8_d1.eps)
    assert build_zeroforcer_problem(ch, V, 0.1, 2).name == "A_U[2]"


def _aligned_precoders(ch, U, rng):
    """Precoders with exactly zero interference and real signal gain 1."""
    V = []
    for l in range(ch.K):
        A = np.stack([ch.channel(k, l).conj().T @ U[k][:, 0] for k in range(ch.K) if k != l], axis=1)
        Q, _ = np.linalg.qr(A, mode="complete")
        v = Q[:, A.shape[1]:] @ crandn(rng, Q.shape[1] - A.shape[1])
        s = (U[l].conj().T @ ch.channel(l, l) @ v)[0]
        V.append((v / s)[:, None])
    return V


def test_precoder_solution_has_exact_zero_interference(cfg_4x8_d1):
    rng = make_rng(11)
    ch = gen_iid_channels(cfg_4x8_d1, rng)
    U = _unit_filters(rng, 3, 4, 1)
    V, report = solve_precoders(ch, U, cfg_4x8_d1, options=FAST_SOLVER)
    assert report.objective <= 1e-10
    f = FilterSet(V=tuple(V), U=tuple(U))
    assert all(np.all(singular_values(J) <= 1e-10) for J in build_links(ch, f).J)
    assert user_dims(ch, f, 80.0, 1, 1e-6) == [1, 1, 1]


def test_polish_ranks_removes_small_residuals(cfg_4x8_d1):
    rng = make_rng(21)
    ch = gen_iid_channels(cfg_4x8_d1, rng)
    U = _unit_filters(rng, 3, 4, 1)
    problem = build_precoder_problem(ch, U, cfg_4x8_d1.eps)
    exact = problem.pack(_aligned_precoders(ch, U, rng))
    assert problem.objective(exact) <= 1e-12
    noisy = exact + 1e-7 * rng.standard_normal(exact.shape)
    assert problem.objective(noisy) > 1e-8
    polished = polish_ranks(problem, noisy, 1e-5)
    assert problem.objective(polished) <= 1e-12
    assert problem.lmi_violation(polished) <= 1e-9
    assert np.linalg.norm(polished - noisy) <= 1e-5


def test_polish_ranks_keeps_full_rank_points(cfg_4x8_d1):
    rng = make_rng(22)
    ch = gen_iid_channels(cfg_4x8_d1, rng)
    U = _unit_filters(rng, 3, 4, 1)
    problem = build_precoder_problem(ch, U, cfg_4x8_d1.eps)
    theta = problem.pack(_unit_filters(rng, 3, 8, 1))
    assert polish_ranks(problem, theta, 1e-5) is theta


@pytest.mark.parametrize("seed", range(4))
def test_precoder_step_is_no_worse_than_grid_search(cfg_tiny, seed):
    rng = make_rng(seed)
    ch = gen_iid_channels(cfg_tiny, rng)
    U = _unit_filters(rng, 2, 2, 1)
    V, report = solve_precoders(ch, U, cfg_tiny, options=FAST_SOLVER)
    assert V is not None
    oracle = grid_oracle_precoders(ch, U, cfg_tiny.eps, grid=100)
    assert report.objective <= oracle * 1.02 + 1e-4


@pytest.mark.parametrize("seed", range(4))
def test_zeroforcer_step_is_no_worse_than_grid_search(cfg_tiny, seed):
    rng = make_rng(100 + seed)
    ch = gen_iid_channels(cfg_tiny, rng)
    V = _unit_filters(rng, 2, 2, 1)
    U, report = solve_zeroforcers(ch, V, cfg_tiny, options=FAST_SOLVER)
    assert U is not None
    oracle = grid_oracle_zeroforcers(ch, V, cfg_tiny.eps, grid=100)
    assert report.objective <= oracle * 1.02 + 1e-4


def _parallel_leak_instance(c):
    """Two users, 2x2, where the leaked and wanted directions coincide.

    With u_k = v_k = e1 and the first row (resp. column) of each cross
    channel a multiple of the direct channel's, every feasible filter leaks
    exactly |c_k| eps.
    """
    rng = make_rng(31)
    H = crandn(rng, 2, 2, 2, 2)
    H[1, 1][0, 0] = H[0, 0][0, 0]
    for k in range(2):
        l = 1 - k
        H[l, k][0, :] = c[k] * H[k, k][0, :]
        H[k, l][:, 0] = c[l] * H[k, k][:, 0]
    e1 = np.array([[1.0], [0.0]], dtype=complex)
    return ChannelSet(H=H), [e1, e1]


def test_parallel_leakage_has_closed_form(cfg_tiny):
    c = (0.5, 2.0)
    ch, E = _parallel_leak_instance(c)
    expected = cfg_tiny.eps * sum(abs(x) for x in c)
    V, report_v = solve_precoders(ch, E, cfg_tiny, options=FAST_SOLVER)
    assert V is not None
    assert report_v.objective == pytest.approx(expected, rel=1e-3, abs=1e-5)
    assert grid_oracle_precoders(ch, E, cfg_tiny.eps, grid=40) == pytest.approx(expected, rel=1e-9)
    U, report_u = solve_zeroforcers(ch, E, cfg_tiny, options=FAST_SOLVER)
    assert U is not None
    assert report_u.objective == pytest.approx(expected, rel=1e-3, abs=1e-5)


def test_objective_scales_with_channels_and_eps():
    cfg = SystemConfig(K=3, M_t=2, M_r=2, d=1)
    rng = make_rng(17)
    ch = gen_iid_channels(cfg, rng)
    U = _unit_filters(rng, 3, 2, 1)
    c = 3.0
    _, base = solve_precoders(ch, U, cfg, options=FAST_SOLVER)
    _, scaled = solve_precoders(ch.scaled(c), U, cfg.model_copy(update={"eps": c * cfg.eps}),
                                options=FAST_SOLVER)
    assert scaled.objective == pytest.approx(c * base.objective, rel=1e-3, abs=1e-5)


def test_cellular_precoders_keep_their_zero_pattern(cfg_cellular):
    rng = make_rng(4)
    ch = gen_cellular_channels(cfg_cellular, rng)
    U = _unit_filters(rng, 3, 4, 2)
    V, report = solve_precoders_cellular(ch, U, cfg_cellular, options=FAST_SOLVER)
    assert V is not None
    for k in range(3):
        for u in range(2):
            rows = list(cfg_cellular.zero_rows(u))
            assert np.all(V[k][rows, u] == 0)
    _assert_signals_feasible(ch, U, V, cfg_cellular.eps)
    with pytest.raises(ContractViolation):
        solve_precoders_cellular(ch, U, SystemConfig(K=3, M_t=6, M_r=4, d=2))


def test_dead_direct_channel_is_infeasible(cfg_tiny):
    rng = make_rng(9)
    H = np.array(gen_iid_channels(cfg_tiny, rng).H)
    H[0, 0] = 0
    ch = ChannelSet(H=H)
    U = _unit_filters(rng, 2, 2, 1)
    V, report = solve_precoders(ch, U, cfg_tiny, options=FAST_SOLVER)
    assert V is None
    assert report.status == SolveStatus.INFEASIBLE
    U2, report_u = solve_zeroforcers(ch, U, cfg_tiny, options=FAST_SOLVER)
    assert U2 is None
    assert report_u.status == SolveStatus.INFEASIBLE


def test_warm_start_is_used(cfg_tiny):
    rng = make_rng(10)
    ch = gen_iid_channels(cfg_tiny, rng)
    U = _unit_filters(rng, 2, 2, 1)
    problem = build_precoder_problem(ch, U, cfg_tiny.eps)
    V, _ = solve_precoders(ch, U, cfg_tiny, options=FAST_SOLVER)
    theta, report = solve(problem, V, FAST_SOLVER)
    assert theta is not None
    assert report.objective <= problem.objective(problem.pack(V)) + 1e-4


def test_dump_problem_writes_json(tmp_path, cfg_tiny):
    rng = make_rng(2)
    ch = gen_iid_channels(cfg_tiny, rng)
    problem = build_precoder_problem(ch, _unit_filters(rng, 2, 2, 1), 0.1)
    path = tmp_path / "problems" / "a_v.json"
    dump_problem(str(path), problem)
    doc = json.loads(path.read_text())
    assert doc["name"] == "A_V"
    assert doc["eps"] == 0.1
    assert doc["free_vars"] == [[2, 1], [2, 1]]
    assert len(doc["nuclear_terms"]) == 2 and len(doc["lmi_terms"]) == 2
    G = np.array(doc["lmi_terms"][0]["G"]).reshape(doc["lmi_terms"][0]["G_shape"])
    np.testing.assert_array_equal(G, problem.lmi_terms[0].G)


def test_grid_helpers(channels_4x8):
    X = unit_directions(10)
    assert X.shape == (100, 2)
    np.testing.assert_allclose(np.linalg.norm(X, axis=1), 1.0)
    a = np.array([1.0, 0.0])
    assert grid_min_ratio(a, 3 * a, 0.1, 20) == pytest.approx(0.3)
    assert grid_min_ratio(np.zeros(2), a, 0.1, 20) == float("inf")
    with pytest.raises(ContractViolation):
        grid_oracle_precoders(channels_4x8, [np.ones((4, 1))] * 3, 0.1)


def test_matches_generic_conic_solver(cfg_tiny):
    cp = pytest.importorskip("cvxpy")
    cfg = SystemConfig(K=3, M_t=2, M_r=2, d=1)
    rng = make_rng(23)
    ch = gen_iid_channels(cfg, rng)
    U = _unit_filters(rng, 3, 2, 1)
    V = [cp.Variable((2, 1), complex=True) for _ in range(3)]
    terms, constraints = [], []
    for k in range(3):
        J = cp.hstack([U[k].conj().T @ ch.channel(k, l) @ V[l] for l in range(3) if l != k])
        terms.append(cp.norm(J, "fro"))
        s = U[k].conj().T @ ch.channel(k, k) @ V[k]
        constraints += [cp.real(s) >= cfg.eps, cp.imag(s) == 0]
    reference = cp.Problem(cp.Minimize(sum(terms)), constraints)
    reference.solve()
    _, report = solve_precoders(ch, U, cfg, options=FAST_SOLVER)
    assert report.objective == pytest.approx(reference.value, rel=1e-3, abs=1e-5)
