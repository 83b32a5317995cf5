import numpy as np
import pytest

from noclick import ed, gaussian


def dense_annihilators(L):
    dim = 2**L
    eye = np.eye(dim)
    return [
        np.column_stack([ed.apply_annihilation(eye[:, m], j) for m in range(dim)])
        for j in range(L)
    ]


@pytest.fixture(scope="module")
def quench_state():
    # reduced state of an evolved chain where cyclic flux orders differ
    L = 8
    Hi = ed.build_hamiltonian("xy-init", {"kappa": 0.5, "h": 0.3}, L)
    He = ed.build_hamiltonian("xx-evolve", {"gamma": 0.5}, L)
    return ed.evolve_noclick(ed.ground_state(Hi), He, 0.7)


def test_jordan_wigner_algebra():
    ann = dense_annihilators(3)
    dim = ann[0].shape[0]
    for i in range(3):
        for j in range(3):
            anti = ann[i] @ ann[j].conj().T + ann[j].conj().T @ ann[i]
            assert np.allclose(anti, (i == j) * np.eye(dim), atol=1e-14)
            assert np.allclose(ann[i] @ ann[j] + ann[j] @ ann[i], 0.0, atol=1e-14)


def test_builders_match_dense_operators():
    L = 4
    ann = dense_annihilators(L)
    H = np.zeros((2**L, 2**L), dtype=complex)
    coeff = 0.4 - 0.9j
    ed._add_hopping(H, coeff, 1, 3, L)
    ref = coeff * ann[1].conj().T @ ann[3]
    ref += ref.conj().T
    assert np.allclose(H, ref, atol=1e-14)
    H[:] = 0.0
    ed._add_pairing(H, coeff, 0, 2, L)
    ref = coeff * ann[0].conj().T @ ann[2].conj().T
    ref += ref.conj().T
    assert np.allclose(H, ref, atol=1e-14)


def test_kappa_zero_conserves_charge():
    L = 6
    H = ed.build_hamiltonian("xy-init", {"kappa": 0.0, "h": 0.7}, L)
    Q = np.diag(ed.occupation_diagonal(L).astype(complex))
    assert np.max(np.abs(H @ Q - Q @ H)) < 1e-13


def test_evolve_hamiltonian_antihermitian_parts():
    L = 6
    He = ed.build_hamiltonian("xx-evolve", {"gamma": 0.8}, L)
    anti = (He - He.conj().T) / 2.0
    expect = -1j * 0.4 * np.diag(ed.occupation_diagonal(L).astype(complex))
    assert np.max(np.abs(anti - expect)) < 1e-13
    L = 8
    Hs = ed.build_hamiltonian("ssh-evolve", {"h_ev": 0.3, "gamma": 0.6}, L)
    anti = (Hs - Hs.conj().T) / 2.0
    occ = np.array(
        [[(m >> j) & 1 for j in range(L)] for m in range(2**L)], dtype=float
    )
    balance = occ[:, 0::2].sum(axis=1) - occ[:, 1::2].sum(axis=1)
    # loss on first site of each cell, gain on the second
    expect = -1j * 0.3 * np.diag(balance.astype(complex))
    assert np.max(np.abs(anti - expect)) < 1e-13


def test_unitary_evolution_preserves_norm_and_energy():
    L = 6
    Hi = ed.build_hamiltonian("xy-init", {"kappa": 0.8, "h": 0.2}, L)
    He = ed.build_hamiltonian("xx-evolve", {"gamma": 0.0}, L)
    psi = ed.ground_state(Hi)
    e0 = np.vdot(psi, He @ psi)
    out = ed.evolve_noclick(psi, He, 2.3)
    assert np.isclose(np.linalg.norm(out), 1.0, atol=1e-10)
    assert np.isclose(np.vdot(out, He @ out).real, e0.real, atol=1e-10)


def test_noclick_norm_decays_without_renormalization():
    L = 6
    Hi = ed.build_hamiltonian("xy-init", {"kappa": 0.5, "h": 0.3}, L)
    He = ed.build_hamiltonian("xx-evolve", {"gamma": 1.0}, L)
    psi = ed.ground_state(Hi)
    raw = ed.evolve_noclick(psi, He, 1.0, renormalize=False)
    assert np.linalg.norm(raw) < 1.0 - 1e-3
    ren = ed.evolve_noclick(psi, He, 1.0)
    assert np.isclose(np.linalg.norm(ren), 1.0, atol=1e-12)


def test_ground_state_phase_convention():
    L = 6
    H = ed.build_hamiltonian("xy-init", {"kappa": 0.5, "h": 0.3}, L)
    psi = ed.ground_state(H)
    lead = psi[np.argmax(np.abs(psi))]
    assert abs(lead.imag) < 1e-12 and lead.real > 0.0


def test_two_point_functions_on_filled_site():
    psi = np.zeros(4, dtype=complex)
    psi[1] = 1.0  # c_0^dag |00>
    C, F = ed.two_point_functions(psi)
    assert np.allclose(C, np.diag([1.0, 0.0]), atol=1e-14)
    assert np.allclose(F, 0.0, atol=1e-14)


def test_reduced_density_matrix_basics(quench_state):
    rho = ed.reduced_density_matrix(quench_state, 4)
    assert np.isclose(np.trace(rho).real, 1.0, atol=1e-12)
    assert np.max(np.abs(rho - rho.conj().T)) < 1e-12
    lam = np.linalg.eigvalsh(rho)
    assert lam.min() > -1e-12


def test_charge_projectors_complete_and_orthogonal():
    projs = ed.charge_projectors(3)
    total = sum(projs)
    assert np.allclose(total, np.eye(8), atol=1e-14)
    for a, Pa in enumerate(projs):
        for b, Pb in enumerate(projs):
            ref = Pa if a == b else np.zeros_like(Pa)
            assert np.allclose(Pa @ Pb, ref, atol=1e-14)


def test_fourier_decohere_matches_projector_form(quench_state):
    rho = ed.reduced_density_matrix(quench_state, 4)
    direct = ed.decohere(rho)
    flux = ed.fourier_decohere(rho, 64)
    assert np.max(np.abs(direct - flux)) < 1e-12


def test_diagonal_charge_state_has_zero_asymmetry():
    rng = np.random.default_rng(3)
    lam = rng.uniform(0.0, 1.0, size=8)
    rho = np.diag(lam / lam.sum()).astype(complex)
    assert abs(ed.exact_asymmetry(rho, 2)) < 1e-13


def test_single_site_superposition_asymmetry():
    # site 0 in (|0> + |1>)/sqrt(2): pure reduced state, decohered to I/2
    psi = np.zeros(4, dtype=complex)
    psi[0] = 1.0 / np.sqrt(2.0)
    psi[1] = 1.0 / np.sqrt(2.0)
    rho = ed.reduced_density_matrix(psi, 1)
    assert np.isclose(ed.exact_asymmetry(rho, 2), np.log(2.0), atol=1e-12)
    assert np.isclose(ed.exact_asymmetry(rho, 1), np.log(2.0), atol=1e-12)


def test_equal_flux_moment_reduces_to_purity(quench_state):
    rho = ed.reduced_density_matrix(quench_state, 4)
    for n in (2, 3):
        z = ed.exact_charged_moment(rho, np.full(n, 0.37))
        assert np.isclose(z, np.trace(np.linalg.matrix_power(rho, n)), atol=1e-12)
        s_n = ed.dense_renyi_entropy(rho, n)
        assert np.isclose(z.real, np.exp((1 - n) * s_n), atol=1e-12)


def test_correlation_matrix_reproduces_dense_reduced_state(quench_state):
    rho = ed.reduced_density_matrix(quench_state, 4)
    ann = dense_annihilators(4)
    G = ed.correlation_matrix(quench_state, 4, "nambu-site")
    d = G.dim
    dense = np.zeros((d, d), dtype=complex)
    slots = [op for pair in zip(ann, [a.conj().T for a in ann]) for op in pair]
    for a in range(d):
        for b in range(d):
            dense[a, b] = 2.0 * np.trace(rho @ slots[a] @ slots[b].conj().T) - (
                a == b
            )
    assert np.max(np.abs(dense - G.entries)) < 1e-12


def test_charged_moment_flux_order_is_pinned(quench_state):
    # state where the two cyclic orderings genuinely differ: the block
    # determinant must track the ascending-order trace, not its reversal
    rho = ed.reduced_density_matrix(quench_state, 4)
    G = ed.correlation_matrix(quench_state, 4, "nambu-site")
    mask = gaussian.charge_mask("nambu-site", 4)
    alphas = np.array([0.9, -0.4, 0.3])
    occ = ed.occupation_diagonal(4)
    diffs = alphas - np.roll(alphas, -1)
    z_fwd = ed.exact_charged_moment(rho, alphas)
    prod = np.eye(rho.shape[0], dtype=complex)
    for dd in diffs[::-1]:
        prod = prod @ (rho * np.exp(1j * dd * occ)[None, :])
    z_rev = np.trace(prod)
    assert np.isclose(
        z_fwd, 0.10311502456367601 - 0.0014983009175394487j, atol=1e-12
    )
    assert abs(z_fwd - z_rev) > 1e-5
    z = gaussian.charged_moment(G, mask, alphas)
    assert min(abs(z - z_fwd), abs(z + z_fwd)) < 1e-12
    assert min(abs(z - z_rev), abs(z + z_rev)) > 1e-6


def test_gaussian_engine_matches_dense_oracle(quench_state):
    rho = ed.reduced_density_matrix(quench_state, 4)
    G = ed.correlation_matrix(quench_state, 4, "nambu-site")
    mask = gaussian.charge_mask("nambu-site", 4)
    s2 = ed.dense_renyi_entropy(rho, 2)
    assert np.isclose(gaussian.renyi_entropy(G, 2), s2, atol=1e-12)
    res = gaussian.entanglement_asymmetry(G, mask, n=2, n_alpha=64)
    assert np.isclose(res.value, ed.exact_asymmetry(rho, 2), atol=1e-10)
    rng = np.random.default_rng(11)
    for n in (2, 3, 4):
        alphas = rng.uniform(-np.pi, np.pi, size=n)
        alphas[-1] = 0.0
        z_ed = ed.exact_charged_moment(rho, alphas)
        z = gaussian.charged_moment(G, mask, alphas)
        assert min(abs(z - z_ed), abs(z + z_ed)) < 1e-12
