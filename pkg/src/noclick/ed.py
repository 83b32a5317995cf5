"""Dense exact simulation on the full 2^L Fock space (L <= 12).

Ground truth for the Gaussian machinery: both protocol Hamiltonians are
built as explicit 2^L x 2^L matrices, the no-click evolution is a dense
non-Hermitian exponential with renormalization, and entropies/asymmetry
come from the reduced density matrix and charge projectors directly.
Exists for correctness, not speed.

Conventions: occupation-number basis with site 0 in the least significant
bit; c_j |n> = delta_{n_j,1} (-1)^{sum_{i<j} n_i} |n - e_j>.  States are
bare complex vectors of length 2^L; reduced density matrices are bare
2^ell x 2^ell arrays over the first ell sites (low bits).
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .gaussian import CorrelationMatrix

L_MAX = 12


def _check_length(L: int) -> None:
    if L % 2:
        raise ValueError("need even L, got %d" % L)
    if L > L_MAX:
        raise ValueError("dense oracle is limited to L <= %d, got %d" % (L_MAX, L))
    if L < 2:
        raise ValueError("need L >= 2")


def _jw_sign(n: int, j: int) -> int:
    return -1 if bin(n & ((1 << j) - 1)).count("1") % 2 else 1


def apply_annihilation(psi: np.ndarray, j: int) -> np.ndarray:
    """c_j acting on a Fock vector."""
    L = _num_sites(psi)
    out = np.zeros_like(psi)
    for n in range(len(psi)):
        if (n >> j) & 1:
            out[n ^ (1 << j)] += _jw_sign(n, j) * psi[n]
    return out


def apply_creation(psi: np.ndarray, j: int) -> np.ndarray:
    """c_j^dag acting on a Fock vector."""
    out = np.zeros_like(psi)
    for n in range(len(psi)):
        if not (n >> j) & 1:
            out[n | (1 << j)] += _jw_sign(n, j) * psi[n]
    return out


def _num_sites(psi: np.ndarray) -> int:
    L = int(np.log2(len(psi)) + 0.5)
    if 2**L != len(psi):
        raise ValueError("state length is not a power of two")
    return L


def _add_hopping(H: np.ndarray, coeff: complex, i: int, j: int, L: int) -> None:
    # coeff * c_i^dag c_j + its Hermitian conjugate
    for n in range(1 << L):
        if not (n >> j) & 1:
            continue
        m1 = n ^ (1 << j)
        s1 = _jw_sign(n, j)
        if (m1 >> i) & 1:
            continue
        m2 = m1 | (1 << i)
        s2 = _jw_sign(m1, i)
        H[m2, n] += coeff * s1 * s2
        H[n, m2] += np.conj(coeff) * s1 * s2


def _add_pairing(H: np.ndarray, coeff: complex, i: int, j: int, L: int) -> None:
    # coeff * c_i^dag c_j^dag + its Hermitian conjugate
    for n in range(1 << L):
        if (n >> j) & 1:
            continue
        m1 = n | (1 << j)
        s1 = _jw_sign(n, j)
        if (m1 >> i) & 1:
            continue
        m2 = m1 | (1 << i)
        s2 = _jw_sign(m1, i)
        H[m2, n] += coeff * s1 * s2
        H[n, m2] += np.conj(coeff) * s1 * s2


def occupation_diagonal(L: int) -> np.ndarray:
    """Diagonal of the total number operator."""
    return np.bitwise_count(np.arange(1 << L, dtype=np.uint64)).astype(float)


def build_hamiltonian(protocol: str, params: dict, L: int) -> np.ndarray:
    """Dense Hamiltonian (or no-click evolution generator) on 2^L states.

    protocols and their params:
      "xy-init":    kappa, h      pairing chain with antiperiodic wrap bond
      "xx-evolve":  gamma         hopping chain minus i*gamma/2 * N
      "ssh-init":   kappa, h      dimerized chain, pairing on every bond
      "ssh-evolve": h_ev, gamma   dimerized hopping plus i*gamma/2*(N_e - N_o)
                                  (gain on the second site of each cell)
    """
    _check_length(L)
    dim = 1 << L
    H = np.zeros((dim, dim), dtype=complex)

    if protocol == "xy-init":
        kappa, h = params["kappa"], params["h"]
        for j in range(L):
            jp = (j + 1) % L
            s = -1.0 if j == L - 1 else 1.0  # antiperiodic: c_{L+1} = -c_1
            _add_hopping(H, -s, j, jp, L)
            if kappa:
                _add_pairing(H, -s * kappa, j, jp, L)
        H[np.diag_indices(dim)] += 2.0 * h * occupation_diagonal(L)
        return H

    if protocol == "xx-evolve":
        gamma = params["gamma"]
        H = build_hamiltonian("xy-init", {"kappa": 0.0, "h": 0.0}, L)
        H[np.diag_indices(dim)] += -0.5j * gamma * occupation_diagonal(L)
        return H

    if protocol == "ssh-init":
        kappa, h = params["kappa"], params["h"]
        if L % 4:
            raise ValueError("dimerized chain needs L divisible by 4, got %d" % L)
        for m in range(L // 2):
            _add_hopping(H, -(1.0 + h / 2.0), 2 * m, 2 * m + 1, L)
        for m in range(L // 2 - 1):
            _add_hopping(H, -(1.0 - h / 2.0), 2 * m + 1, 2 * m + 2, L)
        _add_hopping(H, +(1.0 - h / 2.0), L - 1, 0, L)  # antiperiodic wrap
        if kappa:
            for j in range(L - 1):
                _add_pairing(H, -kappa, j, j + 1, L)
            _add_pairing(H, +kappa, L - 1, 0, L)
        return H

    if protocol == "ssh-evolve":
        h_ev, gamma = params["h_ev"], params["gamma"]
        H = build_hamiltonian("ssh-init", {"kappa": 0.0, "h": h_ev}, L)
        staggered = np.zeros(dim)
        for j in range(L):
            bit = ((np.arange(dim) >> j) & 1).astype(float)
            staggered += bit if j % 2 else -bit
        H[np.diag_indices(dim)] += 0.5j * gamma * staggered
        return H

    raise ValueError("unknown protocol %r" % protocol)


def ground_state(H: np.ndarray) -> np.ndarray:
    """Lowest eigenvector of a Hermitian Hamiltonian, phase-fixed."""
    if np.max(np.abs(H - H.conj().T)) > 1e-10:
        raise ValueError("ground_state needs a Hermitian matrix")
    _, vec = scipy.linalg.eigh(H, subset_by_index=[0, 0])
    psi = vec[:, 0]
    pivot = np.argmax(np.abs(psi))
    psi = psi * (np.abs(psi[pivot]) / psi[pivot])
    return psi.astype(complex)


def evolve_noclick(
    psi: np.ndarray, H_ev: np.ndarray, t: float, renormalize: bool = True
) -> np.ndarray:
    """exp(-i H_ev t)|psi>, by dense eigendecomposition, then renormalized.

    Falls back to the scaled-and-squared matrix exponential if the
    generator is too close to defective for spectral reconstruction.
    """
    if t < 0:
        raise ValueError("need t >= 0")
    w, v = scipy.linalg.eig(H_ev)
    try:
        coeff = scipy.linalg.solve(v, psi)
        out = v @ (np.exp(-1j * w * t) * coeff)
        # spectral route sanity: residual of the identity at t -> 0
        if not np.all(np.isfinite(out)):
            raise scipy.linalg.LinAlgError
    except scipy.linalg.LinAlgError:
        out = scipy.linalg.expm(-1j * H_ev * t) @ psi
    if renormalize:
        nrm = np.linalg.norm(out)
        if nrm == 0.0:
            raise FloatingPointError("state annihilated by postselection")
        out = out / nrm
    return out


def reduced_density_matrix(psi: np.ndarray, ell: int) -> np.ndarray:
    """Trace out everything but the first ell sites (low bits)."""
    L = _num_sites(psi)
    if not 1 <= ell <= L:
        raise ValueError("need 1 <= ell <= L")
    mat = psi.reshape(1 << (L - ell), 1 << ell)
    rho = np.einsum("ba,bc->ac", mat, mat.conj())
    return 0.5 * (rho + rho.conj().T)


def charge_projectors(ell: int) -> list[np.ndarray]:
    """Diagonal projectors onto fixed subsystem charge q = 0..ell."""
    occ = occupation_diagonal(ell)
    return [np.diag((occ == q).astype(float)) for q in range(ell + 1)]


def decohere(rho: np.ndarray) -> np.ndarray:
    """sum_q Pi_q rho Pi_q: kill the charge-off-diagonal blocks."""
    ell = _num_sites(rho[0])
    occ = occupation_diagonal(ell)
    keep = occ[:, None] == occ[None, :]
    return np.where(keep, rho, 0.0)


def fourier_decohere(rho: np.ndarray, n_alpha: int = 64) -> np.ndarray:
    """Flux-average form of the same map: mean over uniform alpha of
    e^{-i a Q} rho e^{i a Q}."""
    ell = _num_sites(rho[0])
    occ = occupation_diagonal(ell)
    out = np.zeros_like(rho, dtype=complex)
    for a in -np.pi + 2.0 * np.pi * np.arange(n_alpha) / n_alpha:
        phase = np.exp(-1j * a * occ)
        out += (phase[:, None] * rho) * phase.conj()[None, :]
    return out / n_alpha


def dense_renyi_entropy(rho: np.ndarray, n: int = 2) -> float:
    lam = np.linalg.eigvalsh(rho)
    lam = np.clip(lam.real, 0.0, None)
    lam = lam / lam.sum()
    if n == 1:
        nz = lam[lam > 1e-300]
        return float(-np.sum(nz * np.log(nz)))
    return float(np.log(np.sum(lam**n)) / (1.0 - n))


def exact_asymmetry(rho: np.ndarray, n: int = 2) -> float:
    """S_n of the charge-decohered state minus S_n of the state itself."""
    if n < 1:
        raise ValueError("Renyi index must be a positive integer")
    return dense_renyi_entropy(decohere(rho), n) - dense_renyi_entropy(rho, n)


def exact_charged_moment(rho: np.ndarray, alphas) -> complex:
    """Tr[prod_j rho e^{i(a_j - a_{j+1}) Q_A}], the dense reference."""
    al = np.asarray(alphas, dtype=float)
    if al.size < 2:
        raise ValueError("need at least two flux angles")
    occ = occupation_diagonal(_num_sites(rho[0]))
    prod = np.eye(rho.shape[0], dtype=complex)
    for diff in al - np.roll(al, -1):
        prod = prod @ (rho * np.exp(1j * diff * occ)[None, :])
    return complex(np.trace(prod))


def two_point_functions(psi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """C[i,j] = <c_i^dag c_j> and F[i,j] = <c_i c_j> of a Fock vector."""
    L = _num_sites(psi)
    annihilated = [apply_annihilation(psi, j) for j in range(L)]
    C = np.empty((L, L), dtype=complex)
    F = np.empty((L, L), dtype=complex)
    for i in range(L):
        for j in range(L):
            C[i, j] = np.vdot(annihilated[i], annihilated[j])
            F[i, j] = np.vdot(psi, apply_annihilation(annihilated[j], i))
    return C, F


def correlation_matrix(psi: np.ndarray, ell: int, basis: str = "nambu-site") -> CorrelationMatrix:
    """Subsystem CorrelationMatrix in the same slot ordering as gaussian.

    Lets the finite-L Gaussian construction be compared entry by entry.
    """
    C, F = two_point_functions(psi)
    if basis == "nambu-site":
        sites = list(range(ell))
        slots = [(s, op) for s in sites for op in ("c", "cd")]
    elif basis == "nambu-cell":
        if ell % 2:
            raise ValueError("cell basis needs even ell")
        slots = []
        for m in range(ell // 2):
            slots += [(2 * m, "c"), (2 * m + 1, "c"), (2 * m, "cd"), (2 * m + 1, "cd")]
    else:
        raise ValueError("unknown basis %r" % basis)
    d = len(slots)
    ent = np.empty((d, d), dtype=complex)
    for a, (i, opa) in enumerate(slots):
        for b, (j, opb) in enumerate(slots):
            if opa == "c" and opb == "c":  # 2<c_i c_j^dag> - delta
                val = 2.0 * ((i == j) - C[j, i]) - (a == b)
            elif opa == "c" and opb == "cd":  # 2<c_i c_j>
                val = 2.0 * F[i, j]
            elif opa == "cd" and opb == "c":  # 2<c_i^dag c_j^dag>
                val = 2.0 * np.conj(F[j, i])
            else:  # 2<c_i^dag c_j> - delta
                val = 2.0 * C[i, j] - (a == b)
            ent[a, b] = val
    ent = 0.5 * (ent + ent.conj().T)
    return CorrelationMatrix(entries=ent, basis=basis, ell=ell)
