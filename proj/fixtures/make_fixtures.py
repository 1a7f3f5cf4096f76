#!/usr/bin/env python3
# Copyright 2026 The sqdrift Authors
# SPDX-License-Identifier: Apache-2.0
"""Generate the hydrogen-chain FCIDUMP fixtures and their reference energies.

Self-contained restricted Hartree-Fock for STO-3G hydrogen chains (s-type
Gaussians only, closed-form integrals), followed by an exact sector-restricted
diagonalization in the MO basis. Writes <name>.fcidump plus <name>.ref.json
with the SCF and FCI energies used as frozen reference values by the C++
test suite.

Run from the repository root:  python3 fixtures/make_fixtures.py
"""

import itertools
import json
import math
import os

import numpy as np
from scipy.special import erf

# STO-3G hydrogen s shell: (exponent, contraction coefficient)
STO3G_H = [
    (3.42525091, 0.15432897),
    (0.62391373, 0.53532814),
    (0.16885540, 0.44463454),
]


def boys0(x):
    if x < 1e-12:
        return 1.0 - x / 3.0
    return 0.5 * math.sqrt(math.pi / x) * erf(math.sqrt(x))


def prim_norm(alpha):
    return (2.0 * alpha / math.pi) ** 0.75


def s_overlap(a, ra, b, rb):
    p = a + b
    ab2 = np.dot(ra - rb, ra - rb)
    return (math.pi / p) ** 1.5 * math.exp(-a * b / p * ab2)


def s_kinetic(a, ra, b, rb):
    p = a + b
    ab2 = np.dot(ra - rb, ra - rb)
    return a * b / p * (3.0 - 2.0 * a * b / p * ab2) * s_overlap(a, ra, b, rb)


def s_nuclear(a, ra, b, rb, rc):
    p = a + b
    ab2 = np.dot(ra - rb, ra - rb)
    rp = (a * ra + b * rb) / p
    pc2 = np.dot(rp - rc, rp - rc)
    return -2.0 * math.pi / p * math.exp(-a * b / p * ab2) * boys0(p * pc2)


def s_eri(a, ra, b, rb, c, rc, d, rd):
    p = a + b
    q = c + d
    rp = (a * ra + b * rb) / p
    rq = (c * rc + d * rd) / q
    ab2 = np.dot(ra - rb, ra - rb)
    cd2 = np.dot(rc - rd, rc - rd)
    pq2 = np.dot(rp - rq, rp - rq)
    pref = 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))
    return pref * math.exp(-a * b / p * ab2 - c * d / q * cd2) * boys0(p * q / (p + q) * pq2)


def build_integrals(centers):
    """Contracted AO integrals for one s-type STO-3G function per center."""
    n = len(centers)
    prims = [[(alpha, coef * prim_norm(alpha)) for alpha, coef in STO3G_H] for _ in range(n)]
    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            for a, ca in prims[i]:
                for b, cb in prims[j]:
                    w = ca * cb
                    S[i, j] += w * s_overlap(a, centers[i], b, centers[j])
                    T[i, j] += w * s_kinetic(a, centers[i], b, centers[j])
                    for rc in centers:
                        V[i, j] += w * s_nuclear(a, centers[i], b, centers[j], rc)
    eri = np.zeros((n, n, n, n))
    for i, j, k, l in itertools.product(range(n), repeat=4):
        if i * n + j < k * n + l:
            continue  # fill (ij|kl) = (kl|ij) afterwards
        val = 0.0
        for a, ca in prims[i]:
            for b, cb in prims[j]:
                for c, cc in prims[k]:
                    for d, cd in prims[l]:
                        val += ca * cb * cc * cd * s_eri(
                            a, centers[i], b, centers[j], c, centers[k], d, centers[l])
        eri[i, j, k, l] = val
        eri[k, l, i, j] = val
    return S, T, V, eri


def nuclear_repulsion(centers):
    e = 0.0
    for i in range(len(centers)):
        for j in range(i):
            e += 1.0 / np.linalg.norm(centers[i] - centers[j])
    return e


def rhf(S, hcore, eri, n_elec, e_nn, max_iter=200, tol=1e-12):
    n = S.shape[0]
    nocc = n_elec // 2
    sval, svec = np.linalg.eigh(S)
    X = svec @ np.diag(sval ** -0.5) @ svec.T
    D = np.zeros((n, n))
    energy = 0.0
    fock_hist, err_hist = [], []
    for it in range(max_iter):
        J = np.einsum("pqrs,rs->pq", eri, D)
        K = np.einsum("prqs,rs->pq", eri, D)
        F = hcore + 2.0 * J - K
        # DIIS on the orthonormal-basis gradient
        err = X.T @ (F @ D @ S - S @ D @ F) @ X
        fock_hist.append(F)
        err_hist.append(err)
        if len(fock_hist) > 8:
            fock_hist.pop(0)
            err_hist.pop(0)
        if len(fock_hist) > 1:
            m = len(fock_hist)
            B = -np.ones((m + 1, m + 1))
            B[m, m] = 0.0
            for i in range(m):
                for j in range(m):
                    B[i, j] = np.sum(err_hist[i] * err_hist[j])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                w = np.linalg.solve(B, rhs)[:m]
                F = sum(wi * fi for wi, fi in zip(w, fock_hist))
            except np.linalg.LinAlgError:
                pass
        eps, C_ortho = np.linalg.eigh(X.T @ F @ X)
        C = X @ C_ortho
        Cocc = C[:, :nocc]
        D_new = Cocc @ Cocc.T
        e_new = np.sum(D_new * (hcore + F)) + e_nn if it else 0.0
        if np.max(np.abs(D_new - D)) < tol and it > 1:
            D = D_new
            energy = np.sum(D * (2.0 * hcore + 2.0 * np.einsum("pqrs,rs->pq", eri, D)
                                 - np.einsum("prqs,rs->pq", eri, D))) + e_nn
            return energy, C, eps
        D = D_new
        energy = e_new
    raise RuntimeError("SCF failed to converge")


def mo_transform(hcore, eri, C):
    h_mo = C.T @ hcore @ C
    eri_mo = np.einsum("ap,bq,cr,ds,abcd->pqrs", C, C, C, C, eri, optimize=True)
    return h_mo, eri_mo


def scf_energy_from_mo(h_mo, eri_mo, e_nn, nocc):
    e = e_nn
    for i in range(nocc):
        e += 2.0 * h_mo[i, i]
        for j in range(nocc):
            e += 2.0 * eri_mo[i, i, j, j] - eri_mo[i, j, j, i]
    return e


def fci_ground_energy(h_mo, eri_mo, core, n_alpha, n_beta):
    """Dense diagonalization in the (n_alpha, n_beta) occupation sector.

    Spin orbitals are blocked (alpha = 0..n-1, beta = n..2n-1); the ladder
    operator a_P carries the parity of the occupied orbitals below P.
    """
    n = h_mo.shape[0]
    states = []
    for occ_a in itertools.combinations(range(n), n_alpha):
        for occ_b in itertools.combinations(range(n), n_beta):
            bits = 0
            for p in occ_a:
                bits |= 1 << p
            for p in occ_b:
                bits |= 1 << (n + p)
            states.append(bits)
    states.sort()
    index = {s: i for i, s in enumerate(states)}
    dim = len(states)
    H = np.zeros((dim, dim))

    def annihilate(bits, p):
        if not (bits >> p) & 1:
            return None, 0
        sign = (-1) ** bin(bits & ((1 << p) - 1)).count("1")
        return bits & ~(1 << p), sign

    def create(bits, p):
        if (bits >> p) & 1:
            return None, 0
        sign = (-1) ** bin(bits & ((1 << p) - 1)).count("1")
        return bits | (1 << p), sign

    so = lambda p, s: p + s * n  # blocked spin-orbital index

    for col, ket in enumerate(states):
        H[col, col] += core
        # one-body
        for s in range(2):
            for p in range(n):
                for q in range(n):
                    if h_mo[p, q] == 0.0:
                        continue
                    b1, s1 = annihilate(ket, so(q, s))
                    if b1 is None:
                        continue
                    b2, s2 = create(b1, so(p, s))
                    if b2 is None:
                        continue
                    H[index[b2], col] += h_mo[p, q] * s1 * s2
        # two-body, chemists' (pq|rs) a+_ps a+_rt a_st a_qs
        for s in range(2):
            for t in range(2):
                for p, q, r, u in itertools.product(range(n), repeat=4):
                    v = eri_mo[p, q, r, u]
                    if v == 0.0:
                        continue
                    b1, s1 = annihilate(ket, so(q, s))
                    if b1 is None:
                        continue
                    b2, s2 = annihilate(b1, so(u, t))
                    if b2 is None:
                        continue
                    b3, s3 = create(b2, so(r, t))
                    if b3 is None:
                        continue
                    b4, s4 = create(b3, so(p, s))
                    if b4 is None:
                        continue
                    H[index[b4], col] += 0.5 * v * s1 * s2 * s3 * s4
    w = np.linalg.eigvalsh(H)
    return float(w[0]), dim


def write_fcidump(path, h_mo, eri_mo, core, n_elec, ms2=0, threshold=1e-14):
    n = h_mo.shape[0]
    lines = [f"&FCI NORB={n},NELEC={n_elec},MS2={ms2},"]
    lines.append(" ORBSYM=" + ",".join(["1"] * n) + ",")
    lines.append(" ISYM=1,")
    lines.append("&END")

    def fmt(v, i, j, k, l):
        return f"{v:23.16E} {i:3d} {j:3d} {k:3d} {l:3d}"

    for p in range(n):
        for q in range(p + 1):
            for r in range(p + 1):
                s_max = q if r == p else r
                for s in range(s_max + 1):
                    v = eri_mo[p, q, r, s]
                    if abs(v) > threshold:
                        lines.append(fmt(v, p + 1, q + 1, r + 1, s + 1))
    for p in range(n):
        for q in range(p + 1):
            if abs(h_mo[p, q]) > threshold:
                lines.append(fmt(h_mo[p, q], p + 1, q + 1, 0, 0))
    lines.append(fmt(core, 0, 0, 0, 0))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def make_chain(name, n_atoms, spacing_bohr):
    centers = [np.array([0.0, 0.0, i * spacing_bohr]) for i in range(n_atoms)]
    S, T, V, eri = build_integrals(centers)
    e_nn = nuclear_repulsion(centers)
    e_scf, C, eps = rhf(S, T + V, eri, n_atoms, e_nn)
    h_mo, eri_mo = mo_transform(T + V, eri, C)
    e_scf_mo = scf_energy_from_mo(h_mo, eri_mo, e_nn, n_atoms // 2)
    assert abs(e_scf - e_scf_mo) < 1e-10, (e_scf, e_scf_mo)
    e_fci, dim = fci_ground_energy(h_mo, eri_mo, e_nn, n_atoms // 2, n_atoms // 2)
    out = os.path.dirname(os.path.abspath(__file__))
    write_fcidump(os.path.join(out, f"{name}.fcidump"), h_mo, eri_mo, e_nn, n_atoms)
    ref = {
        "name": name,
        "n_orbitals": n_atoms,
        "n_electrons": n_atoms,
        "ms2": 0,
        "spacing_bohr": spacing_bohr,
        "scf_energy": e_scf,
        "fci_energy": e_fci,
        "fci_dimension": dim,
        "orbital_energies": [float(x) for x in eps],
    }
    with open(os.path.join(out, f"{name}.ref.json"), "w") as f:
        json.dump(ref, f, indent=2)
        f.write("\n")
    print(f"{name}: E_SCF = {e_scf:.10f}  E_FCI = {e_fci:.10f}  (dim {dim})")
    return ref


if __name__ == "__main__":
    h2 = make_chain("h2_sto3g", 2, 1.4)
    # Szabo & Ostlund print E_RHF(H2, STO-3G, R = 1.4 a0) = -1.1167 Ha.
    assert abs(h2["scf_energy"] - (-1.1167)) < 1e-4, h2["scf_energy"]
    make_chain("h4_sto3g", 4, 1.8)
    make_chain("h6_sto3g", 6, 1.8)
