"""Random inputs shared by several test modules."""

from vibrest.hamiltonian import SecondQuantizedHamiltonian, SqTerm


def random_hermitian_sq(rng, n_modes, modals, n_terms=6):
    acc = {}
    for _ in range(n_terms):
        k = int(rng.integers(1, n_modes + 1))
        modes = sorted(rng.choice(n_modes, size=k, replace=False).tolist())
        key = tuple((m, int(rng.integers(modals)), int(rng.integers(modals))) for m in modes)
        c = float(rng.normal())
        acc[key] = acc.get(key, 0.0) + c
        conj = tuple((m, h, r) for m, r, h in key)
        if conj != key:
            acc[conj] = acc.get(conj, 0.0) + c
    terms = tuple(SqTerm(c, k) for k, c in acc.items())
    return SecondQuantizedHamiltonian(n_modes, modals, terms)
