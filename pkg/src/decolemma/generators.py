"""Reproducible built-in models, selected by name from the CLI."""
import numpy as np

from .model import DiscreteModel


def _ladder(levels, spacing):
    return spacing * np.arange(levels, dtype=float)


def gaussian_offdiag(levels=201, seed=0, hbar=1.0, spacing=1.0, coherence=2.0, reach=3.0):
    """Smooth state and observable with Gaussian off-diagonal envelopes.

    rho_ij = sqrt(p_i p_j) exp(-(i-j)^2 / (2 (coherence*L)^2)) with seeded
    populations p_i within +-10% of uniform; the Gaussian kernel keeps rho
    positive semidefinite.  O_ij = exp(-(i-j)^2 / (2 (reach*L)^2)) off the
    diagonal, seeded normal values on it.  L is the number of levels.
    """
    rng = np.random.default_rng(seed)
    p = 1.0 + 0.1 * rng.uniform(-1.0, 1.0, levels)
    p /= p.sum()
    d = np.subtract.outer(np.arange(levels), np.arange(levels)).astype(float)
    rho = np.sqrt(np.outer(p, p)) * np.exp(-(d ** 2) / (2 * (coherence * levels) ** 2))
    obs = np.exp(-(d ** 2) / (2 * (reach * levels) ** 2))
    np.fill_diagonal(obs, rng.normal(size=levels))
    return DiscreteModel(_ladder(levels, spacing), rho, obs, hbar)


def two_level(gap=1.0, hbar=1.0):
    """|+><+| measured with sigma_x: <O>(t) = cos(gap t / hbar)."""
    rho = np.full((2, 2), 0.5)
    obs = np.array([[0.0, 1.0], [1.0, 0.0]])
    return DiscreteModel(np.array([0.0, gap]), rho, obs, hbar)


def diagonal(levels=8, seed=0, hbar=1.0, spacing=1.0):
    """Seeded populations with no coherences and a random Hermitian O."""
    rng = np.random.default_rng(seed)
    p = rng.uniform(0.1, 1.0, levels)
    rho = np.diag(p / p.sum())
    a = rng.normal(size=(levels, levels)) + 1j * rng.normal(size=(levels, levels))
    return DiscreteModel(_ladder(levels, spacing), rho, (a + a.conj().T) / 2, hbar)


def random_hermitian(levels=16, seed=0, hbar=1.0, spacing=1.0):
    """Wishart-distributed density matrix with a GUE-style observable."""
    rng = np.random.default_rng(seed)
    shape = (levels, levels)
    g = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    rho /= np.trace(rho).real
    a = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return DiscreteModel(_ladder(levels, spacing), rho, (a + a.conj().T) / 2, hbar)


GENERATORS = {
    "gaussian-offdiag": gaussian_offdiag,
    "two-level": two_level,
    "diagonal": diagonal,
    "random-hermitian": random_hermitian,
}


def generate(name, levels=None, seed=0, hbar=1.0):
    """Build the named model; ``levels`` is ignored for ``two-level``."""
    try:
        factory = GENERATORS[name]
    except KeyError:
        raise ValueError(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}") from None
    if name == "two-level":
        return factory(hbar=hbar)
    kwargs = {"seed": seed, "hbar": hbar}
    if levels is not None:
        kwargs["levels"] = levels
    return factory(**kwargs)
