"""Symmetric informationally complete reference measurements.

A SIC in dimension d is a set of d^2 unit vectors with pairwise overlap
|<psi_i|psi_j>|^2 = 1/(d+1); the rank-1 projectors divided by d form a
POVM. Writing p(i) for the reference probabilities of a state and
r(j|i) for the conditional probabilities of a target measurement after
a reference outcome, the Born rule becomes an affine update of p

    q(j) = sum_i [(d+1) p(i) - 1/d] r(j|i)

which this module contrasts with the classical total-probability rule
q(j) = sum_i r(j|i) p(i). ``discover_system`` runs the inverse problem:
given a table of outcome distributions, find one quantum model (states
plus measurements in a fixed dimension) that reproduces all of them.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from . import opalg
from .errors import (
    DimensionMismatchError,
    InconsistentPairError,
    NonQuantumProbabilityError,
    UnsupportedDimensionError,
)
from .measure import (
    DensityMatrix,
    OutcomeDistribution,
    Povm,
    StochasticMatrix,
    born_probabilities,
    validate_povm,
)

OVERLAP_ATOL = 1e-9
URGLEICHUNG_NEG_ATOL = 1e-9
STATE_PSD_ATOL = 1e-8
PROB_CLAMP = 1e-12


@dataclass(frozen=True)
class SicPovm:
    """Reference measurement: d^2 equiangular unit vectors, effects Pi_i / d."""

    dim: int
    fiducial_states: tuple[np.ndarray, ...]
    povm: Povm

    def __post_init__(self):
        d = self.dim
        vecs = tuple(opalg.freeze(np.asarray(v, dtype=complex).reshape(-1, 1)).reshape(-1)
                     for v in self.fiducial_states)
        if len(vecs) != d * d:
            raise ValueError(f"need {d * d} fiducial states, got {len(vecs)}")
        gram = np.abs(np.array([[np.vdot(a, b) for b in vecs] for a in vecs])) ** 2
        target = np.full((d * d, d * d), 1.0 / (d + 1))
        np.fill_diagonal(target, 1.0)
        worst = np.max(np.abs(gram - target))
        if worst > OVERLAP_ATOL:
            raise ValueError(f"fiducial overlaps deviate from equiangularity by {worst:.3e}")
        if self.povm.dim != d or self.povm.n_outcomes != d * d:
            raise DimensionMismatchError("effect list does not match the fiducial family")
        for v, e in zip(vecs, self.povm.effects):
            gap = np.max(np.abs(e.matrix - np.outer(v, v.conj()) / d))
            if gap > OVERLAP_ATOL:
                raise ValueError(f"effect {e.label!r} is not its fiducial projector / d")
        total = sum(e.matrix for e in self.povm.effects)
        if np.max(np.abs(total - np.eye(d))) > OVERLAP_ATOL:
            raise ValueError("reference effects do not sum to the identity")
        object.__setattr__(self, "fiducial_states", vecs)

    def projectors(self) -> np.ndarray:
        """Stacked (d^2, d, d) rank-1 projectors |psi_i><psi_i|."""
        return np.stack([np.outer(v, v.conj()) for v in self.fiducial_states])


def _tetrahedron_vectors() -> list[np.ndarray]:
    out = []
    for bloch in [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]:
        bx, by, bz = np.array(bloch) / np.sqrt(3)
        theta = np.arccos(bz)
        phi = np.arctan2(by, bx)
        out.append(np.array([np.cos(theta / 2),
                             np.sin(theta / 2) * np.exp(1j * phi)]))
    return out


# Unit fiducial vectors whose shift/clock orbits are equiangular, found
# by least-squares minimization of the overlap deviations and frozen at
# double precision; the SicPovm constructor re-verifies equiangularity.
_FIDUCIALS = {
    3: np.array([0, 1, -1], dtype=complex) / np.sqrt(2),
    4: np.array([
        complex(-0.48079909639623813, 0.06890996895949696),
        complex(0.7502848558532066, 0.0),
        complex(-0.028543443725732625, -0.19915350650405086),
        complex(-0.29802920318270115, -0.2680634754635478),
    ]),
    5: np.array([
        complex(-0.08291070940495404, 0.3821543188382934),
        complex(-0.4089766790344367, 0.23972278237130715),
        complex(-0.13488291140882025, 0.10574437644805106),
        complex(0.2748296503132098, 0.13237662539004588),
        complex(0.7070535862973082, 0.0),
    ]),
}


def _weyl_heisenberg_orbit(d: int) -> list[np.ndarray]:
    fiducial = _FIDUCIALS[d]
    omega = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    clock = np.diag([omega**k for k in range(d)])
    return [np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b) @ fiducial
            for a in range(d) for b in range(d)]


@functools.lru_cache(maxsize=None)
def build_sic(d: int) -> SicPovm:
    """Built-in reference measurement for d in {2, 3, 4, 5}.

    d=2 is the Bloch tetrahedron; the others are shift/clock orbits of
    stored fiducial vectors. Instances are immutable, so repeated calls
    share one cached object per dimension.
    """
    if d == 2:
        vecs = _tetrahedron_vectors()
    elif d in _FIDUCIALS:
        vecs = _weyl_heisenberg_orbit(d)
    else:
        raise UnsupportedDimensionError(f"no built-in fiducial for dimension {d}")
    povm = Povm.from_matrices(d, [np.outer(v, v.conj()) / d for v in vecs])
    return SicPovm(dim=d, fiducial_states=tuple(vecs), povm=povm)


@dataclass(frozen=True)
class SicProbVector:
    """Probabilities of the d^2 reference outcomes.

    Quantum states never assign more than 1/d to a reference outcome,
    so entries above that bound are rejected as non-quantum.
    """

    dim: int
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).reshape(-1)
        if p.size != self.dim**2:
            raise DimensionMismatchError(f"expected {self.dim ** 2} entries, got {p.size}")
        if p.min(initial=0.0) < -PROB_CLAMP:
            raise ValueError(f"negative reference probability {p.min():.3e}")
        if abs(p.sum() - 1.0) > 1e-10:
            raise ValueError(f"reference probabilities sum to {p.sum()!r}, not 1")
        if p.max() > 1.0 / self.dim + 1e-10:
            raise NonQuantumProbabilityError(
                f"non-quantum probability vector: entry {p.max()!r} exceeds 1/d"
            )
        p = np.clip(p, 0.0, None)
        p = p / p.sum()
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)


def state_to_sic_probs(rho: DensityMatrix, sic: SicPovm) -> SicProbVector:
    """p(i) = Tr(rho Pi_i) / d."""
    return SicProbVector(dim=sic.dim, probs=born_probabilities(rho, sic.povm).probs)


def sic_probs_to_state(p: SicProbVector, sic: SicPovm) -> DensityMatrix:
    """Invert the reference map: rho = sum_i [(d+1) p(i) - 1/d] Pi_i.

    The result always has unit trace; it is a state only when it is
    positive semidefinite, and vectors failing that by more than 1e-8
    are rejected as non-quantum.
    """
    if p.dim != sic.dim:
        raise DimensionMismatchError(f"probability dim {p.dim} != reference dim {sic.dim}")
    d = sic.dim
    coeff = (d + 1) * p.probs - 1.0 / d
    rho = np.einsum("i,ijk->jk", coeff, sic.projectors())
    rho = opalg.hermitize(rho)
    w, v = np.linalg.eigh(rho)
    if w[0] < -STATE_PSD_ATOL:
        raise NonQuantumProbabilityError(
            f"non-quantum probability vector: reconstructed operator has eigenvalue {w[0]:.3e}"
        )
    w = np.clip(w, 0.0, None)
    rho = opalg.hermitize((v * w) @ opalg.dagger(v))
    return DensityMatrix(dim=d, matrix=rho / np.trace(rho).real)


def povm_to_conditional(sic: SicPovm, target: Povm) -> StochasticMatrix:
    """Characterize a measurement by r(j|i) = Tr(Pi_i D_j).

    Row j, column i: the probability of target outcome j when the
    system is left in the i-th fiducial state by the reference
    measurement.
    """
    if target.dim != sic.dim:
        raise DimensionMismatchError(f"target dim {target.dim} != reference dim {sic.dim}")
    r = np.einsum("ijk,xkj->xi", sic.projectors(), target.matrices()).real
    return StochasticMatrix(n_in=sic.dim**2, n_out=target.n_outcomes, entries=r)


def urgleichung(p: SicProbVector, r: StochasticMatrix, labels=None) -> OutcomeDistribution:
    """Quantum update q(j) = sum_i [(d+1) p(i) - 1/d] r(j|i).

    The affine coefficients can be negative, so an arbitrary (p, r)
    pair may produce negative q; anything below -1e-9 is rejected as
    inconsistent rather than clamped.
    """
    d = p.dim
    if r.n_in != d * d:
        raise DimensionMismatchError(f"conditional table has {r.n_in} inputs, expected {d * d}")
    q = r.entries @ ((d + 1) * p.probs - 1.0 / d)
    if q.min() < -URGLEICHUNG_NEG_ATOL:
        raise InconsistentPairError(f"inconsistent (p, r) pair: q({q.argmin()}) = {q.min():.3e}")
    q = np.clip(q, 0.0, None)
    if labels is None:
        labels = [str(j) for j in range(q.size)]
    return OutcomeDistribution(labels=tuple(labels), probs=q / q.sum())


def classical_rule(p: SicProbVector, r: StochasticMatrix, labels=None) -> OutcomeDistribution:
    """Total-probability update q(j) = sum_i r(j|i) p(i)."""
    if r.n_in != p.probs.size:
        raise DimensionMismatchError(f"conditional table has {r.n_in} inputs, p has {p.probs.size}")
    q = r.entries @ p.probs
    if labels is None:
        labels = [str(j) for j in range(q.size)]
    return OutcomeDistribution(labels=tuple(labels), probs=q)


@dataclass(frozen=True)
class ProbabilityTable:
    """Outcome distributions q_{k,m} for every measurement k and preparation m."""

    n_preparations: int
    measurement_labels: tuple[str, ...]
    distributions: tuple[tuple[OutcomeDistribution, ...], ...]

    def __post_init__(self):
        labels = tuple(str(l) for l in self.measurement_labels)
        rows = tuple(tuple(row) for row in self.distributions)
        if len(rows) != len(labels):
            raise ValueError(f"{len(rows)} table rows for {len(labels)} measurements")
        for label, row in zip(labels, rows):
            if len(row) != self.n_preparations:
                raise ValueError(
                    f"measurement {label!r} has {len(row)} distributions, "
                    f"expected {self.n_preparations}"
                )
            counts = {len(q) for q in row}
            if len(counts) > 1:
                raise ValueError(f"measurement {label!r} rows disagree on outcome count")
        object.__setattr__(self, "measurement_labels", labels)
        object.__setattr__(self, "distributions", rows)

    @property
    def n_measurements(self) -> int:
        return len(self.measurement_labels)

    def outcome_counts(self) -> tuple[int, ...]:
        return tuple(len(row[0]) for row in self.distributions)

    def as_arrays(self) -> list[np.ndarray]:
        """Per measurement, the (n_preparations, n_outcomes) matrix of q values."""
        return [np.stack([q.probs for q in row]) for row in self.distributions]

    @classmethod
    def from_model(cls, states, povms, labels=None) -> "ProbabilityTable":
        states = list(states)
        povms = list(povms)
        if labels is None:
            labels = [str(k) for k in range(len(povms))]
        rows = tuple(
            tuple(born_probabilities(rho, z) for rho in states) for z in povms
        )
        return cls(n_preparations=len(states), measurement_labels=tuple(labels),
                   distributions=rows)


@dataclass(frozen=True)
class DiscoveryResult:
    feasible: bool
    states: tuple[DensityMatrix, ...]
    povms: tuple[Povm, ...]
    residual: float
    restarts_used: int

    @property
    def model(self):
        return self.states, self.povms


def _random_model(d, n_prep, counts, rng):
    states = []
    for _ in range(n_prep):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        m = g @ opalg.dagger(g)
        states.append(m / np.trace(m).real)
    povms = []
    for n in counts:
        blocks = []
        for _ in range(n):
            g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            blocks.append(g @ opalg.dagger(g))
        total = sum(blocks)
        w, v = np.linalg.eigh(total)
        inv_root = (v / np.sqrt(w)) @ opalg.dagger(v)
        povms.append([opalg.hermitize(inv_root @ b @ inv_root) for b in blocks])
    return states, povms


def _project_state(m):
    w, v = np.linalg.eigh(opalg.hermitize(m))
    w = np.clip(w, 0.0, None)
    if w.sum() <= 0:
        return np.eye(m.shape[0], dtype=complex) / m.shape[0]
    out = (v * w) @ opalg.dagger(v)
    return opalg.hermitize(out / np.trace(out).real)


def _project_effects(effects):
    d = effects[0].shape[0]
    effects = [opalg.psd_clip(e) for e in effects]
    excess = (sum(effects) - np.eye(d)) / len(effects)
    return [opalg.psd_clip(e - excess) for e in effects]


def _repair_model(d, states, effect_sets, labels):
    """Round a raw iterate to an exactly valid model, or return None."""
    try:
        fixed_states = tuple(DensityMatrix(dim=d, matrix=_project_state(m)) for m in states)
    except ValueError:
        return None
    povms = []
    for label, effects in zip(labels, effect_sets):
        effects = [opalg.psd_clip(e) for e in effects]
        total = opalg.hermitize(sum(effects))
        w, v = np.linalg.eigh(total)
        if w[0] < 1e-12:
            return None
        inv_root = (v / np.sqrt(w)) @ opalg.dagger(v)
        mats = [opalg.hermitize(inv_root @ e @ inv_root) for e in effects]
        povm = Povm.from_matrices(d, mats)
        if not validate_povm(povm).ok:
            return None
        povms.append(povm)
    return fixed_states, tuple(povms)


def _model_residual(table, states, povms):
    worst = 0.0
    for z, row in zip(povms, table.distributions):
        for rho, q in zip(states, row):
            got = born_probabilities(rho, z).probs
            worst = max(worst, float(np.max(np.abs(got - q.probs))))
    return worst


def _polish_model(d, states, effect_sets, q_arrays, counts):
    """Local least-squares refinement of a near-feasible iterate.

    The alternating stage slows to a crawl when the solution sits on the
    boundary of the PSD cone (pure states, projective effects), so finish
    with a factorized parametrization where every iterate is exactly a
    valid model: states as G G^dag / tr, effect sets as S^{-1/2}-normalized
    Gram blocks. On that parametrization the residuals are smooth and an
    off-the-shelf trust-region least-squares run converges locally fast.
    """
    n_prep = len(states)

    def factor(m):
        w, v = np.linalg.eigh(opalg.hermitize(m))
        return v * np.sqrt(np.clip(w, 0.0, None))

    def pack():
        parts = []
        for rho in states:
            a = factor(rho)
            parts += [a.real.ravel(), a.imag.ravel()]
        for effects in effect_sets:
            for e in effects:
                b = factor(e)
                parts += [b.real.ravel(), b.imag.ravel()]
        return np.concatenate(parts)

    def factors_from(xvec):
        half = xvec.reshape(-1, 2, d, d)
        return half[:, 0] + 1j * half[:, 1]

    def unpack(xvec):
        gs = factors_from(xvec)
        grams = np.einsum("nij,nkj->nik", gs, gs.conj())
        rhos = grams[:n_prep]
        traces = np.clip(np.trace(rhos, axis1=1, axis2=2).real, 1e-300, None)
        out_states = list(rhos / traces[:, None, None])
        out_effects = []
        at = n_prep
        for n in counts:
            block = grams[at:at + n]
            at += n
            total = opalg.hermitize(block.sum(axis=0))
            w, v = np.linalg.eigh(total)
            inv_root = (v / np.sqrt(np.clip(w, 1e-300, None))) @ opalg.dagger(v)
            out_effects.append(list(inv_root @ block @ inv_root))
        return out_states, out_effects

    def residuals(xvec):
        sts, effs = unpack(xvec)
        s = np.stack(sts).reshape(n_prep, -1).conj()
        parts = [
            ((s @ np.stack(effects).reshape(len(effects), -1).T).real - q_arrays[k]).ravel()
            for k, effects in enumerate(effs)
        ]
        return np.concatenate(parts)

    sol = scipy.optimize.least_squares(
        residuals, pack(), method="trf", ftol=1e-14, xtol=1e-14, gtol=1e-12,
        max_nfev=3000,
    )
    out_states, out_effects = unpack(sol.x)
    return ([opalg.hermitize(m) for m in out_states],
            [[opalg.hermitize(e) for e in effects] for effects in out_effects])


def discover_system(
    table: ProbabilityTable,
    d: int,
    *,
    max_iters: int = 500,
    tol: float = 1e-6,
    restarts: int = 20,
    seed: int = 0,
) -> DiscoveryResult:
    """Search for a dimension-d quantum model reproducing a probability table.

    Alternating projected-gradient descent on the squared residual: with
    measurements fixed the objective is quadratic in each state, and an
    exact line search along the gradient is available; likewise for the
    effects with states fixed. States are projected back to the PSD
    unit-trace set by eigenvalue clipping and trace renormalization;
    effects by PSD clipping followed by spreading the completeness
    excess evenly. A candidate is only reported feasible after being
    rounded to an exactly valid model that still reproduces every table
    entry within ``tol``, so feasible verdicts are sound by
    construction; infeasible verdicts only mean no restart converged.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    counts = table.outcome_counts()
    q_arrays = table.as_arrays()
    basis = opalg.hermitian_basis(d)
    n_basis = len(basis.elements)
    n_prep = table.n_preparations

    best = None  # (residual, restart_index, states, povms)
    for restart in range(max(1, restarts)):
        rng = np.random.default_rng([seed, restart])
        states, effect_sets = _random_model(d, n_prep, counts, rng)
        prev_obj = np.inf
        raw_worst = np.inf
        stall = 0
        for it in range(max_iters):
            # Fit states against fixed effects. Rows of A are effect
            # coordinates, so A @ x are the predicted probabilities.
            a_rows = np.vstack([
                np.stack([basis.coords(e) for e in effects]) for effects in effect_sets
            ])
            for m in range(n_prep):
                b = np.concatenate([q_arrays[k][m] for k in range(len(counts))])
                x = basis.coords(states[m])
                for _ in range(2):
                    resid = a_rows @ x - b
                    grad = a_rows.T @ resid
                    step_dir = a_rows @ grad
                    denom = float(step_dir @ step_dir)
                    if denom <= 0:
                        break
                    x = x - (float(resid @ step_dir) / denom) * grad
                    x = basis.coords(_project_state(basis.matrix(x)))
                states[m] = basis.matrix(x)

            # Fit each measurement against fixed states.
            s_coords = np.stack([basis.coords(rho) for rho in states])
            for k, effects in enumerate(effect_sets):
                y = np.stack([basis.coords(e) for e in effects])
                for _ in range(2):
                    resid = s_coords @ y.T - q_arrays[k]  # (m, j)
                    grad = resid.T @ s_coords  # (j, n_basis)
                    dq = s_coords @ grad.T
                    denom = float(np.sum(dq * dq))
                    if denom <= 0:
                        break
                    y = y - (float(np.sum(resid * dq)) / denom) * grad
                    projected = _project_effects([basis.matrix(row) for row in y])
                    y = np.stack([basis.coords(e) for e in projected])
                effect_sets[k] = [basis.matrix(row) for row in y]

            obj = 0.0
            raw_worst = 0.0
            s_coords = np.stack([basis.coords(rho) for rho in states])
            for k, effects in enumerate(effect_sets):
                y = np.stack([basis.coords(e) for e in effects])
                resid = s_coords @ y.T - q_arrays[k]
                obj += float(np.sum(resid * resid))
                raw_worst = max(raw_worst, float(np.max(np.abs(resid))))

            if raw_worst < tol and (it % 5 == 0 or prev_obj - obj < 1e-14):
                repaired = _repair_model(d, states, effect_sets, table.measurement_labels)
                if repaired is not None:
                    resid = _model_residual(table, *repaired)
                    if resid <= tol:
                        return DiscoveryResult(True, repaired[0], repaired[1],
                                               resid, restart + 1)
            if raw_worst < 1e-2 and it >= 25:
                break  # hand over to the terminal refinement below
            if prev_obj - obj < 1e-14 + 1e-9 * obj:
                stall += 1
                if stall >= 10:
                    break
            else:
                stall = 0
            prev_obj = obj

        if raw_worst < 1e-2:
            # Close enough that terminal refinement is worth the call.
            states, effect_sets = _polish_model(d, states, effect_sets, q_arrays, counts)
        repaired = _repair_model(d, states, effect_sets, table.measurement_labels)
        if repaired is not None:
            resid = _model_residual(table, *repaired)
            if resid <= tol:
                return DiscoveryResult(True, repaired[0], repaired[1], resid, restart + 1)
            if best is None or resid < best[0]:
                best = (resid, restart, repaired[0], repaired[1])

    if best is None:
        return DiscoveryResult(False, (), (), np.inf, max(1, restarts))
    return DiscoveryResult(False, best[2], best[3], best[0], max(1, restarts))
