"""Two-time quasiprobability statistics of an observable.

The central objects are the real two-time quasiprobability table

    q(y, t+dt; x, t) = tr({exp(L^dag dt) P_y, P_x} rho) / 2,

its short-time flux matrix T_yx(rho) = tr({L^dag P_y, P_x} rho) / 2, the
moment generating function, and the short-time moments built from them.
Entries reproduce the correct single-time marginals but may be negative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatchError, ImaginaryResidueError
from .lindblad import (
    LindbladModel,
    QuantumState,
    apply_adjoint_dissipator,
    apply_adjoint_liouvillian,
    heisenberg_propagator,
)
from .numdiff import central_derivative, moment_step
from .operators import SpectralDecomposition, spectral_decompose
from .util import anticommutator, as_operator, dagger, float_repr

IMAG_RESIDUE_TOL = 1e-10

FLUX_SUM = "flux_sum"
OPERATOR_EXPRESSION = "operator_expression"
GENERATING_FUNCTION_FD = "generating_function_fd"


@dataclass(frozen=True)
class ObservableDecomposition:
    """Observable together with its eigenvalue classes and projectors."""

    observable: np.ndarray
    spectrum: SpectralDecomposition

    @classmethod
    def from_operator(cls, x, degeneracy_tol: float | None = None) -> "ObservableDecomposition":
        mat = as_operator(x)
        return cls(observable=mat, spectrum=spectral_decompose(mat, degeneracy_tol))

    @classmethod
    def from_eigenbasis(cls, values, vectors) -> "ObservableDecomposition":
        """Build with one class per supplied eigenvector, in the given order.

        Repeated values are kept as distinct classes, which lets tables be
        indexed by state rather than by eigenvalue (used by the classical
        embedding, where several states may carry the same observable value).
        """
        vals = np.asarray(values, dtype=float).reshape(-1)
        vecs = np.asarray(vectors, dtype=complex)
        if vecs.shape != (len(vals), len(vals)):
            raise DimMismatchError("eigenbasis must be square with one value per column")
        if np.linalg.norm(dagger(vecs) @ vecs - np.eye(len(vals))) > 1e-9:
            raise ValueError("eigenbasis columns are not orthonormal")
        spectrum = SpectralDecomposition(
            eigenvalues=vals,
            eigenvectors=vecs,
            class_values=vals.copy(),
            class_members=tuple(np.array([i]) for i in range(len(vals))),
        )
        observable = (vecs * vals) @ dagger(vecs)
        return cls(observable=observable, spectrum=spectrum)

    @property
    def dim(self) -> int:
        return self.spectrum.dim

    @property
    def labels(self) -> np.ndarray:
        return self.spectrum.class_values

    @property
    def projectors(self) -> np.ndarray:
        return self.spectrum.projectors

    def phase_operator(self, lam: float) -> np.ndarray:
        """exp(i lam X) from the stored eigenbasis."""
        vecs = self.spectrum.eigenvectors
        return (vecs * np.exp(1j * lam * self.spectrum.eigenvalues)) @ dagger(vecs)

    @property
    def max_gap(self) -> float:
        """Largest eigenvalue separation, the frequency scale of exp(i lam X).

        Values may be stored in caller order, so take the full spread.
        """
        vals = self.spectrum.eigenvalues
        return float(vals.max() - vals.min()) if len(vals) > 1 else 0.0


def _coerce_observable(x) -> ObservableDecomposition:
    if isinstance(x, ObservableDecomposition):
        return x
    return ObservableDecomposition.from_operator(x)


def _real_table(raw: np.ndarray, what: str) -> np.ndarray:
    residue = float(np.max(np.abs(raw.imag))) if raw.size else 0.0
    if residue > IMAG_RESIDUE_TOL:
        raise ImaginaryResidueError(
            f"{what} has imaginary residue {residue:.3e}; Hermiticity is broken upstream"
        )
    return np.ascontiguousarray(raw.real)


@dataclass(frozen=True)
class QuasiprobTable:
    """q(y, t+dt; x, t) indexed as values[final, initial]."""

    labels_initial: np.ndarray
    labels_final: np.ndarray
    values: np.ndarray
    delta_t: float

    def marginal_initial(self) -> np.ndarray:
        """sum_y q(y; x), the time-t distribution p(x, t)."""
        return self.values.sum(axis=0)

    def marginal_final(self) -> np.ndarray:
        """sum_x q(y; x), the time-(t+dt) distribution p(y, t+dt)."""
        return self.values.sum(axis=1)

    def moment(self, n: int) -> float:
        """n-th moment of the change, weight (y - x)^n."""
        diff = self.labels_final[:, None] - self.labels_initial[None, :]
        return float(np.sum(diff**n * self.values))

    def to_csv(self, path) -> None:
        """Header row of final labels, first column of initial labels."""
        with open(path, "w") as fh:
            fh.write(f"# delta_t={float_repr(self.delta_t)}\n")
            fh.write("initial," + ",".join(float_repr(y) for y in self.labels_final) + "\n")
            for ix, x in enumerate(self.labels_initial):
                row = ",".join(float_repr(v) for v in self.values[:, ix])
                fh.write(f"{float_repr(x)},{row}\n")


@dataclass(frozen=True)
class FluxMatrix:
    """Short-time fluxes T_yx indexed as values[final, initial] (1/time)."""

    labels: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        scale = max(float(np.max(np.abs(self.values))), 1.0)
        colsums = np.abs(self.values.sum(axis=0))
        if colsums.size and float(colsums.max()) > 1e-10 * scale:
            raise ValueError(
                f"flux columns do not sum to zero (max {float(colsums.max()):.3e}); "
                "the generator is not trace preserving"
            )


@dataclass(frozen=True)
class MomentReport:
    order: int
    value: float
    method: str = FLUX_SUM


def tmh_table(model: LindbladModel, state: QuantumState, observable, delta_t: float) -> QuasiprobTable:
    """Two-time quasiprobability table at lag ``delta_t``.

    Marginals reproduce the single-time distributions; entries are checked
    to be real within ``IMAG_RESIDUE_TOL`` and may be negative.
    """
    obs = _coerce_observable(observable)
    if obs.dim != model.dim:
        raise DimMismatchError("observable dimension differs from model")
    rho = state.rho
    projectors = obs.projectors
    apply_prop = heisenberg_propagator(model, float(delta_t))
    evolved = [apply_prop(p) for p in projectors]
    raw = np.empty((len(projectors), len(projectors)), dtype=complex)
    sym = [p @ rho + rho @ p for p in projectors]
    for iy, a in enumerate(evolved):
        for ix in range(len(projectors)):
            raw[iy, ix] = 0.5 * np.trace(a @ sym[ix])
    values = _real_table(raw, "quasiprobability table")
    return QuasiprobTable(
        labels_initial=obs.labels.copy(),
        labels_final=obs.labels.copy(),
        values=values,
        delta_t=float(delta_t),
    )


def flux_matrix(model: LindbladModel, state: QuantumState, observable) -> FluxMatrix:
    """T_yx(rho) = tr({L^dag P_y, P_x} rho) / 2 over eigenvalue classes."""
    obs = _coerce_observable(observable)
    if obs.dim != model.dim:
        raise DimMismatchError("observable dimension differs from model")
    rho = state.rho
    projectors = obs.projectors
    raw = np.empty((len(projectors), len(projectors)), dtype=complex)
    sym = [p @ rho + rho @ p for p in projectors]
    for iy, p in enumerate(projectors):
        a = apply_adjoint_liouvillian(model, p)
        for ix in range(len(projectors)):
            raw[iy, ix] = 0.5 * np.trace(a @ sym[ix])
    values = _real_table(raw, "flux matrix")
    return FluxMatrix(labels=obs.labels.copy(), values=values)


def generating_function(model: LindbladModel, state: QuantumState, observable,
                        lam: float, delta_t: float) -> complex:
    """Moment generating function tr({exp(L^dag dt) e^{ilX}, e^{-ilX}} rho)/2."""
    obs = _coerce_observable(observable)
    u = obs.phase_operator(float(lam))
    evolved = heisenberg_propagator(model, float(delta_t))(u)
    return complex(0.5 * np.trace(anticommutator(evolved, dagger(u)) @ state.rho))


def short_time_moment(flux: FluxMatrix, n: int) -> MomentReport:
    """n-th short-time moment, weight (y - x)^n against the fluxes.

    The weight uses the later label minus the earlier one, matching the
    generating-function derivative convention; even orders are unaffected
    by this choice.
    """
    if n < 1:
        raise ValueError("moment order must be >= 1")
    diff = flux.labels[:, None] - flux.labels[None, :]
    return MomentReport(order=n, value=float(np.sum(diff**n * flux.values)), method=FLUX_SUM)


def short_time_fluctuation(flux: FluxMatrix) -> float:
    """Second short-time moment m_X from the flux sum."""
    return short_time_moment(flux, 2).value


def short_time_fluctuation_operator_form(model: LindbladModel, state: QuantumState,
                                         observable, generator: str = "dissipator") -> MomentReport:
    """m_X = tr(G(X^2) rho) - tr({G(X), X} rho) with G the adjoint generator.

    The Hamiltonian part cancels via {[H, X], X} = [H, X^2], so the adjoint
    dissipator (default) and adjoint Liouvillian give the same value.
    """
    x = observable.observable if isinstance(observable, ObservableDecomposition) else as_operator(observable)
    if x.shape[0] != model.dim:
        raise DimMismatchError("observable dimension differs from model")
    if generator == "dissipator":
        gen = apply_adjoint_dissipator
    elif generator == "liouvillian":
        gen = apply_adjoint_liouvillian
    else:
        raise ValueError("generator must be 'dissipator' or 'liouvillian'")
    rho = state.rho
    value = np.trace(gen(model, x @ x) @ rho) - np.trace(anticommutator(gen(model, x), x) @ rho)
    if abs(value.imag) > IMAG_RESIDUE_TOL * max(abs(value), 1.0):
        raise ImaginaryResidueError(f"fluctuation has imaginary residue {value.imag:.3e}")
    return MomentReport(order=2, value=float(value.real), method=OPERATOR_EXPRESSION)


def moment_from_generating_function(model: LindbladModel, state: QuantumState, observable,
                                    n: int, delta_t: float, step: float | None = None) -> MomentReport:
    """Moment of order n from finite differences of the generating function.

    The stencil shares one propagator for the given lag, so the cost is a
    handful of phase-operator evaluations.
    """
    obs = _coerce_observable(observable)
    if step is None:
        step = moment_step(obs.max_gap, n)
    apply_prop = heisenberg_propagator(model, float(delta_t))
    rho = state.rho

    def g(lam: float) -> complex:
        u = obs.phase_operator(lam)
        return complex(0.5 * np.trace(anticommutator(apply_prop(u), dagger(u)) @ rho))

    value = (-1j) ** n * central_derivative(g, n, step)
    return MomentReport(order=n, value=float(value.real), method=GENERATING_FUNCTION_FD)


def escape_rate(flux: FluxMatrix) -> float:
    """Average escape rate, minus the sum of diagonal fluxes."""
    return float(-np.trace(flux.values))
