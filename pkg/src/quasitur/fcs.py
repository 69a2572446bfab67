"""Bridge between jump-counting statistics and the quasiprobability rates.

When every jump shifts the observable by a fixed weight, [X, L_k] = w_k L_k,
the counting statistics of the weighted jump current admit the short-time
generating rate

    g^c(l) = sum_k (exp(i l w_k) - 1) tr(L_k^dag L_k rho),

which differs from the quasiprobability rate only through an odd
sine series over the Hamiltonian coherences. Even-order moments therefore
coincide, so the second moment m_X is observable by monitoring jumps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CommutationViolatedError, DimMismatchError
from .lindblad import LindbladModel, QuantumState, apply_adjoint_liouvillian
from .numdiff import derivative_moment
from .quasiprob import ObservableDecomposition, _coerce_observable
from .util import anticommutator, commutator, dagger, float_repr


@dataclass(frozen=True)
class CurrentObservableSpec:
    """Per-jump weights defining a counting current, aligned with
    ``model.jump_operators`` (both pair members)."""

    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))


@dataclass(frozen=True)
class CommutationCheckResult:
    """Outcome of fitting weights w_k with [X, L_k] = w_k L_k."""

    ok: bool
    weights: tuple
    residuals: tuple
    tolerance: float
    failed_index: int | None

    def spec(self) -> CurrentObservableSpec:
        if not self.ok:
            raise CommutationViolatedError(
                f"jump {self.failed_index} violates the commutation condition "
                f"(residual {self.residuals[self.failed_index]:.3e})"
            )
        return CurrentObservableSpec(weights=self.weights)


def commutation_check(model: LindbladModel, observable, tol: float = 1e-9) -> CommutationCheckResult:
    """Fit w_k = tr(L_k^dag [X, L_k]) / tr(L_k^dag L_k) and verify the relation.

    Failure is a result, not an exception; the first violating jump index is
    recorded.
    """
    x = observable.observable if isinstance(observable, ObservableDecomposition) \
        else np.asarray(observable, dtype=complex)
    if x.shape[0] != model.dim:
        raise DimMismatchError("observable dimension differs from model")
    weights = []
    residuals = []
    failed = None
    for i, op in enumerate(model.jump_operators):
        norm_sq = float(np.trace(dagger(op) @ op).real)
        comm = commutator(x, op)
        if norm_sq < 1e-30:
            w = 0.0
        else:
            w = float((np.trace(dagger(op) @ comm) / norm_sq).real)
        residual = float(np.linalg.norm(comm - w * op))
        weights.append(w)
        residuals.append(residual)
        if failed is None and residual > tol * max(float(np.linalg.norm(op)), 1.0):
            failed = i
    return CommutationCheckResult(
        ok=failed is None,
        weights=tuple(weights),
        residuals=tuple(residuals),
        tolerance=float(tol),
        failed_index=failed,
    )


def fcs_generating_rate(model: LindbladModel, state: QuantumState,
                        spec: CurrentObservableSpec, lam: float) -> complex:
    """Short-time generating rate of the weighted jump-counting current."""
    if len(spec.weights) != len(model.jump_operators):
        raise DimMismatchError(
            f"{len(spec.weights)} weights for {len(model.jump_operators)} jump operators"
        )
    rho = state.rho
    total = 0.0 + 0.0j
    for w, op in zip(spec.weights, model.jump_operators):
        activity = float(np.trace(dagger(op) @ op @ rho).real)
        total += (np.exp(1j * lam * w) - 1.0) * activity
    return complex(total)


def tmh_generating_rate(model: LindbladModel, state: QuantumState, observable,
                        lam: float) -> complex:
    """d/d(dt) of the quasiprobability generating function at dt = 0,

    evaluated in closed form as tr({L^dag(e^{ilX}), e^{-ilX}} rho) / 2.
    """
    obs = _coerce_observable(observable)
    u = obs.phase_operator(float(lam))
    evolved = apply_adjoint_liouvillian(model, u)
    return complex(0.5 * np.trace(anticommutator(evolved, dagger(u)) @ state.rho))


def default_lambda_grid(observable, n_points: int = 41) -> np.ndarray:
    """Uniform grid over [-pi, pi] divided by the largest eigenvalue gap,
    keeping every sine argument within one period."""
    obs = _coerce_observable(observable)
    gap = obs.max_gap
    scale = gap if gap > 0 else 1.0
    return np.linspace(-np.pi, np.pi, n_points) / scale


@dataclass(frozen=True)
class GeneratingRateComparison:
    """Quasiprobability vs counting rates on a grid, with the sine-series
    prediction for their difference and the worst-case residual."""

    lambda_grid: np.ndarray
    tmh_rate: np.ndarray
    fcs_rate: np.ndarray
    predicted_difference: np.ndarray
    residual: float
    even_moment_differences: tuple

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("lambda,tmh_re,tmh_im,fcs_re,fcs_im,predicted_re,predicted_im,residual\n")
            per_point = np.abs((self.tmh_rate - self.fcs_rate) - self.predicted_difference)
            for i, lam in enumerate(self.lambda_grid):
                cells = [
                    float_repr(lam),
                    float_repr(self.tmh_rate[i].real), float_repr(self.tmh_rate[i].imag),
                    float_repr(self.fcs_rate[i].real), float_repr(self.fcs_rate[i].imag),
                    float_repr(self.predicted_difference[i].real),
                    float_repr(self.predicted_difference[i].imag),
                    float_repr(per_point[i]),
                ]
                fh.write(",".join(cells) + "\n")


def predicted_rate_difference(model: LindbladModel, state: QuantumState, observable,
                              lambda_grid) -> np.ndarray:
    """sum_{x,y} H_yx rho_xy sin(l (y - x)) over the observable eigenbasis.

    This sine series equals the quasiprobability rate minus the counting
    rate whenever the commutation condition holds; it vanishes identically
    when H or rho commutes with X.
    """
    obs = _coerce_observable(observable)
    vecs = obs.spectrum.eigenvectors
    vals = obs.spectrum.eigenvalues
    h_eig = dagger(vecs) @ model.hamiltonian @ vecs
    rho_eig = dagger(vecs) @ state.rho @ vecs
    weight = h_eig.T * rho_eig  # entry (x, y): H_yx rho_xy
    diffs = vals[None, :] - vals[:, None]  # entry (x, y): y - x
    grid = np.asarray(lambda_grid, dtype=float)
    return np.array([complex(np.sum(weight * np.sin(lam * diffs))) for lam in grid])


def compare_rates(model: LindbladModel, state: QuantumState, observable,
                  lambda_grid=None, commutation_tol: float = 1e-9) -> GeneratingRateComparison:
    """Evaluate both generating rates and the sine-series difference formula.

    Raises ``CommutationViolatedError`` when no jump weights exist. The
    residual is the worst absolute deviation of (tmh - fcs) from the
    prediction over the grid; even-moment agreement is probed by finite
    differences at orders 2 and 4.
    """
    obs = _coerce_observable(observable)
    spec = commutation_check(model, obs, commutation_tol).spec()
    if lambda_grid is None:
        lambda_grid = default_lambda_grid(obs)
    grid = np.asarray(lambda_grid, dtype=float)
    tmh = np.array([tmh_generating_rate(model, state, obs, lam) for lam in grid])
    fcs = np.array([fcs_generating_rate(model, state, spec, lam) for lam in grid])
    predicted = predicted_rate_difference(model, state, obs, grid)
    residual = float(np.max(np.abs((tmh - fcs) - predicted))) if grid.size else 0.0
    scale = max(obs.max_gap, 1e-6)
    even_diffs = []
    for order in (2, 4):
        m_tmh = derivative_moment(lambda l: tmh_generating_rate(model, state, obs, l), order, scale)
        m_fcs = derivative_moment(lambda l: fcs_generating_rate(model, state, spec, l), order, scale)
        even_diffs.append(float(abs(m_tmh - m_fcs)))
    return GeneratingRateComparison(
        lambda_grid=grid,
        tmh_rate=tmh,
        fcs_rate=fcs,
        predicted_difference=predicted,
        residual=residual,
        even_moment_differences=tuple(even_diffs),
    )
