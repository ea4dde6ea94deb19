"""Quadratic-program learning of a kernel majority vote.

Given voters h_1..h_H and a labeled sample, find weights rho minimizing the
mean squared vote (the voters' pairwise agreement) subject to a fixed mean
margin mu and box constraints 0 <= rho_j <= 1/H. The learned classifier is
sign of sum_j (2*rho_j - 1/H) h_j(x); the constraint construction makes its
mean margin on the training sample equal mu exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._kernels import qp_minimize
from .dataset import LabeledSample
from .voters import VoterSet, kernel_values, vote_matrix

_FEASIBILITY_SLACK = 1e-9


class InfeasibleMarginError(RuntimeError):
    """The margin equality cannot be met inside the box constraints."""


@dataclass(frozen=True)
class QpProblem:
    """The assembled program: minimize rho'*A*rho - means'*rho.

    ``agreements`` is the H x H matrix of mean pairwise voter products on the
    sample (symmetric PSD), ``voter_margins`` the per-voter mean of y*h_j(x),
    ``agreement_means`` its row means (the linear term), and ``margin_rhs``
    the right side of the margin equality voter_margins . rho = margin_rhs.
    """

    agreements: np.ndarray
    voter_margins: np.ndarray
    agreement_means: np.ndarray
    mu: float
    box_upper: float
    margin_rhs: float

    @property
    def n_voters(self) -> int:
        return self.voter_margins.shape[0]

    def objective(self, rho: np.ndarray) -> float:
        rho = np.asarray(rho, dtype=np.float64)
        return float(rho @ self.agreements @ rho - self.agreement_means @ rho)

    def margin_bounds(self) -> tuple[float, float]:
        """Range of voter_margins . rho over the box; brackets feasibility."""
        m = self.voter_margins
        lo = float(np.minimum(m, 0.0).sum() * self.box_upper)
        hi = float(np.maximum(m, 0.0).sum() * self.box_upper)
        return lo, hi


@dataclass(frozen=True)
class Posterior:
    """Solved voter weights plus solver diagnostics."""

    rho: np.ndarray
    iterations: int
    residual: float
    objective: float
    objective_history: np.ndarray


@dataclass(frozen=True)
class MajorityVote:
    """Weighted vote sign(sum_j c_j h_j(x)) with c_j = 2*rho_j - 1/H."""

    coefficients: np.ndarray
    voters: VoterSet

    def __post_init__(self):
        object.__setattr__(
            self,
            "coefficients",
            np.asarray(self.coefficients, dtype=np.float64),
        )


def assemble_qp(
    sample: LabeledSample, voters: VoterSet, mu: float
) -> QpProblem:
    """Build the program matrices from voter outputs on the sample."""
    if mu <= 0:
        raise ValueError("mu must be > 0")
    votes = vote_matrix(voters, sample.points).values
    return assemble_qp_from_votes(votes, sample.labels, mu)


def assemble_qp_from_votes(
    votes: np.ndarray, labels: np.ndarray, mu: float
) -> QpProblem:
    """Same as assemble_qp but from a precomputed vote matrix."""
    if mu <= 0:
        raise ValueError("mu must be > 0")
    votes = np.asarray(votes, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    n, n_voters = votes.shape
    agreements = votes.T @ votes / n
    agreements = 0.5 * (agreements + agreements.T)  # exact symmetry
    voter_margins = votes.T @ labels / n
    agreement_means = agreements.sum(axis=1) / n_voters
    margin_rhs = mu / 2.0 + voter_margins.sum() / (2.0 * n_voters)
    return QpProblem(
        agreements=agreements,
        voter_margins=voter_margins,
        agreement_means=agreement_means,
        mu=float(mu),
        box_upper=1.0 / n_voters,
        margin_rhs=float(margin_rhs),
    )


def lipschitz_bound(agreements: np.ndarray) -> float:
    """Gradient Lipschitz constant 2*lambda_max, via power iteration.

    The estimate is refined against the trace (always an upper bound for a
    PSD matrix); the solver's backtracking absorbs any residual
    underestimate.
    """
    M = np.asarray(agreements, dtype=np.float64)
    n = M.shape[0]
    v = np.full(n, 1.0 / np.sqrt(n))
    lam = 0.0
    for _ in range(60):
        w = M @ v
        norm = float(np.linalg.norm(w))
        if norm <= 0.0:
            break
        v = w / norm
        lam = float(v @ (M @ v))
    trace = float(np.trace(M))
    lam = min(max(lam, 1e-300), max(trace, 1e-300))
    return 2.0 * lam


def solve_qp(
    problem: QpProblem,
    tol: float = 1e-8,
    max_iter: int = 50000,
    x0: np.ndarray | None = None,
    lipschitz: float | None = None,
) -> Posterior:
    """Solve the program with monotone accelerated projected gradient.

    Every iterate satisfies the margin equality and the box (it is a
    projection output). Stops when the fixed-point displacement residual
    reaches ``tol`` or after ``max_iter`` iterations; the achieved residual
    is reported on the Posterior.

    Raises InfeasibleMarginError when margin_rhs is outside the reachable
    range, which usually means mu was set too large.
    """
    lo, hi = problem.margin_bounds()
    slack = _FEASIBILITY_SLACK * max(1.0, abs(problem.margin_rhs))
    if not (lo - slack <= problem.margin_rhs <= hi + slack):
        raise InfeasibleMarginError(
            f"margin target {problem.margin_rhs:.6g} outside reachable range "
            f"[{lo:.6g}, {hi:.6g}]; mu={problem.mu:.6g} is likely too large"
        )
    if lipschitz is None:
        lipschitz = lipschitz_bound(problem.agreements)
    rho, iterations, residual, history = qp_minimize(
        np.ascontiguousarray(problem.agreements),
        problem.agreement_means,
        problem.voter_margins,
        problem.box_upper,
        problem.margin_rhs,
        step=1.0 / lipschitz,
        tol=tol,
        max_iter=max_iter,
        x0=x0,
    )
    return Posterior(
        rho=rho,
        iterations=int(iterations),
        residual=float(residual),
        objective=problem.objective(rho),
        objective_history=history,
    )


def majority_vote(posterior: Posterior, voters: VoterSet) -> MajorityVote:
    """Vote coefficients c_j = 2*rho_j - 1/H from the solved weights."""
    box = 1.0 / len(voters)
    return MajorityVote(2.0 * posterior.rho - box, voters)


def train_majority_vote(
    sample: LabeledSample,
    voters: VoterSet,
    mu: float,
    tol: float = 1e-8,
    max_iter: int = 50000,
) -> MajorityVote:
    """assemble_qp + solve_qp + majority_vote in one call."""
    problem = assemble_qp(sample, voters, mu)
    posterior = solve_qp(problem, tol=tol, max_iter=max_iter)
    return majority_vote(posterior, voters)


def score(vote: MajorityVote, x) -> float | np.ndarray:
    """Weighted vote value sum_j c_j h_j(x); scalar for a single point."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    values = kernel_values(x, vote.voters.centers, vote.voters.gamma)
    out = values @ vote.coefficients
    return float(out[0]) if single else out


def predict(vote: MajorityVote, x) -> float | np.ndarray:
    """sign of the vote value, with sign(0) = +1."""
    s = score(vote, x)
    if np.isscalar(s):
        return 1.0 if s >= 0 else -1.0
    return np.where(s >= 0, 1.0, -1.0)


def dump_problem_json(
    problem: QpProblem, posterior: Posterior | None, path
) -> None:
    """Write the program matrices (and weights, if solved) for debugging."""
    payload = {
        "agreements": problem.agreements.tolist(),
        "voter_margins": problem.voter_margins.tolist(),
        "agreement_means": problem.agreement_means.tolist(),
        "mu": problem.mu,
        "box_upper": problem.box_upper,
        "margin_rhs": problem.margin_rhs,
    }
    if posterior is not None:
        payload["rho"] = posterior.rho.tolist()
        payload["objective"] = posterior.objective
        payload["residual"] = posterior.residual
        payload["iterations"] = posterior.iterations
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
