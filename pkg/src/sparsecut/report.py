"""End-to-end pipeline: solve, round, audit, and assemble a run report."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

import numpy as np

from .graphs import CutResult, WeightedGraphPair
from .oracle import ENUMERATION_MAX_N, exact_sparsest_cut
from .rounding import (audit_distortion, audit_projection_bounds,
                       best_direction_lower_bound, threshold_round)
from .sdp import SolverOptions, VectorConfiguration, audit_triangle, formulate, solve
from .spectral import RankProfileRow, SpectralReport, best_bound, rank_profile

DEFAULT_ORACLE_MAX = 16
COURANT_FISHER_TOL = 1e-7


def _cut_vertices_1based(result: CutResult) -> list[int]:
    return [v + 1 for v in result.cut.vertices()]


@dataclass(frozen=True)
class RunReport:
    instance: dict
    phi_sdp: float
    phi_alg: float
    alg_cut: list[int]
    phi_star: float | None
    star_cut: list[int] | None
    lambda_1: float
    courant_fisher_holds: bool | None
    generalized: list[float]
    gram_spectrum: list[float]
    bound_table: list[RankProfileRow]
    min_bound: float | None
    audits: dict
    solver: dict
    timing: dict
    configuration: VectorConfiguration

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {
            "instance": self.instance,
            "phi_sdp": self.phi_sdp,
            "phi_alg": {"value": self.phi_alg, "cut": self.alg_cut},
            "phi_star": (None if self.phi_star is None
                         else {"value": self.phi_star, "cut": self.star_cut}),
            "lambda": self.generalized,
            "sigma": self.gram_spectrum,
            "courant_fisher": (None if self.courant_fisher_holds is None else {
                "lambda_1": self.lambda_1,
                "holds": self.courant_fisher_holds,
            }),
            "bound_table": [
                {
                    "r": row.r,
                    "lambda_next": row.lambda_next,
                    "tail_fraction": row.tail_fraction,
                    "applicable": row.applicable,
                    "factor": row.factor,
                    "bound": row.bound,
                    "best": row.best,
                }
                for row in self.bound_table
            ],
            "min_bound": self.min_bound,
            "audits": self.audits,
            "solver": self.solver,
        }
        if include_timing:
            out["timing"] = self.timing
        return out

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True)


def _stage(name: str, fn, *args, **kwargs):
    """Run one pipeline stage, tagging any package error with the stage name."""
    from .errors import SparseCutError

    try:
        return fn(*args, **kwargs)
    except SparseCutError as exc:
        exc.stage = name
        raise


def run_pipeline(g: WeightedGraphPair, opts: SolverOptions | None = None,
                 oracle_max: int = DEFAULT_ORACLE_MAX) -> RunReport:
    """formulate -> solve -> audit -> round -> spectra -> bounds -> oracle."""
    t_total = time.perf_counter()
    problem = _stage("formulate", formulate, g)
    config = _stage("solve", solve, problem, opts)

    triangle = _stage("audit", audit_triangle, config.vectors)
    alg = _stage("round", threshold_round, config.vectors, g)
    spectra = _stage("spectral", SpectralReport.from_solution, g, config.vectors)
    table = _stage("spectral", rank_profile, spectra, config.objective_value)
    projection = _stage("audit", audit_projection_bounds, config.vectors)
    distortion = _stage("audit", audit_distortion, config.vectors, g.demand)
    direction = _stage("audit", best_direction_lower_bound, config.vectors)

    phi_star = None
    star_cut = None
    cf_holds = None
    lam1 = float(spectra.generalized[0])
    if g.n <= min(oracle_max, ENUMERATION_MAX_N):
        star = _stage("oracle", exact_sparsest_cut, g)
        phi_star = star.sparsity
        star_cut = _cut_vertices_1based(star)
        cf_holds = bool(lam1 <= phi_star + COURANT_FISHER_TOL)

    stats = config.stats
    return RunReport(
        instance={
            "n": g.n,
            "cost_edges": len(g.cost),
            "demand_edges": len(g.demand),
            "total_demand": g.total_demand,
        },
        phi_sdp=config.objective_value,
        phi_alg=alg.sparsity,
        alg_cut=_cut_vertices_1based(alg),
        phi_star=phi_star,
        star_cut=star_cut,
        lambda_1=lam1,
        courant_fisher_holds=cf_holds,
        generalized=[float(v) for v in spectra.generalized],
        gram_spectrum=[float(v) for v in spectra.gram],
        bound_table=table,
        min_bound=best_bound(table),
        audits={
            "triangle_violation": triangle.max_violation,
            "worst_triple": list(triangle.worst_triple) if triangle.worst_triple else None,
            "projection_slack": projection.tightest_slack,
            "distortion_slack": distortion.tightest_slack,
            "direction_margin": direction.margin,
            "normalization_residual": config.normalization_residual,
            "psd_residual": config.psd_residual,
        },
        solver={
            "iterations": stats.iterations,
            "rounds": stats.rounds,
            "active_constraints": stats.active_constraints,
            "dual_objective": stats.dual_objective,
        },
        timing={
            "solve_seconds": stats.wall_time_seconds,
            "total_seconds": time.perf_counter() - t_total,
        },
        configuration=config,
    )


def gram_to_text(G: np.ndarray) -> str:
    """Dense row-major space-separated text form of a matrix."""
    return "\n".join(" ".join(repr(float(v)) for v in row) for row in np.asarray(G)) + "\n"


def gram_from_text(text: str) -> np.ndarray:
    from .errors import ParseError

    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            rows.append([float(v) for v in line.split()])
        except ValueError:
            raise ParseError(f"line {lineno}: malformed matrix row")
    if not rows:
        raise ParseError("empty matrix file")
    width = len(rows[0])
    if any(len(r) != width for r in rows) or width != len(rows):
        raise ParseError("matrix must be square")
    return np.array(rows)
