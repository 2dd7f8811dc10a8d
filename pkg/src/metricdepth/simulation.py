"""Monte Carlo harness: tangent-Gaussian populations, contamination
scenarios, estimator comparisons, and a breakdown experiment.

Populations push a zero-mean Gaussian tangent vector at a center through
the exponential map. Contaminated scenarios mix a 10% (configurable)
outlier population that differs in location (case 2), scale (case 3), or
both (case 4); case 1 is clean. Replicates draw from per-replicate seed
streams and are merged by replicate index, so results are byte-identical
for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import DataError, GeometryError, MetricDepthError
from .estimators import frechet_mean, frechet_median, mhd_median
from .rng import NS_BOOTSTRAP, NS_REPLICATE, NS_SAMPLING, derive_rng, derive_seed
from .spaces import SPD, Euclidean, Space, Sphere, Spider3

ESTIMATORS = ("mhd", "fm", "gdd")
CASES = (1, 2, 3, 4)


@dataclass(frozen=True)
class PopulationSpec:
    """Exponential-map pushforward of a tangent Gaussian at ``center``.

    ``scatter`` is an isotropic variance or a full chart covariance.
    """

    space: Space
    center: object
    scatter: object
    label: str = ""


def sample_population(spec: PopulationSpec, n: int, seed: int = 0) -> list:
    """n i.i.d. draws exp_center(V), V Gaussian in the chart at the center."""
    rng = derive_rng(seed, NS_SAMPLING)
    return [
        spec.space.exp(spec.center, spec.space.random_tangent(spec.center, spec.scatter, rng))
        for _ in range(n)
    ]


def canonical_center(space: Space):
    """Default population center: origin-like point of each geometry."""
    if isinstance(space, Euclidean):
        return space.validate_point(np.zeros(space.dim))
    if isinstance(space, Sphere):
        e1 = np.zeros(space.ambient_dim)
        e1[0] = 1.0
        return space.validate_point(e1)
    if isinstance(space, SPD):
        return space.validate_point(np.eye(space.size))
    if isinstance(space, Spider3):
        return space.validate_point((1.0, 1))
    # Products and anything else: build from components when possible.
    if hasattr(space, "components"):
        return tuple(canonical_center(c) for c in space.components)
    raise GeometryError(f"no canonical center for {space!r}")


def default_offset(space: Space) -> float:
    """Location-outlier offset: pi/2 on spheres (quarter turn), else 1."""
    return float(np.pi / 2) if isinstance(space, Sphere) else 1.0


def space_parameter(space: Space) -> int:
    if isinstance(space, (Euclidean, Sphere)):
        return space.dim
    if isinstance(space, SPD):
        return space.size
    return space.intrinsic_dim


@dataclass(frozen=True)
class SimulationConfig:
    case: int
    space: Space
    n: int
    reps: int
    estimators: tuple = ESTIMATORS
    contamination: float = 0.1
    offset: float | None = None  # None resolves per space
    scale_factor: float = 4.0
    base_variance: float = 0.5
    jiggle_k: int = 10
    radius_frac: float = 0.1
    refine_budget: int = 64
    seed: int = 0
    n_jobs: int = 1

    def __post_init__(self):
        if self.case not in CASES:
            raise DataError(f"case must be one of {CASES}, got {self.case}")
        if self.reps < 1:
            raise DataError("reps must be >= 1")
        if not 0.0 <= self.contamination < 1.0:
            raise DataError("contamination fraction must lie in [0, 1)")
        if not self.estimators:
            raise DataError("estimator list must be non-empty")
        unknown = set(self.estimators) - set(ESTIMATORS)
        if unknown:
            raise DataError(f"unknown estimators: {sorted(unknown)}")

    def resolved_offset(self) -> float:
        return self.offset if self.offset is not None else default_offset(self.space)


def _populations(config: SimulationConfig):
    space = config.space
    center = canonical_center(space)
    inlier = PopulationSpec(space, center, config.base_variance, "inlier")
    if config.case == 1:
        return inlier, None
    if config.case in (2, 4):
        direction = np.zeros(space.intrinsic_dim)
        direction[0] = config.resolved_offset()
        outlier_center = space.exp(center, space.tangent_from_coords(center, direction))
    else:
        outlier_center = center
    scatter = config.base_variance
    if config.case in (3, 4):
        scatter = config.base_variance * config.scale_factor**2
    return inlier, PopulationSpec(space, outlier_center, scatter, "outlier")


def sample_contaminated(config: SimulationConfig, rep_seed: int):
    """One replicate's data and its inlier mask (True = from the clean
    population). Outlier membership is Bernoulli(contamination) per point."""
    inlier, outlier = _populations(config)
    rng = derive_rng(rep_seed, NS_SAMPLING)
    space = config.space
    if outlier is None:
        mask = np.ones(config.n, dtype=bool)
    else:
        mask = rng.random(config.n) >= config.contamination
    points = []
    for is_inlier in mask:
        spec = inlier if is_inlier else outlier
        points.append(space.exp(spec.center, space.random_tangent(spec.center, spec.scatter, rng)))
    return points, mask


def _fit_estimator(name: str, config: SimulationConfig, sample, rep_seed: int):
    space = config.space
    if name == "mhd":
        return mhd_median(
            space, sample,
            jiggle_k=config.jiggle_k,
            radius_frac=config.radius_frac,
            budget=config.refine_budget,
            seed=derive_seed(rep_seed, 1),
        )
    if name == "fm":
        return frechet_mean(space, sample)
    if name == "gdd":
        return frechet_median(space, sample)
    raise DataError(f"unknown estimator {name!r}")


def _run_replicate(config: SimulationConfig, rep: int) -> dict:
    rep_seed = derive_seed(config.seed, NS_REPLICATE, rep)
    sample, _ = sample_contaminated(config, rep_seed)
    center = canonical_center(config.space)
    out = {}
    for name in config.estimators:
        try:
            result = _fit_estimator(name, config, sample, rep_seed)
            out[name] = config.space.distance(result.point, center)
        except MetricDepthError as exc:
            out[name] = float("nan")
            out.setdefault("_failures", []).append((name, str(exc)))
    return out


@dataclass(frozen=True)
class SimulationResult:
    config: SimulationConfig
    errors: dict  # estimator -> (reps,) array, NaN where a rep failed
    medians: dict
    std_errors: dict
    failures: dict = field(default_factory=dict)

    def long_rows(self):
        k = space_parameter(self.config.space)
        for name in self.config.estimators:
            for rep, err in enumerate(self.errors[name]):
                yield {
                    "estimator": name,
                    "case": self.config.case,
                    "space": self.config.space.spec_string,
                    "k": k,
                    "n": self.config.n,
                    "rep": rep,
                    "error": err,
                }

    def summary_rows(self):
        k = space_parameter(self.config.space)
        for name in self.config.estimators:
            yield {
                "estimator": name,
                "case": self.config.case,
                "space": self.config.space.spec_string,
                "k": k,
                "n": self.config.n,
                "median_error": self.medians[name],
                "se": self.std_errors[name],
            }


def _bootstrap_se_of_median(values: np.ndarray, rng, n_boot: int = 256) -> float:
    if len(values) == 0:
        return float("nan")
    draws = rng.integers(0, len(values), size=(n_boot, len(values)))
    return float(np.std(np.median(values[draws], axis=1)))


def run_simulation(config: SimulationConfig) -> SimulationResult:
    """Run every replicate, fit every estimator, aggregate medians with
    bootstrap standard errors. Failed replicates are excluded per estimator
    and counted in ``failures``."""
    reps = range(config.reps)
    if config.n_jobs > 1:
        worker_config = replace(config, n_jobs=1)
        with ProcessPoolExecutor(max_workers=config.n_jobs) as pool:
            results = list(pool.map(_run_replicate, [worker_config] * config.reps, reps,
                                    chunksize=max(1, config.reps // (config.n_jobs * 8))))
    else:
        results = [_run_replicate(config, rep) for rep in reps]

    errors = {
        name: np.array([res[name] for res in results], dtype=float)
        for name in config.estimators
    }
    failures = {}
    for res in results:
        for name, _ in res.get("_failures", []):
            failures[name] = failures.get(name, 0) + 1
    medians = {}
    std_errors = {}
    for name, errs in errors.items():
        valid = errs[~np.isnan(errs)]
        medians[name] = float(np.median(valid)) if len(valid) else float("nan")
        rng = derive_rng(config.seed, NS_BOOTSTRAP, ESTIMATORS.index(name))
        std_errors[name] = _bootstrap_se_of_median(valid, rng)
    return SimulationResult(config=config, errors=errors, medians=medians,
                            std_errors=std_errors, failures=failures)


def breakdown_experiment(
    space: Space,
    base_sample: Sequence,
    contamination_counts: Sequence,
    far_distances: Sequence,
    seed: int = 0,
    jiggle_k: int = 0,
    refine_budget: int = 0,
) -> list:
    """Displacement of the depth median and the intrinsic mean when ``l``
    adversarial points are planted at escalating distances along one
    direction. Returns rows of
    ``{l, distance, estimator, displacement}``.
    """
    base_sample = tuple(base_sample)
    ref_mhd = mhd_median(space, base_sample, jiggle_k=jiggle_k,
                         budget=refine_budget, seed=seed).point
    ref_fm = frechet_mean(space, base_sample).point
    direction = np.zeros(space.intrinsic_dim)
    direction[0] = 1.0
    rows = []
    for l in contamination_counts:
        if l < 0:
            raise DataError("contamination counts must be >= 0")
        for d_idx, far in enumerate(far_distances):
            adversaries = [
                space.exp(ref_mhd, space.tangent_from_coords(ref_mhd, far * direction))
            ] * int(l)
            contaminated = base_sample + tuple(adversaries)
            est_mhd = mhd_median(space, contaminated, jiggle_k=jiggle_k,
                                 budget=refine_budget,
                                 seed=derive_seed(seed, l, d_idx)).point
            est_fm = frechet_mean(space, contaminated).point
            rows.append({"l": int(l), "distance": float(far), "estimator": "mhd",
                         "displacement": space.distance(ref_mhd, est_mhd)})
            rows.append({"l": int(l), "distance": float(far), "estimator": "fm",
                         "displacement": space.distance(ref_fm, est_fm)})
    return rows
