"""
Monte Carlo Cycle Sampler
=========================
Draws single-cycle measurement trajectories (n, m, k, l):
- n from the cold Gibbs state on E^0
- m from row n of the expansion transition matrix
- k from the hot Gibbs state on E^tau, independent of m (complete thermalization)
- l from row k of the compression transition matrix

Categorical draws use inverse-CDF lookup on precomputed cumulative tables.
Generators are numpy PCG64 streams; estimates split the work into chunks
with child seeds from SeedSequence.spawn, so results depend only on the
root seed and the chunk size, never on the number of worker threads.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy.stats import chi2

from otto_engine.config import get_settings
from otto_engine.sampler.models import CycleRecord, EmpiricalAtom, EmpiricalDistribution, GoodnessOfFit
from otto_engine.spectra.distributions import build_efficiency_distribution, classify_efficiency, path_tables
from otto_engine.spectra.models import EfficiencyDistribution, EngineSpec
from otto_engine.spectra.thermal import thermal_state, transition_matrix
from otto_engine.utils.errors import InvalidInputError, SupportViolationError
from otto_engine.utils.logging_config import get_logger, log_operation_call

logger = get_logger("sampler.monte_carlo")

RngLike = Union[int, np.random.Generator, np.random.SeedSequence]

DEFAULT_CHUNK = 250_000
MIN_EXPECTED_COUNT = 5.0
DEFAULT_LEVEL = 1e-3


def make_generator(seed: RngLike) -> np.random.Generator:
    """PCG64 generator from an integer seed, a SeedSequence or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def _cdf(weights: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(weights, axis=-1)
    cdf = cdf / cdf[..., -1:]
    cdf[..., -1] = 1.0
    return cdf


def _draw(cdf: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    # index of the first cumulative weight strictly above u
    if cdf.ndim == 1:
        index = np.searchsorted(cdf, uniforms, side="right")
    else:
        index = np.sum(cdf <= uniforms[:, None], axis=1)
    return np.minimum(index, cdf.shape[-1] - 1)


class CycleSampler:
    """
    Vectorized trajectory sampler for one engine specification.

    The efficiency of every path (n, m, k, l) is tabulated once and snapped
    to the exact support, so sampled values are always support atoms.
    """

    def __init__(self, spec: EngineSpec, tol: Optional[float] = None):
        self.spec = spec
        self.tol = get_settings().grouping_tol if tol is None else tol
        d = spec.dimension

        self._cdf_cold = _cdf(thermal_state(spec.spectrum_start, spec.beta_cold).populations)
        self._cdf_hot = _cdf(thermal_state(spec.spectrum_end, spec.beta_hot).populations)
        self._cdf_exp = _cdf(transition_matrix(spec.u_expansion))
        self._cdf_com = _cdf(transition_matrix(spec.u_compression))

        w1, q2, w3, prob = path_tables(spec)
        self._w1, self._q2, self._w3 = (np.ascontiguousarray(a).ravel() for a in (w1, q2, w3))
        eta, zero_over_zero = classify_efficiency(w1, q2, w3, self.tol)
        self._eta = eta.ravel()
        self._zero_over_zero = zero_over_zero.ravel()

        prob = prob.ravel() / math.fsum(prob.ravel())
        self.exact = build_efficiency_distribution(
            self._eta, prob, math.fsum(prob[self._zero_over_zero]), self.tol
        )
        self.support = np.array(self.exact.support)
        self._support_index = self._snap(self._eta)
        self._dimension = d

    def _snap(self, eta: np.ndarray) -> np.ndarray:
        """Index of the support atom matching each path efficiency, -1 when none does."""
        index = np.full(eta.shape, -1, dtype=np.int64)
        for position, value in enumerate(self.support):
            if math.isinf(value):
                hit = eta == value
            else:
                hit = np.isfinite(eta) & (np.abs(eta - value) <= self.tol * (1.0 + abs(value)))
            index[hit & (index < 0)] = position
        return index

    def sample_paths(self, size: int, rng: RngLike) -> np.ndarray:
        """Flat path indices n d^3 + m d^2 + k d + l of ``size`` cycles."""
        generator = make_generator(rng)
        uniforms = generator.random((4, size))
        n = _draw(self._cdf_cold, uniforms[0])
        m = _draw(self._cdf_exp[n], uniforms[1])
        k = _draw(self._cdf_hot, uniforms[2])
        l = _draw(self._cdf_com[k], uniforms[3])
        d = self._dimension
        return ((n * d + m) * d + k) * d + l

    def sample(self, size: int, rng: RngLike) -> pd.DataFrame:
        """Trajectory batch with columns n, m, k, l, w1, q2, w3, eta."""
        paths = self.sample_paths(size, rng)
        n, m, k, l = np.unravel_index(paths, (self._dimension,) * 4)
        return pd.DataFrame(
            {
                "n": n,
                "m": m,
                "k": k,
                "l": l,
                "w1": self._w1[paths],
                "q2": self._q2[paths],
                "w3": self._w3[paths],
                "eta": self._eta[paths],
            }
        )

    def sample_record(self, rng: RngLike) -> CycleRecord:
        """A single cycle."""
        row = self.sample(1, rng).iloc[0]
        return CycleRecord(
            n=int(row["n"]),
            m=int(row["m"]),
            k=int(row["k"]),
            l=int(row["l"]),
            w1=float(row["w1"]),
            q2=float(row["q2"]),
            w3=float(row["w3"]),
            eta=float(row["eta"]),
        )

    def count(self, size: int, rng: RngLike) -> Tuple[np.ndarray, int]:
        """
        Support-atom counts of ``size`` cycles and the number routed by 0/0.

        Raises:
            SupportViolationError: a sampled path has no matching support atom
        """
        paths = self.sample_paths(size, rng)
        index = self._support_index[paths]
        if np.any(index < 0):
            offending = sorted(set(self._eta[paths[index < 0]].tolist()))
            raise SupportViolationError("sampled efficiency outside the exact support", offending)
        counts = np.bincount(index, minlength=self.support.size)
        return counts, int(np.count_nonzero(self._zero_over_zero[paths]))


def sample_cycle(spec: EngineSpec, rng: RngLike) -> CycleRecord:
    """Draw one cycle of ``spec``."""
    return CycleSampler(spec).sample_record(rng)


def sample_cycles(spec: EngineSpec, n: int, rng: RngLike) -> pd.DataFrame:
    """Draw ``n`` cycles of ``spec`` as a DataFrame."""
    if n < 1:
        raise InvalidInputError("n must be at least 1")
    return CycleSampler(spec).sample(n, rng)


def estimate_efficiency_distribution(
    spec: EngineSpec,
    n_samples: int,
    seed: int,
    workers: int = 1,
    chunk: int = DEFAULT_CHUNK,
    tol: Optional[float] = None,
) -> EmpiricalDistribution:
    """
    Empirical efficiency histogram of ``n_samples`` cycles.

    Args:
        spec: Engine specification
        n_samples: Number of cycles
        seed: Root seed; chunk i uses SeedSequence(seed).spawn(...)[i]
        workers: Threads used to draw chunks
        chunk: Cycles per seed stream
        tol: Grouping tolerance (defaults to settings)

    Returns:
        EmpiricalDistribution over the observed support atoms
    """
    if n_samples < 1:
        raise InvalidInputError("n_samples must be at least 1")
    if chunk < 1 or workers < 1:
        raise InvalidInputError("chunk and workers must be positive")

    sampler = CycleSampler(spec, tol)
    sizes = [chunk] * (n_samples // chunk)
    if n_samples % chunk:
        sizes.append(n_samples % chunk)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))

    log_operation_call(
        logger,
        "estimate_efficiency_distribution",
        {"n_samples": n_samples, "seed": seed, "streams": len(sizes), "workers": workers},
    )
    if workers == 1:
        results = [sampler.count(size, stream) for size, stream in zip(sizes, streams)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(sampler.count, sizes, streams))

    counts = np.sum([c for c, _ in results], axis=0)
    zero_over_zero = sum(z for _, z in results)
    atoms = [
        EmpiricalAtom(value=float(value), count=int(count))
        for value, count in zip(sampler.support, counts)
        if count > 0
    ]
    return EmpiricalDistribution(atoms=atoms, total=n_samples, seed=seed, zero_over_zero_count=zero_over_zero)


def _match_atoms(empirical: EmpiricalDistribution, exact: EfficiencyDistribution) -> np.ndarray:
    support = exact.support
    observed = np.zeros(len(support))
    offending: List[float] = []
    for atom in empirical.atoms:
        for position, value in enumerate(support):
            if math.isinf(value) or math.isinf(atom.value):
                matched = value == atom.value
            else:
                matched = abs(value - atom.value) <= exact.grouping_tol * (1.0 + abs(value))
            if matched:
                observed[position] += atom.count
                break
        else:
            offending.append(atom.value)
    if offending:
        raise SupportViolationError(f"{len(offending)} empirical atom(s) outside the exact support", offending)
    return observed


def goodness_of_fit(
    empirical: EmpiricalDistribution,
    exact: EfficiencyDistribution,
    level: float = DEFAULT_LEVEL,
) -> GoodnessOfFit:
    """
    Total-variation distance and Pearson chi-square test.

    Exact atoms with expected count >= 5 form their own bins; the remaining
    atoms are pooled into one bin when the pooled expectation reaches 5 and
    dropped otherwise. The p-value is the upper tail of chi2(bins - 1).

    Raises:
        SupportViolationError: an empirical atom matches no exact atom
    """
    observed = _match_atoms(empirical, exact)
    probs = np.array([a.prob for a in exact.atoms])
    total = empirical.total
    expected = total * probs

    tv_distance = 0.5 * float(np.sum(np.abs(observed / total - probs)))

    large = expected >= MIN_EXPECTED_COUNT
    bins_observed = list(observed[large])
    bins_expected = list(expected[large])
    pooled_expected = float(np.sum(expected[~large]))
    if pooled_expected >= MIN_EXPECTED_COUNT:
        bins_observed.append(float(np.sum(observed[~large])))
        bins_expected.append(pooled_expected)

    o, e = np.array(bins_observed), np.array(bins_expected)
    chi2_stat = float(np.sum((o - e) ** 2 / e)) if e.size else 0.0
    dof = max(e.size - 1, 0)
    p_value = float(chi2.sf(chi2_stat, dof)) if dof > 0 else None

    report = GoodnessOfFit(
        tv_distance=tv_distance,
        chi2_stat=chi2_stat,
        dof=dof,
        p_value=p_value,
        rejected=p_value is not None and p_value < level,
        level=level,
    )
    if report.rejected:
        logger.warning("empirical distribution rejected by chi-square test", extra={"extra_data": report.model_dump()})
    return report
