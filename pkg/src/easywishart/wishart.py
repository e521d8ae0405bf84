"""Monte Carlo estimates of *-moments of block-modified Wishart matrices."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from easywishart.easy_maps import LinearBlockMap, apply_block_modification
from easywishart.tables import MomentTable, all_words, check_word, format_complex

__all__ = [
    "WishartConfig",
    "trial_rng",
    "sample_ginibre",
    "sample_wishart",
    "word_traces",
    "SampleStats",
    "empirical_star_moments",
    "ReportRow",
    "ConvergenceReport",
    "convergence_report",
    "config_to_dict",
]


@dataclass(frozen=True)
class WishartConfig:
    """Ensemble ``W = G G^* / (dm)`` with ``G`` of size ``dn x dm``.

    ``words`` lists the exponent words to estimate; ``None`` means every word
    of length ``1..p_max``.
    """

    d: int
    n: int
    m: int
    trials: int = 200
    seed: int = 0
    p_max: int = 4
    words: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        for name in ("d", "n", "m", "trials", "p_max"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.words is not None:
            words = tuple(check_word(w) for w in self.words)
            if any(not w for w in words):
                raise ValueError("exponent words must be nonempty")
            object.__setattr__(self, "words", words)

    def exponent_words(self) -> tuple[str, ...]:
        if self.words is not None:
            return self.words
        return tuple(all_words(self.p_max, include_empty=False))

    def with_d(self, d: int) -> "WishartConfig":
        return replace(self, d=d)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream per ``(seed, trial)``, stable under any trial ordering."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def sample_ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Complex Gaussian entries with ``E|g|^2 = 1``."""
    if rows < 1 or cols < 1:
        raise ValueError("dimensions must be positive")
    scale = np.sqrt(0.5)
    return scale * (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols)))


def sample_wishart(config: WishartConfig, trial: int) -> np.ndarray:
    if not 0 <= trial < config.trials:
        raise ValueError(f"trial index {trial} outside 0..{config.trials - 1}")
    d, n, m = config.d, config.n, config.m
    G = sample_ginibre(d * n, d * m, trial_rng(config.seed, trial))
    W = G @ G.conj().T / (d * m)
    # exact Hermitian symmetry
    return (W + W.conj().T) / 2


def word_traces(X: np.ndarray, words: Sequence[str]) -> np.ndarray:
    """Normalized traces of all words, sharing prefix products."""
    Xs = X.conj().T
    size = X.shape[0]
    prefixes: dict[str, np.ndarray] = {}
    out = np.empty(len(words), dtype=complex)
    for k, word in enumerate(words):
        # longest cached prefix
        cut = len(word) - 1
        while cut > 0 and word[:cut] not in prefixes:
            cut -= 1
        prod = prefixes[word[:cut]] if cut else None
        for j in range(cut, len(word)):
            factor = X if word[j] == "1" else Xs
            prod = factor if prod is None else prod @ factor
            if j < len(word) - 1:
                prefixes[word[: j + 1]] = prod
        out[k] = np.trace(prod) / size
    return out


@dataclass
class SampleStats:
    """Per-word sample mean and standard error."""

    words: tuple[str, ...]
    mean: np.ndarray
    standard_error: np.ndarray
    trials: int

    def __getitem__(self, word: str) -> tuple[complex, float]:
        k = self.words.index(word)
        return complex(self.mean[k]), float(self.standard_error[k])

    def as_table(self, order: Optional[int] = None) -> MomentTable:
        order = order if order is not None else max(len(w) for w in self.words)
        return MomentTable(order, dict(zip(self.words, self.mean)))


def empirical_star_moments(
    config: WishartConfig, phi: LinearBlockMap, rescale: float = 1.0
) -> SampleStats:
    """Sample statistics of ``tr((rescale * W~)^e)`` over the trials.

    The standard error is the larger of the real and imaginary sample
    deviations over ``sqrt(trials)``; it is 0 for a single trial.
    """
    if phi.n != config.n:
        raise ValueError(f"map acts on {phi.n} x {phi.n} blocks, config has n={config.n}")
    words = config.exponent_words()
    samples = np.empty((config.trials, len(words)), dtype=complex)
    for t in range(config.trials):
        W = sample_wishart(config, t)
        X = rescale * apply_block_modification(W, phi)
        samples[t] = word_traces(X, words)
    mean = samples.mean(axis=0)
    if config.trials > 1:
        sd = np.maximum(samples.real.std(axis=0, ddof=1), samples.imag.std(axis=0, ddof=1))
        se = sd / np.sqrt(config.trials)
    else:
        se = np.zeros(len(words))
    return SampleStats(words, mean, se, config.trials)


@dataclass
class ReportRow:
    d: int
    word: str
    mean: complex
    se: float
    exact: complex

    @property
    def gap(self) -> float:
        return abs(self.mean - self.exact)

    def within(self, n_se: float = 3.0, rel: float = 0.05) -> bool:
        return self.gap <= max(n_se * self.se, rel * abs(self.exact))


CSV_FIELDS = ["d", "word", "mean_re", "mean_im", "se", "exact_re", "exact_im", "gap"]


@dataclass
class ConvergenceReport:
    rows: list[ReportRow] = field(default_factory=list)

    @property
    def d_values(self) -> list[int]:
        return sorted({r.d for r in self.rows})

    def at(self, d: int) -> list[ReportRow]:
        return [r for r in self.rows if r.d == d]

    def final_rows(self) -> list[ReportRow]:
        return self.at(self.d_values[-1]) if self.rows else []

    def all_within(self, n_se: float = 3.0, rel: float = 0.05) -> bool:
        """Acceptance check at the largest ``d``."""
        return all(r.within(n_se, rel) for r in self.final_rows())

    def gap_trend(self) -> dict[str, bool]:
        """Per word: whether the gap at the largest ``d`` is below the one at the smallest."""
        ds = self.d_values
        out = {}
        if len(ds) < 2:
            return out
        first = {r.word: r.gap for r in self.at(ds[0])}
        for r in self.at(ds[-1]):
            out[r.word] = r.gap <= first[r.word]
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for r in self.rows:
            writer.writerow([
                r.d, r.word, repr(r.mean.real), repr(r.mean.imag), repr(r.se),
                repr(r.exact.real), repr(r.exact.imag), repr(r.gap),
            ])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ConvergenceReport":
        rows = []
        for rec in csv.DictReader(io.StringIO(text)):
            rows.append(ReportRow(
                int(rec["d"]), rec["word"],
                complex(float(rec["mean_re"]), float(rec["mean_im"])),
                float(rec["se"]),
                complex(float(rec["exact_re"]), float(rec["exact_im"])),
            ))
        return cls(rows)

    def to_dict(self) -> dict:
        return {
            "d_values": self.d_values,
            "within_tolerance": self.all_within(),
            "gap_shrinks": self.gap_trend(),
            "rows": [
                {"d": r.d, "word": r.word, "mean": format_complex(r.mean), "se": r.se,
                 "exact": format_complex(r.exact), "gap": r.gap}
                for r in self.rows
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def convergence_report(
    config: WishartConfig,
    d_values: Sequence[int],
    phi: LinearBlockMap,
    exact: MomentTable,
    rescale: float = 1.0,
) -> ConvergenceReport:
    """Empirical moments for each ``d`` next to the exact limit."""
    report = ConvergenceReport()
    for d in d_values:
        stats = empirical_star_moments(config.with_d(d), phi, rescale)
        for k, word in enumerate(stats.words):
            report.rows.append(
                ReportRow(d, word, complex(stats.mean[k]), float(stats.standard_error[k]),
                          complex(exact[word]))
            )
    return report


def config_to_dict(config: WishartConfig) -> dict:
    out = asdict(config)
    if out["words"] is not None:
        out["words"] = list(out["words"])
    return out
