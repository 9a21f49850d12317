"""Pairwise correlation measures and the absolute-value weight matrix.

Three measures cover the type pairs: Pearson correlation for numeric-numeric,
Cramer's V for nominal-nominal, and the between/total variance ratio (one-way
R-squared) for mixed pairs. The assembled matrix stores absolute values, is
exactly symmetric (each unordered pair computed once), and carries
significance flags as metadata that never gates a weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import ConstantColumn, ConstantNumeric, SingleCategory
from .ingest import Dataset
from .schema import KIND_NUMERIC

ALPHA = 0.05

DIAGONAL_ZERO = "zero"
DIAGONAL_ONE = "one"


@dataclass(frozen=True)
class PearsonResult:
    r: float
    p: float

    @property
    def significant(self) -> bool:
        return self.p < ALPHA


@dataclass(frozen=True)
class CramersVResult:
    v: float
    p: float

    @property
    def significant(self) -> bool:
        return self.p < ALPHA


@dataclass(frozen=True)
class RSquaredResult:
    r2: float
    significant: bool


def pearson(x: np.ndarray, y: np.ndarray) -> PearsonResult:
    """Sample Pearson r with a two-sided t-test p-value (n-2 dof)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.size
    if y.size != n:
        raise ValueError("columns differ in length")
    if n < 3:
        raise ValueError("need at least 3 observations")
    xc = x - x.mean()
    yc = y - y.mean()
    sx2 = float(xc @ xc)
    sy2 = float(yc @ yc)
    if sx2 == 0.0 or sy2 == 0.0:
        raise ConstantColumn("pearson undefined for a constant column")
    r = float((xc @ yc) / np.sqrt(sx2 * sy2))
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = r * np.sqrt((n - 2) / (1.0 - r * r))
        p = float(2.0 * stats.t.sf(abs(t), df=n - 2))
    return PearsonResult(r=r, p=p)


def _contingency(x_codes: np.ndarray, y_codes: np.ndarray) -> np.ndarray:
    """Observed-category contingency table (empty categories dropped)."""
    x_codes = np.asarray(x_codes)
    y_codes = np.asarray(y_codes)
    if x_codes.size != y_codes.size:
        raise ValueError("columns differ in length")
    _, xi = np.unique(x_codes, return_inverse=True)
    _, yi = np.unique(y_codes, return_inverse=True)
    rows = xi.max() + 1
    cols = yi.max() + 1
    table = np.zeros((rows, cols), dtype=np.float64)
    np.add.at(table, (xi, yi), 1.0)
    return table


def cramers_v(x_codes: np.ndarray, y_codes: np.ndarray) -> CramersVResult:
    """Cramer's V from the chi-squared statistic of the contingency table.

    Classical (uncorrected) definition; p-value from the chi-squared
    distribution with (rows-1)(cols-1) degrees of freedom.
    """
    table = _contingency(x_codes, y_codes)
    rows, cols = table.shape
    if rows < 2 or cols < 2:
        raise SingleCategory("association needs >= 2 observed categories on both sides")
    n = table.sum()
    expected = np.outer(table.sum(axis=1), table.sum(axis=0)) / n
    chi2 = float(((table - expected) ** 2 / expected).sum())
    dof = (rows - 1) * (cols - 1)
    p = float(stats.chi2.sf(chi2, df=dof))
    v = float(np.sqrt(chi2 / (n * (min(rows, cols) - 1))))
    return CramersVResult(v=min(v, 1.0), p=p)


def r_squared(g_codes: np.ndarray, y: np.ndarray) -> RSquaredResult:
    """Share of numeric variance explained by the nominal grouping.

    SS_between / SS_total over one-way group means; significance from the
    F statistic against the critical value at alpha = 0.05.
    """
    g_codes = np.asarray(g_codes)
    y = np.asarray(y, dtype=np.float64)
    if g_codes.size != y.size:
        raise ValueError("columns differ in length")
    n = y.size
    labels = np.unique(g_codes)
    k = labels.size
    if k < 2:
        raise SingleCategory("grouping needs >= 2 observed categories")
    grand = y.mean()
    ss_total = float(((y - grand) ** 2).sum())
    if ss_total == 0.0:
        raise ConstantNumeric("variance ratio undefined for a constant numeric column")
    ss_between = 0.0
    for lab in labels:
        yy = y[g_codes == lab]
        ss_between += yy.size * (yy.mean() - grand) ** 2
    r2 = float(min(max(ss_between / ss_total, 0.0), 1.0))
    ss_within = max(ss_total - ss_between, 0.0)
    if n - k <= 0 or ss_within == 0.0:
        significant = ss_between > 0.0
    else:
        f_stat = (ss_between / (k - 1)) / (ss_within / (n - k))
        f_crit = float(stats.f.ppf(1.0 - ALPHA, k - 1, n - k))
        significant = bool(f_stat > f_crit)
    return RSquaredResult(r2=r2, significant=significant)


@dataclass(frozen=True)
class WeightMatrix:
    """Symmetric non-negative connection matrix with significance metadata."""

    concept_names: tuple[str, ...]
    weights: np.ndarray
    significance: np.ndarray
    protected: tuple[str, ...] = ()
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        m = len(self.concept_names)
        if self.weights.shape != (m, m) or self.significance.shape != (m, m):
            raise ValueError("matrix shape does not match concept count")
        self.weights.flags.writeable = False
        self.significance.flags.writeable = False

    @property
    def size(self) -> int:
        return len(self.concept_names)

    def index(self, name: str) -> int:
        return self.concept_names.index(name)

    def weight(self, a: str, b: str) -> float:
        return float(self.weights[self.index(a), self.index(b)])

    def edges(self) -> list[tuple[str, str, float, bool]]:
        """Undirected upper-triangle edge list: (source, target, weight, significant)."""
        out = []
        for i in range(self.size):
            for j in range(i + 1, self.size):
                out.append((self.concept_names[i], self.concept_names[j],
                            float(self.weights[i, j]), bool(self.significance[i, j])))
        return out


def build_weight_matrix(dataset: Dataset, diagonal: str = DIAGONAL_ZERO) -> WeightMatrix:
    """Assemble the pairwise absolute-correlation matrix for all concepts.

    Dispatch per unordered pair: |Pearson r| (numeric-numeric), Cramer's V
    (nominal-nominal), variance ratio (mixed). Degenerate pairs (constant or
    single-category columns) become weight 0, not significant, and are
    listed in the result's warnings.
    """
    if diagonal not in (DIAGONAL_ZERO, DIAGONAL_ONE):
        raise ValueError(f"unknown diagonal config {diagonal!r}")
    feats = dataset.schema.features
    m = len(feats)
    if m < 2:
        raise ValueError("need at least 2 concepts")
    weights = np.zeros((m, m), dtype=np.float64)
    signif = np.zeros((m, m), dtype=bool)
    warnings: list[str] = []
    for i in range(m):
        for j in range(i + 1, m):
            a, b = feats[i], feats[j]
            try:
                if a.kind == KIND_NUMERIC and b.kind == KIND_NUMERIC:
                    res = pearson(dataset.columns[a.name], dataset.columns[b.name])
                    w, s = abs(res.r), res.significant
                elif a.kind != KIND_NUMERIC and b.kind != KIND_NUMERIC:
                    res = cramers_v(dataset.columns[a.name], dataset.columns[b.name])
                    w, s = res.v, res.significant
                elif a.kind != KIND_NUMERIC:
                    res = r_squared(dataset.columns[a.name], dataset.columns[b.name])
                    w, s = res.r2, res.significant
                else:
                    res = r_squared(dataset.columns[b.name], dataset.columns[a.name])
                    w, s = res.r2, res.significant
            except (ConstantColumn, SingleCategory, ConstantNumeric) as exc:
                w, s = 0.0, False
                warnings.append(f"{a.name}~{b.name}: {exc}")
            weights[i, j] = weights[j, i] = w
            signif[i, j] = signif[j, i] = s
    if diagonal == DIAGONAL_ONE:
        np.fill_diagonal(weights, 1.0)
        np.fill_diagonal(signif, True)
    return WeightMatrix(concept_names=dataset.schema.concept_names,
                        weights=weights, significance=signif,
                        protected=dataset.schema.protected_names,
                        warnings=tuple(warnings))
