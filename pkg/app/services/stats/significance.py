# app/services/stats/significance.py

"""
🧪 Проверки значимости: t-тест Уэлча, KS против N(0, 1), z-тест двух долей
"""

import math
from typing import Sequence

import numpy as np
from scipy import stats

from app.core.config import get_stats_settings
from app.core.exceptions import DegenerateSampleException, EmptyInputException, StatsException
from app.db.schemas.stats import KSResult, ProportionTestResult, TTestResult


def welch_ttest(
    sample_a: Sequence[float],
    sample_b: Sequence[float],
    t_critical: float | None = None,
) -> TTestResult:
    """
    Двухвыборочный t-тест с поправкой Уэлча.

    :param sample_a: Первая выборка (≥ 2 значений).
    :param sample_b: Вторая выборка (≥ 2 значений).
    :param t_critical: Порог |t|; по умолчанию TMARK_T_CRITICAL (2.101).
    :return: TTestResult; significant = |t| > t_critical.
    :raises DegenerateSampleException: выборка короче 2 или обе без разброса.
    """
    a = np.asarray(sample_a, dtype=np.float64)
    b = np.asarray(sample_b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise DegenerateSampleException(f"Нужно ≥ 2 значений в каждой выборке, получено {a.size} и {b.size}")
    var_a, var_b = a.var(ddof=1), b.var(ddof=1)
    if var_a == 0 and var_b == 0:
        raise DegenerateSampleException("Обе выборки без разброса")

    t_critical = get_stats_settings().TMARK_T_CRITICAL if t_critical is None else t_critical
    result = stats.ttest_ind(a, b, equal_var=False)
    se_a, se_b = var_a / a.size, var_b / b.size
    # Уэлч–Саттеруэйт
    df = (se_a + se_b) ** 2 / (se_a**2 / (a.size - 1) + se_b**2 / (b.size - 1))
    t_value = float(result.statistic)
    return TTestResult(
        t_value=t_value,
        df=float(df),
        p_value=float(result.pvalue),
        significant=abs(t_value) > t_critical,
    )


def normality_test(values: Sequence[float] | np.ndarray, alpha: float | None = None) -> KSResult:
    """
    Одновыборочный тест Колмогорова–Смирнова против N(0, 1).

    :param values: Выборка.
    :param alpha: Уровень; по умолчанию TMARK_KS_ALPHA (0.001). passed = p > alpha.
    """
    sample = np.asarray(values, dtype=np.float64).reshape(-1)
    if sample.size == 0:
        raise EmptyInputException("Пустая выборка для KS-теста")
    alpha = get_stats_settings().TMARK_KS_ALPHA if alpha is None else alpha
    statistic, p_value = stats.kstest(sample, "norm")
    return KSResult(statistic=float(statistic), p_value=float(p_value), passed=bool(p_value > alpha))


def two_proportion_test(hits_a: int, n_a: int, hits_b: int, n_b: int) -> ProportionTestResult:
    """
    Двусторонний z-тест равенства долей hits_a/n_a и hits_b/n_b (объединённая оценка дисперсии).

    z > 0 означает, что доля a больше.
    """
    if n_a < 1 or n_b < 1:
        raise EmptyInputException("Размеры выборок должны быть ≥ 1")
    if not (0 <= hits_a <= n_a and 0 <= hits_b <= n_b):
        raise StatsException("Число успехов вне [0, n]")
    rate_a, rate_b = hits_a / n_a, hits_b / n_b
    pooled = (hits_a + hits_b) / (n_a + n_b)
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n_a + 1.0 / n_b))
    # se = 0 только когда обе доли равны 0 или 1
    z_value = (rate_a - rate_b) / se if se else 0.0
    p_value = float(2.0 * stats.norm.sf(abs(z_value)))
    return ProportionTestResult(rate_a=rate_a, rate_b=rate_b, z_value=z_value, p_value=p_value)
