# app/services/codec/grouping.py

import numpy as np

from app.core.exceptions import SizeMismatchException
from app.db.schemas.codec import GroupPlan
from app.utils.logger import logger

# нижняя граница числа обменов в доводке; фактический предел max(.., 2·group_count)
_MIN_SWAP_ROUNDS = 256


def _order_pair(first: np.float32, second: np.float32) -> tuple[np.float32, np.float32]:
    # внутри пары сначала больший модуль, при равенстве меньший элемент
    if abs(second) > abs(first):
        return second, first
    return first, second


def _most_lagging(sums: np.ndarray, free: np.ndarray, direction: float) -> int:
    """
    Группа, сильнее всего отстающая от средней суммы в направлении добавляемого вклада.

    Среднее одно для всех групп, поэтому это минимум direction·sum среди незаполненных;
    при равенстве — группа с меньшим номером.
    """
    lag = np.where(free, direction * sums, np.inf)
    return int(np.argmin(lag))


def _refine_by_swaps(groups: np.ndarray) -> int:
    """
    Доводка после жадной раздачи: обмен одним элементом между группами с наибольшей
    и наименьшей суммой.

    Берётся обмен, сильнее всего сближающий эти две суммы, и только если он строго
    сокращает их разность; обе новые суммы остаются внутри прежнего диапазона, поэтому
    общий разброс не растёт. Размеры групп и мультимножество значений не меняются.

    :param groups: Массив (group_count, size); меняется на месте.
    :return: Число принятых обменов.
    """
    wide = groups.astype(np.float64)
    sums = wide.sum(axis=1)
    swaps = 0
    for _ in range(max(_MIN_SWAP_ROUNDS, 2 * groups.shape[0])):
        high, low = int(np.argmax(sums)), int(np.argmin(sums))
        spread = sums[high] - sums[low]
        if spread <= 0:
            break
        delta = wide[high][:, None] - wide[low][None, :]
        residual = np.abs(spread - 2.0 * delta)
        i, j = np.unravel_index(int(np.argmin(residual)), residual.shape)
        if residual[i, j] >= spread:
            break
        groups[high, i], groups[low, j] = groups[low, j], groups[high, i]
        wide[high, i], wide[low, j] = wide[low, j], wide[high, i]
        sums[high], sums[low] = wide[high].sum(), wide[low].sum()
        swaps += 1
    return swaps


def symmetric_grouping(sorted_half: np.ndarray, group_count: int) -> np.ndarray:
    """
    Симметричная группировка отсортированной половины R на group_count равных групп.

    - Пары образуются концами последовательности: (i-й наименьший, i-й наибольший).
    - Каждая пара уходит в незаполненную группу, сильнее всего отстающую от средней суммы
      в направлении знака суммы пары (ноль считается положительным).
    - При нечётном размере группы средние group_count элементов остаются без пары и
      раздаются в конце по убыванию |value| тем же правилом, по одному в группу.
    - Порядок групп — порядок их первого заполнения; внутри пары сначала больший |value|.
    - Затем группы с крайними суммами обмениваются элементами, пока обмен сокращает
      их разность (`_refine_by_swaps`); обменянный элемент встаёт на место ушедшего.

    :param sorted_half: R_n или R_p, отсортированные по возрастанию.
    :param group_count: Число групп (k/2).
    :return: Массив (group_count, len/group_count) того же dtype.
    :raises SizeMismatchException: если group_count не делит длину или вход не отсортирован.
    """
    values = np.asarray(sorted_half)
    n = values.size
    if group_count < 1 or n % group_count:
        raise SizeMismatchException(f"Число групп {group_count} не делит длину {n}")
    if n > 1 and np.any(np.diff(values.astype(np.float64)) < 0):
        raise SizeMismatchException("Вход symmetric_grouping должен быть отсортирован по возрастанию")

    size = n // group_count
    singles = group_count if size % 2 else 0
    pair_count = (n - singles) // 2
    pairs_per_group = size // 2

    members: list[list] = [[] for _ in range(group_count)]
    sums = np.zeros(group_count, dtype=np.float64)
    pairs_taken = np.zeros(group_count, dtype=np.int64)

    for i in range(pair_count):
        first, second = _order_pair(values[i], values[n - 1 - i])
        pair_sum = float(first) + float(second)
        target = _most_lagging(sums, pairs_taken < pairs_per_group, 1.0 if pair_sum >= 0 else -1.0)
        members[target].extend((first, second))
        sums[target] += pair_sum
        pairs_taken[target] += 1

    if singles:
        middle = values[pair_count:pair_count + singles]
        order = np.argsort(-np.abs(middle.astype(np.float64)), kind="stable")
        filled = np.zeros(group_count, dtype=bool)
        for position in order:
            value = middle[position]
            target = _most_lagging(sums, ~filled, 1.0 if value >= 0 else -1.0)
            members[target].append(value)
            sums[target] += float(value)
            filled[target] = True

    groups = np.asarray(members, dtype=values.dtype).reshape(group_count, size)
    swaps = _refine_by_swaps(groups) if group_count > 1 else 0
    sums = groups.astype(np.float64).sum(axis=1)
    logger.debug(
        f"Симметричная группировка: {group_count} групп по {size}, обменов {swaps}, "
        f"разброс сумм {float(sums.max() - sums.min()):.4g}"
    )
    return groups


def build_group_plan(neg_half: np.ndarray, pos_half: np.ndarray, k: int) -> GroupPlan:
    """
    Строит G_n и G_p из R_n и R_p.

    :param neg_half: R_n (отсортирован).
    :param pos_half: R_p (отсортирован).
    :param k: Длина водяного знака.
    :return: GroupPlan; ImbalancedSampleException, если знак суммы какой-то группы не совпал с её битом.
    """
    return GroupPlan(
        neg_groups=symmetric_grouping(neg_half, k // 2),
        pos_groups=symmetric_grouping(pos_half, k // 2),
    )
