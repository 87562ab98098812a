# app/services/harness/sweep.py

"""
🧮 Прогон (sweep) по сетке (k, канал)

- Для каждой ячейки выполняется `trials` независимых испытаний: seed латента, водяного знака,
  канала и ключ модели выводятся из base_seed счётной схемой (`seeding.py`).
- Испытание: embed_with_retry → apply_channel → extract → точные счётчики совпадений.
- Работа режется на отрезки испытаний и раздаётся `ProcessPoolExecutor`; агрегация идёт по
  целым счётчикам, упорядоченным по номеру испытания, поэтому отчёт не зависит от числа процессов.
"""

import math
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
from dotenv import dotenv_values
from pydantic import ValidationError
from tqdm import tqdm

from app.core.config import get_harness_settings
from app.core.exceptions import ConfigInvalidException, DataFileException
from app.db.models.enums import EmbeddingStrategyEnum
from app.db.schemas.channel import ChannelRun
from app.db.schemas.codec import EmbeddingParams
from app.db.schemas.experiment import (
    ExperimentConfig,
    SweepReport,
    SweepRow,
    SweepTask,
    TrialOutcome,
)
from app.services.channel.channels import apply_channel
from app.services.channel.grammar import format_channel, parse_channel
from app.services.codec.embedding import embed_with_retry, random_watermark
from app.services.codec.extraction import extract, small_element_bits
from app.services.harness.seeding import derive_trial_seeds
from app.services.stats.thresholds import detection_threshold
from app.utils.logger import logger

_CHUNKS_PER_WORKER = 4


def load_experiment_config(path: Path | str) -> ExperimentConfig:
    """
    Загружает конфиг прогона из плоского key=value файла.

    :param path: Путь к файлу (формат .env, ключи с префиксом SWEEP_).
    :return: ExperimentConfig.
    :raises DataFileException: файла нет.
    :raises ConfigInvalidException: неизвестный ключ или нарушенное ограничение (с его названием).
    """
    path = Path(path)
    if not path.is_file():
        raise DataFileException(f"Конфиг прогона не найден: {path}")

    known = {f"SWEEP_{name.upper()}" for name in ExperimentConfig.model_fields}
    unknown = sorted(key for key in dotenv_values(path) if key.upper() not in known)
    if unknown:
        raise ConfigInvalidException(f"неизвестные ключи {unknown}")

    try:
        cfg = ExperimentConfig(_env_file=path)
    except ValidationError as exc:
        errors = "; ".join(f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}" for error in exc.errors())
        raise ConfigInvalidException(errors) from exc
    logger.info(f"Загружен конфиг прогона {path}: k={cfg.k_values}, каналов {len(cfg.channel_grid)}, trials={cfg.trials}")
    return cfg


def run_trial(params: EmbeddingParams, channel_text: str, seeds_coords: tuple[int, int, int, int]) -> TrialOutcome:
    """
    Одно испытание: встраивание, канал, извлечение, подсчёт совпадений.

    :param params: Параметры встраивания.
    :param channel_text: Канал в грамматике.
    :param seeds_coords: (base_seed, k, channel_index, trial_index).
    :return: TrialOutcome с целыми счётчиками.
    """
    base_seed, k, channel_index, trial_index = seeds_coords
    seeds = derive_trial_seeds(base_seed, k, channel_index, trial_index)
    m = random_watermark(params.k, seeds.watermark)

    z_wt, _ = embed_with_retry(m, seeds.latent, seeds.key, params)
    z_prime = apply_channel(z_wt, ChannelRun(spec=parse_channel(channel_text), trial_seed=seeds.channel))
    result = extract(z_prime, seeds.key, params)

    bits = m.as_array()
    repeated = np.tile(bits, params.repetitions)
    outcome = {
        "trial_index": trial_index,
        "matches": int(np.count_nonzero(result.bits == bits)),
        "w1_matches": int(np.count_nonzero(result.stream_large == repeated)),
        "w1_total": int(repeated.size),
    }
    if params.strategy != EmbeddingStrategyEnum.LARGE_ONLY:
        expected_w2 = bits if params.strategy == EmbeddingStrategyEnum.GROUP else repeated
        observed, intended = small_element_bits(z_prime, m, seeds.key, params)
        outcome |= {
            "w2_matches": int(np.count_nonzero(result.stream_groups == expected_w2)),
            "w2_total": int(expected_w2.size),
            "small_matches": int(np.count_nonzero(observed == intended)),
            "small_total": int(intended.size),
        }
    return TrialOutcome(**outcome)


def _run_task(task: SweepTask) -> tuple[int, list[TrialOutcome], float]:
    """Выполняется в процессе-исполнителе; функция модульного уровня ради pickle"""
    started = time.perf_counter()
    params = EmbeddingParams(shape=task.shape, k=task.k, strategy=task.strategy)
    outcomes = [
        run_trial(params, task.channel, (task.base_seed, task.k, task.channel_index, trial_index))
        for trial_index in range(task.start, task.stop)
    ]
    return task.cell_index, outcomes, time.perf_counter() - started


def plan_tasks(cfg: ExperimentConfig, workers: int) -> list[SweepTask]:
    """Режет каждую ячейку на отрезки испытаний; порядок — (k, канал), как в конфиге"""
    chunk = max(1, math.ceil(cfg.trials / (max(workers, 1) * _CHUNKS_PER_WORKER)))
    tasks = []
    cell_index = 0
    for k in cfg.k_values:
        for channel_index, spec in enumerate(cfg.channel_specs):
            for start in range(0, cfg.trials, chunk):
                tasks.append(
                    SweepTask(
                        cell_index=cell_index,
                        shape=cfg.latent_shape,
                        k=k,
                        strategy=cfg.strategy,
                        channel_index=channel_index,
                        channel=format_channel(spec),
                        base_seed=cfg.base_seed,
                        start=start,
                        stop=min(start + chunk, cfg.trials),
                    )
                )
            cell_index += 1
    return tasks


def _mean(counts: list[int], totals: list[int]) -> float | None:
    if not totals or not any(totals):
        return None
    return math.fsum(count / total for count, total in zip(counts, totals)) / len(totals)


def _aggregate(cfg: ExperimentConfig, task: SweepTask, outcomes: list[TrialOutcome], wall_time: float) -> SweepRow:
    outcomes = sorted(outcomes, key=lambda item: item.trial_index)
    threshold = detection_threshold(task.k, cfg.fpr)
    n = len(outcomes)

    accuracies = [outcome.matches / task.k for outcome in outcomes]
    mean = math.fsum(accuracies) / n
    std = math.sqrt(math.fsum((value - mean) ** 2 for value in accuracies) / (n - 1)) if n > 1 else 0.0
    detections = sum(outcome.matches > threshold.tau for outcome in outcomes)

    return SweepRow(
        k=task.k,
        tau=threshold.tau,
        fpr=cfg.fpr,
        channel=task.channel,
        trials=n,
        bit_acc_mean=mean,
        bit_acc_std=std,
        tpr=detections / n,
        w1_acc_mean=_mean([o.w1_matches for o in outcomes], [o.w1_total for o in outcomes]),
        w2_acc_mean=_mean([o.w2_matches for o in outcomes], [o.w2_total for o in outcomes]),
        small_elem_acc_mean=_mean([o.small_matches for o in outcomes], [o.small_total for o in outcomes]),
        strategy=task.strategy,
        wall_time_s=round(wall_time, 6),
    )


def run_sweep(cfg: ExperimentConfig, workers: int | None = None, progress: bool | None = None) -> SweepReport:
    """
    Выполняет прогон по всей сетке.

    :param cfg: Конфиг прогона.
    :param workers: Число процессов; по умолчанию TMARK_WORKERS. 1 — в текущем процессе.
    :param progress: Показывать tqdm; по умолчанию TMARK_PROGRESS.
    :return: SweepReport: строка на каждую ячейку (k, канал) в порядке конфига.
    """
    settings = get_harness_settings()
    workers = workers or settings.TMARK_WORKERS
    progress = settings.TMARK_PROGRESS if progress is None else progress
    tasks = plan_tasks(cfg, workers)
    logger.info(f"Прогон: {len(tasks)} задач, процессов {workers}, стратегия {cfg.strategy}")

    by_cell: dict[int, list[TrialOutcome]] = defaultdict(list)
    wall: dict[int, float] = defaultdict(float)
    first_task: dict[int, SweepTask] = {}
    for task in tasks:
        first_task.setdefault(task.cell_index, task)

    bar = tqdm(total=len(tasks), desc="sweep", unit="task", disable=not progress)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_run_task, tasks)
            for cell_index, outcomes, elapsed in results:
                by_cell[cell_index].extend(outcomes)
                wall[cell_index] += elapsed
                bar.update()
    else:
        for task in tasks:
            cell_index, outcomes, elapsed = _run_task(task)
            by_cell[cell_index].extend(outcomes)
            wall[cell_index] += elapsed
            bar.update()
    bar.close()

    rows = []
    for cell_index in sorted(first_task):
        row = _aggregate(cfg, first_task[cell_index], by_cell[cell_index], wall[cell_index])
        logger.info(
            f"Ячейка k={row.k}, канал {row.channel}: bit_acc={row.bit_acc_mean:.6f}, "
            f"tpr={row.tpr:.4f} (τ={row.tau}), {row.wall_time_s:.2f} с"
        )
        rows.append(row)
    return SweepReport(rows=rows)
