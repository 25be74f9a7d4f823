import logging
import time
from typing import TextIO

import numpy as np
import wandb

from attacks.src.constants import EXPERIMENT_SIGMA
from attacks.src.experiments import ExperimentAxis, countermeasure_experiment
from leakage.src.events import ScheduleProfile
from leakage.src.settings import NoiseConfig, SimulationSettings
from tracelab.src import logging_util

THIS_SEARCH_SEEDS = (11, 12, 13)
THIS_SEARCH_BUDGET = 3000


def objective() -> None:
    """
    Looks for the filter and layout that hide the key best at a fixed noise
    level: a strong filter smears each access into the next slot unless the
    filler gap lets it settle, and load gain decides which access dominates.
    """
    wandb.init(
        project="SCA-Tracelab",
        config={
            "architecture": "cpa",
            "dataset": "synthetic-aes",
            "sigma": EXPERIMENT_SIGMA,
            "budget": THIS_SEARCH_BUDGET,
        },
    )

    lowpass_lambda = wandb.config.lowpass_lambda
    filler_gap = wandb.config.filler_gap
    load_gain = wandb.config.load_gain
    profile = wandb.config.profile

    run_settings = f"""
    running with:
    lowpass_lambda: {lowpass_lambda}
    filler_gap: {filler_gap}
    load_gain: {load_gain}
    profile: {profile}
    """
    logging.info(run_settings)

    with open("running_log.log", "a") as running_log:
        running_log.write(f"{run_settings}")
        running_log.flush()
        median, reached = bench_leakage(running_log, lowpass_lambda, filler_gap, load_gain, profile)
        running_log.write(
            run_settings + f"\nmedian_traces: {median}\n\n======================================\
                =========================================")
        running_log.flush()

    # not reached within the budget scores as twice the budget
    wandb.log({"median_traces": median if np.isfinite(median) else THIS_SEARCH_BUDGET * 2,
               "reached_fraction": reached})


def bench_leakage(running_log: TextIO,
                  lowpass_lambda: float,
                  filler_gap: int,
                  load_gain: float,
                  profile: str) -> tuple[float, float]:
    noise = NoiseConfig(sigma=EXPERIMENT_SIGMA, filler_gap=filler_gap, load_gain=load_gain)
    settings = SimulationSettings(ScheduleProfile.by_name(profile), noise=noise)

    result = countermeasure_experiment(settings, ExperimentAxis.LOWPASS, [lowpass_lambda], THIS_SEARCH_SEEDS,
                                       THIS_SEARCH_BUDGET)
    median = result.median_of(lowpass_lambda)
    reached = float(result.runs["reached"].mean())

    message = f"""---------------------------------
    runs: {result.runs.to_dict(orient="records")}
    median_traces: {median}
    ---------------------------------
    """
    running_log.write(message)
    running_log.flush()
    logging.info(message)

    return median, reached


if __name__ == "__main__":
    logging_util.set_logging()

    running_log = open("running_log.log", "w")
    message = f"Sweep logs. Current datetime: {time.ctime()}\n"
    running_log.write(message)
    running_log.close()
    logging.debug(message)

    sweep_configuration = {
        "method": "random",
        "metric": {"goal": "maximize", "name": "median_traces"},
        "parameters": {
            "lowpass_lambda": {"min": 0.0, "max": 0.95},
            "filler_gap": {"values": [0, 1, 3, 7, 15]},
            "load_gain": {"min": 1.0, "max": 2.0},
            "profile": {"values": ["aes_full", "aes_sbox_load", "aes_no_load"]},
        },
    }

    sweep_id = wandb.sweep(sweep=sweep_configuration, project="SCA-Tracelab")
    wandb.agent(sweep_id, function=objective)
