import logging
import os

import wandb

from attacks.src.constants import EXPERIMENT_BUDGET, EXPERIMENT_SEEDS
from attacks.src.experiments import ExperimentResult, experiment_settings, filter_experiment, injection_experiment, \
    shuffle_experiment
from tracelab.src import logging_util
from tracelab.src.constants import OUTPUT_DIR
from tracelab.src.export import export_table_csv

# Shuffling multiplies the traces needed by about 256, so it gets a larger budget
SHUFFLE_BUDGET = 60000


def log_result(result: ExperimentResult) -> None:
    name = result.axis.value
    for level, median, ratio in zip(result.medians["level"], result.medians["median"], result.ratios()):
        wandb.log({f"{name}/level": level, f"{name}/median_traces": median, f"{name}/ratio": ratio})
    export_table_csv(result.runs, os.path.join(OUTPUT_DIR, f"{name}_runs.csv"))
    logging.info(f"{name} ratios to the unprotected level:\n{result.ratios().to_string()}")


if __name__ == "__main__":
    logging_util.set_logging()

    settings = experiment_settings()

    wandb.init(
        # set the wandb project where this run will be logged
        project="SCA-Tracelab",

        # track hyperparameters and run metadata
        config={
            "profile": settings.profile.name,
            "noise": settings.noise.to_dict(),
            "seeds": list(EXPERIMENT_SEEDS),
            "budget": EXPERIMENT_BUDGET,
        }
    )

    log_result(injection_experiment(settings=settings, progress=True))
    log_result(filter_experiment(settings=settings, progress=True))
    log_result(shuffle_experiment(settings=settings, budget=SHUFFLE_BUDGET, progress=True))

    wandb.finish()
