import os

import wandb

from attacks.src.aes_attack import attack_aes
from attacks.src.diagnostics import synthesize_zero_key_pair, zero_key_diagnostic
from attacks.src.speck_attack import attack_speck_full, synthesize_speck_pair
from cipher.src.codec import parse_hex
from leakage.src.constants import DEFAULT_AES_KEY
from leakage.src.events import ScheduleProfile
from leakage.src.settings import NoiseConfig, SimulationSettings
from leakage.src.synth import random_plaintexts, synthesize_trace_set
from tracelab.src.constants import OUTPUT_DIR
from tracelab.src.logging_util import set_logging
from tracelab.src.trace_file import read_trace_set, write_trace_set

THIS_TEST_NUM_TRACES = 500
THIS_TEST_SEED = 1138
SPECK_KEY = "0f0e0d0c0b0a0908 0706050403020100"


if __name__ == "__main__":
    set_logging()

    key = parse_hex(DEFAULT_AES_KEY)
    noise = NoiseConfig(sigma=1.0)

    wandb.init(
        # set the wandb project where this run will be logged
        project="SCA-Tracelab",

        # track hyperparameters and run metadata
        config={
            "architecture": "cpa",
            "dataset": "synthetic",
            "noise": noise.to_dict(),
            "traces": THIS_TEST_NUM_TRACES,
        }
    )

    settings = SimulationSettings(ScheduleProfile.by_name("aes_full"), key, noise)
    traceset = synthesize_trace_set(settings, random_plaintexts(THIS_TEST_NUM_TRACES, THIS_TEST_SEED),
                                    THIS_TEST_SEED, progress=True)
    path = os.path.join(OUTPUT_DIR, "smoke_aes.scat")
    write_trace_set(traceset, path)
    aes_report = attack_aes(read_trace_set(path), true_key=key)
    print(aes_report.render_table())
    assert aes_report.success

    speck_key = parse_hex(SPECK_KEY)
    ts1, ts2 = synthesize_speck_pair(speck_key, THIS_TEST_NUM_TRACES, THIS_TEST_SEED, noise=noise)
    speck_report = attack_speck_full(ts1, ts2, true_key=speck_key)
    print(speck_report.render_table())
    assert speck_report.success

    with_loads, without_loads = synthesize_zero_key_pair(key, THIS_TEST_NUM_TRACES, THIS_TEST_SEED, noise)
    diagnosis = zero_key_diagnostic(with_loads, without_loads, key)
    print(diagnosis.summary())
    assert diagnosis.anomaly_visible

    wandb.log({
        "aes/correct_lanes": aes_report.correct_lanes,
        "speck/correct_lanes": speck_report.correct_lanes,
        "zero_key/zero_lanes": diagnosis.zero_lanes,
        "aes/seconds": aes_report.timings["cpa"],
    })
    wandb.finish()
