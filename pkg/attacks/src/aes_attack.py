import logging
import time
from typing import Any, Optional

from attacks.src.report import AttackReport, is_low_confidence
from cpa.src.engine import attack_byte
from cpa.src.selection import SelectionModel
from leakage.src.events import CipherId
from leakage.src.traces import TraceSet
from tracelab.src.errors import ConfigurationError


def attack_aes(traceset: TraceSet, selection: str = "aes_sbox", polarity: int = 1,
               true_key: Optional[bytes] = None, flags: Optional[dict[str, Any]] = None) -> AttackReport:
    """
    Attacks the 16 key bytes independently and concatenates the winners.
    """
    if traceset.cipher_id != CipherId.AES128:
        raise ConfigurationError(f"attack_aes needs an AES trace set, got {traceset.cipher_id.name}")
    model = SelectionModel.by_name(selection)
    if model.lanes != 16:
        raise ConfigurationError(f"{selection} is not an AES selection")

    start = time.time()
    rankings = []
    for byte_index in range(16):
        ranking = attack_byte(traceset, model, byte_index, polarity)
        logging.debug(f"lane {byte_index}: {ranking.best:02X} gap {ranking.gap:.3f}")
        rankings.append(ranking)
    elapsed = time.time() - start

    key = bytes(ranking.best for ranking in rankings)
    report = AttackReport("aes128", rankings, key, {"cpa": traceset.num_traces}, {"cpa": elapsed},
                          is_low_confidence(rankings), flags)
    if true_key is not None:
        report.grade(true_key)
    logging.info(f"AES attack on {traceset.num_traces} traces ({selection}) done in {elapsed:.2f} s: "
                 f"{report.key_hex}")
    return report
