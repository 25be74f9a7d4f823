from typing import Any, Optional

import numpy as np
import pandas as pd

from attacks.src.constants import LOW_CONFIDENCE_GAP, REPORT_ROWS
from cipher.src.codec import format_hex
from cpa.src.ranking import KeyRanking


def median_gap(rankings: list[KeyRanking]) -> float:
    return float(np.median([ranking.gap for ranking in rankings]))


def is_low_confidence(rankings: list[KeyRanking], threshold: float = LOW_CONFIDENCE_GAP) -> bool:
    return median_gap(rankings) < threshold


class AttackReport:
    """
    Outcome of one attack.

    rankings:
     * One KeyRanking per attacked lane, in lane order.
    key:
     * Recovered key, 16 bytes for both ciphers, or the 8 byte word of a
       single Speck phase.
    success:
     * Only known when the harness passed the true key; None otherwise.
    trace_counts / timings:
     * Per phase, e.g. {"phase1": 500, "phase2": 500} and seconds spent.
    flags:
     * Settings the run was made with, embedded so it can be repeated.
    """

    def __init__(self, cipher: str, rankings: list[KeyRanking], key: bytes,
                 trace_counts: dict[str, int], timings: dict[str, float],
                 low_confidence: bool = False, flags: Optional[dict[str, Any]] = None) -> None:
        assert len(key) in (8, 16), "a full key or one Speck key word"
        self.cipher = cipher
        self.rankings = rankings
        self.key = key
        self.trace_counts = trace_counts
        self.timings = timings
        self.low_confidence = low_confidence
        self.flags = flags if flags is not None else {}
        self.success: Optional[bool] = None
        self.correct_lanes: Optional[int] = None

    @property
    def gaps(self) -> list[float]:
        return [ranking.gap for ranking in self.rankings]

    @property
    def key_hex(self) -> str:
        return format_hex(self.key)

    def grade(self, true_key: bytes) -> None:
        self.success = self.key == true_key
        self.correct_lanes = sum(a == b for a, b in zip(self.key, true_key))

    def render_table(self, rows: int = REPORT_ROWS) -> str:
        """
        Fixed-width text: one column per lane, ranked guesses with their
        scores underneath, then the recovered key.
        """
        width = 12
        lines = ["".join(f"{'lane ' + str(ranking.byte_index):>{width}}" for ranking in self.rankings)]
        for rank in range(rows):
            cells = []
            for ranking in self.rankings:
                guess, score = ranking.guesses[rank], ranking.scores[rank]
                cells.append(f"{guess:02X} {score:.3f}".rjust(width))
            lines.append("".join(cells))
        lines.append("".join(f"{'gap ' + format(gap, '.3f'):>{width}}" for gap in self.gaps))
        lines.append("")
        lines.append(f"cipher: {self.cipher}")
        lines.append(f"key: {format_hex(self.key, ' ')}")
        for phase, count in self.trace_counts.items():
            lines.append(f"{phase}: {count} traces, {self.timings.get(phase, 0.0):.2f} s")
        if self.low_confidence:
            lines.append("LOW CONFIDENCE: median gap below threshold")
        if self.success is not None:
            lines.append(f"success: {self.success} ({self.correct_lanes}/{len(self.key)} bytes)")
        if self.flags:
            lines.append("flags: " + " ".join(f"{name}={value}" for name, value in self.flags.items()))
        return "\n".join(lines)

    def to_dataframe(self) -> pd.DataFrame:
        """
        One row per (lane, rank) with guess, score, peak time and gap.
        """
        records = []
        for ranking in self.rankings:
            for rank, guess in enumerate(ranking.guesses):
                records.append({
                    "lane": ranking.byte_index,
                    "rank": rank,
                    "guess": guess,
                    "score": ranking.scores[rank],
                    "peak_time": ranking.peak_times[rank],
                    "gap": ranking.gap_of(guess) if rank == 0 else np.nan,
                })
        return pd.DataFrame.from_records(records)
