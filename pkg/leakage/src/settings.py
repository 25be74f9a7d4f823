from typing import Optional

from cipher.src.codec import parse_hex
from leakage.src.constants import ALPHA, AVERAGING, BASELINE, DEFAULT_AES_KEY, FILLER_GAP, INJECTION_MAX, \
    LOAD_GAIN, LOWPASS_LAMBDA, PARALLEL_ACTIVITY, SAMPLES_PER_EVENT, SIGMA
from leakage.src.events import CipherId, EventTag, ScheduleProfile
from tracelab.src.errors import ConfigurationError


class NoiseConfig:
    def __init__(self,
                 alpha: float = ALPHA,
                 baseline: float = BASELINE,
                 sigma: float = SIGMA,
                 samples_per_event: int = SAMPLES_PER_EVENT,
                 filler_gap: int = FILLER_GAP,
                 load_gain: float = LOAD_GAIN,
                 invert: bool = False,
                 averaging: int = AVERAGING) -> None:
        """
        alpha:
         * Volts per unit of Hamming weight for a store.
        load_gain:
         * Multiplier on alpha for memory loads. Setting it to 1 makes every
           access leak the same way.
        invert:
         * Negates the measurement, as an inverted probe across a ground
           resistor would.
        averaging:
         * Acquisitions averaged per plaintext. Each acquisition draws its own
           countermeasure randomness and noise.
        """
        if alpha <= 0:
            raise ConfigurationError(f"alpha must be positive, got {alpha}")
        if sigma < 0:
            raise ConfigurationError(f"sigma must not be negative, got {sigma}")
        if samples_per_event < 1:
            raise ConfigurationError(f"samples_per_event must be at least 1, got {samples_per_event}")
        if filler_gap < 0:
            raise ConfigurationError(f"filler_gap must not be negative, got {filler_gap}")
        if load_gain <= 0:
            raise ConfigurationError(f"load_gain must be positive, got {load_gain}")
        if averaging < 1:
            raise ConfigurationError(f"averaging must be at least 1, got {averaging}")
        self.alpha = alpha
        self.baseline = baseline
        self.sigma = sigma
        self.samples_per_event = samples_per_event
        self.filler_gap = filler_gap
        self.load_gain = load_gain
        self.invert = invert
        self.averaging = averaging

    @property
    def slot_width(self) -> int:
        return self.samples_per_event + self.filler_gap

    def to_dict(self) -> dict[str, object]:
        return dict(vars(self))


class CountermeasureSettings:
    def __init__(self,
                 injection_max: int = INJECTION_MAX,
                 injection_tag: Optional[EventTag] = None,
                 shuffle: bool = False,
                 lowpass_lambda: float = LOWPASS_LAMBDA,
                 parallel_activity: int = PARALLEL_ACTIVITY) -> None:
        if injection_max < 0:
            raise ConfigurationError(f"injection_max must not be negative, got {injection_max}")
        if not 0.0 <= lowpass_lambda < 1.0:
            raise ConfigurationError(f"lowpass lambda must be in [0, 1), got {lowpass_lambda}")
        if parallel_activity < 0:
            raise ConfigurationError(f"parallel_activity must not be negative, got {parallel_activity}")
        self.injection_max = injection_max
        self.injection_tag = injection_tag
        self.shuffle = shuffle
        self.lowpass_lambda = lowpass_lambda
        self.parallel_activity = parallel_activity

    def to_dict(self) -> dict[str, object]:
        values = dict(vars(self))
        values["injection_tag"] = self.injection_tag.value if self.injection_tag is not None else None
        return values


class SimulationSettings:
    def __init__(self,
                 profile: ScheduleProfile,
                 key: bytes = parse_hex(DEFAULT_AES_KEY),
                 noise: Optional[NoiseConfig] = None,
                 countermeasures: Optional[CountermeasureSettings] = None) -> None:
        self.profile = profile
        self.key = key
        self.noise = noise if noise is not None else NoiseConfig()
        self.countermeasures = countermeasures if countermeasures is not None else CountermeasureSettings()

    @property
    def cipher_id(self) -> CipherId:
        return self.profile.cipher_id

    def injection_tag(self) -> EventTag:
        if self.countermeasures.injection_tag is not None:
            return self.countermeasures.injection_tag
        return self.profile.default_injection_tag()

    def describe(self) -> dict[str, object]:
        """
        Everything but the key, for trace set metadata and run logs.
        """
        return {"profile": self.profile.to_dict(), "noise": self.noise.to_dict(),
                "countermeasures": self.countermeasures.to_dict()}
