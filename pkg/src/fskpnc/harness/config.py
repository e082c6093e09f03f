"""Experiment configuration: a YAML file plus command-line overrides.

Example::

    kind: ber
    protocol: dnc
    channel: awgn
    csi: partial
    M: 4
    code:
      distribution: dvbs2     # or optimized, or V: {2: 6480, 3: 8640, 30: 1080} + d_c
      rate: "3/5"
      N: 16200
    snr: {unit: ebn0, start: 6.5, stop: 7.5, step: 0.25}
    iters: 100
    stop: {max_frames: 5000, min_frame_errors: 200, min_bit_errors: null}
    seed: 0
"""

import copy
import math
from dataclasses import asdict, dataclass, field

import numpy as np
import yaml

from ..demod import CSI_MODES
from ..ldpc import OPTIMIZED, DegreeDistribution, dvbs2_distribution, from_counts, read_alist
from ..modem import ModulationConfig

KINDS = ("ber", "rate", "exchange-rate", "exit", "optimize", "pcm-gen")
PROTOCOLS = ("dnc", "lnc", "bc")  # bc only for rate sweeps
CHANNELS = ("awgn", "rayleigh")
SNR_UNITS = ("ebn0", "esn0")
DEFAULT_CODE = {"distribution": "dvbs2", "rate": "3/5", "N": 16200}


@dataclass
class StopRule:
    max_frames: int = 5000
    min_frame_errors: int = 200
    min_bit_errors: int = None

    def done(self, frames, frame_errors, bit_errors):
        if frames >= self.max_frames:
            return True
        if frame_errors < self.min_frame_errors:
            return False
        return self.min_bit_errors is None or bit_errors >= self.min_bit_errors

    def censored(self, frame_errors, bit_errors):
        if frame_errors < self.min_frame_errors:
            return True
        return self.min_bit_errors is not None and bit_errors < self.min_bit_errors


@dataclass
class ExperimentConfig:
    kind: str = "ber"
    protocol: str = "dnc"
    channel: str = "awgn"
    csi: str = "partial"
    M: int = 2
    code: dict = field(default_factory=lambda: dict(DEFAULT_CODE))
    snr: dict = field(default_factory=lambda: {"unit": "ebn0", "values": [10.0]})
    iters: int = 100
    inner: int = 1
    stop: StopRule = field(default_factory=StopRule)
    seed: int = 0
    code_seed: int = 1
    trials: int = 100_000
    exit: dict = field(default_factory=dict)
    optimize: dict = field(default_factory=dict)
    out: str = None
    format: str = "csv"

    def __post_init__(self):
        if isinstance(self.stop, dict):
            self.stop = StopRule(**self.stop)
        if "V" not in self.code and "alist" not in self.code:
            # named profiles: fill rate / N from the defaults when only part is given
            self.code = {**DEFAULT_CODE, **self.code}
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if self.channel not in CHANNELS:
            raise ValueError(f"unknown channel {self.channel!r}")
        if self.csi not in CSI_MODES:
            raise ValueError(f"unknown CSI mode {self.csi!r}")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        ModulationConfig(self.M)
        if self.snr.get("unit", "ebn0") not in SNR_UNITS:
            raise ValueError(f"snr unit must be one of {SNR_UNITS}")

    @property
    def mu(self):
        return ModulationConfig(self.M).mu

    def snr_values(self):
        s = self.snr
        if "values" in s:
            return [float(v) for v in s["values"]]
        n = int(math.floor((s["stop"] - s["start"]) / s["step"] + 1e-9)) + 1
        return [round(s["start"] + i * s["step"], 10) for i in range(n)]

    def distribution(self) -> DegreeDistribution:
        c = self.code
        if "alist" in c:
            pcm = read_alist(c["alist"], c.get("K"))
            hist = pcm.degree_histogram()
            d_c = int(np.max(pcm.row_weights()))
            return from_counts(sorted(hist.items()), d_c, pcm.N, pcm.K)
        name = c.get("distribution", "dvbs2")
        if name == "optimized" and "V" not in c:
            csi = "partial" if self.channel == "awgn" else self.csi
            return OPTIMIZED[(self.channel, csi, self.M, str(c["rate"]))][0]
        if name == "dvbs2" and "V" not in c:
            return dvbs2_distribution(str(c["rate"]), int(c["N"]))
        V = {int(k): int(v) for k, v in c["V"].items()}
        N = int(c.get("N", sum(V.values())))
        return from_counts(sorted(V.items()), int(c["d_c"]), N, c.get("K"))

    def ma_rate(self, V=None):
        """r_M: info bits per MA-stage code bit. LNC halves the code rate."""
        r = (V or self.distribution()).rate
        return r / 2.0 if self.protocol == "lnc" else r

    def es_n0_db(self, snr_db, V=None):
        if self.snr.get("unit", "ebn0") == "esn0":
            return float(snr_db)
        return float(snr_db) + 10.0 * math.log10(self.ma_rate(V) * self.mu)

    def to_dict(self):
        d = asdict(self)
        return d


def _merge(base, override):
    out = copy.deepcopy(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def load_config(path=None, overrides=None, kind=None):
    data = {}
    if path:
        with open(path) as fh:
            data = yaml.safe_load(fh) or {}
    if kind is not None:
        data["kind"] = kind
    data = _merge(data, {k: v for k, v in (overrides or {}).items() if v is not None})
    return ExperimentConfig(**data)
