"""Campaign runners behind the CLI subcommands.

BER frames are independent: frame ``f`` at SNR index ``p`` draws all its
randomness from ``default_rng([seed, p, f])``. Workers may finish in any
order, but results are folded strictly by frame index and the stop rule is
applied frame by frame, so the output does not depend on ``threads``.
"""

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .. import exitopt, rate
from ..bicmid import Interleaver, dnc_receive, lnc_receive
from ..channel import LinkBudget, draw_gains, ma_stage_dnc, ma_stage_lnc
from ..demod import CsiState
from ..ldpc import SumProductDecoder, encode, generate_pcm, read_alist, write_alist
from ..modem import ModulationConfig, bits_to_symbols, modulate
from .config import ExperimentConfig


@dataclass
class CurvePoint:
    snr_db: float
    es_n0_db: float
    ber: float
    bit_errors: int
    bits_simulated: int
    frame_errors: int
    frames: int
    seed: int
    censored: bool


BER_COLUMNS = [f for f in CurvePoint.__dataclass_fields__]


# ------------------------------------------------------------ code setup

def build_code(cfg: ExperimentConfig):
    """(pcm, interleaver) for a config; deterministic in ``code_seed``."""
    if "alist" in cfg.code:
        pcm = read_alist(cfg.code["alist"], cfg.code.get("K"))
    else:
        pcm = generate_pcm(cfg.distribution(), np.random.default_rng(cfg.code_seed))
    if pcm.N % cfg.mu:
        raise ValueError(f"code length {pcm.N} is not a multiple of mu={cfg.mu}")
    pi = Interleaver(pcm.N, [cfg.code_seed, 7])
    return pcm, pi


class FrameSimulator:
    """One transmit/receive round of a BER campaign."""

    def __init__(self, cfg: ExperimentConfig, pcm, pi):
        self.cfg = cfg
        self.mod = ModulationConfig(cfg.M)
        self.pcm = pcm
        self.pi = pi
        self.decoder = SumProductDecoder(pcm)

    def _symbols(self, u):
        c = self.pi.interleave(encode(u, self.pcm))
        return bits_to_symbols(c.reshape(-1, self.mod.mu), self.mod)

    def run(self, es_n0_db, p_idx, f_idx):
        cfg = self.cfg
        rng = np.random.default_rng([cfg.seed, p_idx, f_idx])
        K = self.pcm.K
        budget = LinkBudget.from_es_n0_db(es_n0_db)
        u1 = rng.integers(0, 2, K, dtype=np.int8)
        u2 = rng.integers(0, 2, K, dtype=np.int8)
        q1, q2 = self._symbols(u1), self._symbols(u2)
        L = q1.size
        if cfg.protocol == "dnc":
            h1 = draw_gains(cfg.channel, L, rng)
            h2 = draw_gains(cfg.channel, L, rng)
            y = ma_stage_dnc(modulate(q1, self.mod), modulate(q2, self.mod), h1, h2, budget, rng)
            csi = CsiState.from_gains(cfg.csi, budget, h1, h2)
            res = dnc_receive(y, csi, self.decoder, self.pi, self.mod, cfg.iters, cfg.inner)
        else:
            h1 = draw_gains(cfg.channel, L, rng)
            h2 = draw_gains(cfg.channel, L, rng)
            y1 = ma_stage_lnc(modulate(q1, self.mod), h1, budget, rng, terminal=1)
            y2 = ma_stage_lnc(modulate(q2, self.mod), h2, budget, rng, terminal=2)
            csi1 = CsiState.from_gains(cfg.csi, budget, h1, np.zeros_like(h1))
            csi2 = CsiState.from_gains(cfg.csi, budget, np.zeros_like(h2), h2)
            res = lnc_receive(y1, y2, csi1, csi2, self.decoder, self.pi, self.mod,
                              cfg.iters, cfg.inner)
        errs = int(np.count_nonzero(res.u_hat != (u1 ^ u2)))
        return errs, K


_WORKER = None


def _init_worker(cfg_dict, pcm, pi):
    global _WORKER
    _WORKER = FrameSimulator(ExperimentConfig(**cfg_dict), pcm, pi)


def _work(args):
    return _WORKER.run(*args)


def run_ber(cfg: ExperimentConfig, threads=1, pcm=None, pi=None, progress=None):
    """BER curve over the configured SNR grid."""
    if cfg.protocol == "bc":
        raise ValueError("BER campaigns simulate the MA stage: protocol must be dnc or lnc")
    if pcm is None:
        pcm, pi = build_code(cfg)
    elif pi is None:
        pi = Interleaver(pcm.N, [cfg.code_seed, 7])
    if pcm.N % cfg.mu:
        raise ValueError(f"code length {pcm.N} is not a multiple of mu={cfg.mu}")
    V_rate = pcm.K / pcm.N
    r_m = V_rate / 2.0 if cfg.protocol == "lnc" else V_rate
    stop = cfg.stop
    pool = None
    if threads > 1:
        pool = ProcessPoolExecutor(threads, initializer=_init_worker,
                                   initargs=(cfg.to_dict(), pcm, pi))
    else:
        local = FrameSimulator(cfg, pcm, pi)
    points = []
    try:
        for p_idx, snr in enumerate(cfg.snr_values()):
            if cfg.snr.get("unit", "ebn0") == "esn0":
                es = float(snr)
            else:
                es = float(snr) + 10.0 * math.log10(r_m * cfg.mu)
            frames = fe = be = bits = 0
            f_next = 0
            while not stop.done(frames, fe, be):
                if pool is None:
                    batch = [local.run(es, p_idx, f_next)]
                else:
                    n = min(4 * threads, stop.max_frames - f_next)
                    jobs = [(es, p_idx, f) for f in range(f_next, f_next + n)]
                    batch = list(pool.map(_work, jobs))
                for errs, k in batch:
                    if stop.done(frames, fe, be):
                        break  # surplus frames from the last batch are dropped
                    frames += 1
                    bits += k
                    be += errs
                    fe += errs > 0
                f_next += len(batch)
            pt = CurvePoint(snr_db=float(snr), es_n0_db=es, ber=be / bits if bits else math.nan,
                            bit_errors=be, bits_simulated=bits, frame_errors=fe, frames=frames,
                            seed=cfg.seed, censored=stop.censored(fe, be))
            points.append(pt)
            if progress:
                progress(pt)
    finally:
        if pool is not None:
            pool.shutdown()
    return points


def required_snr(points, target=1e-4):
    """SNR where the curve crosses ``target``, log-linear interpolation."""
    pts = sorted(points, key=lambda p: p.snr_db)
    for a, b in zip(pts, pts[1:]):
        if a.ber >= target > b.ber:
            if b.ber <= 0:
                return b.snr_db
            la, lb, lt = math.log10(a.ber), math.log10(b.ber), math.log10(target)
            return a.snr_db + (la - lt) / (la - lb) * (b.snr_db - a.snr_db)
    if pts and pts[0].ber < target:
        return pts[0].snr_db
    return math.nan


# ------------------------------------------------------------ serialization

def config_header(cfg: ExperimentConfig):
    return json.dumps(cfg.to_dict(), sort_keys=True, default=str)


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else str(x)
    return x


def render(rows, columns, cfg, fmt="csv"):
    """Rows (dicts) as CSV with a ``# {config}`` line, or as JSON."""
    if fmt == "json":
        doc = {"config": cfg.to_dict(),
               "rows": [{k: _jsonable(r[k]) for k in columns} for r in rows]}
        return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"
    buf = io.StringIO()
    buf.write(f"# {config_header(cfg)}\n")
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(float(v)) if isinstance(v, (float, np.floating)) else v)
                    for k, v in r.items()})
    return buf.getvalue()


def emit(text, path=None):
    if path:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")


# ------------------------------------------------------------ other campaigns

def run_rate(cfg: ExperimentConfig):
    es_grid = _es_grid_for_rate(cfg)
    return rate.rate_curve(cfg.protocol, cfg.M, cfg.channel, cfg.csi, es_grid, cfg.trials, cfg.seed)


def _es_grid_for_rate(cfg):
    # rate sweeps are indexed by Es/N0; an Eb/N0 grid needs a known rate, so
    # it is only accepted in Es/N0 units here
    if cfg.snr.get("unit", "ebn0") != "esn0":
        raise ValueError("rate sweeps take snr.unit: esn0 (Eb/N0 is an output)")
    return cfg.snr_values()


def run_exchange_rate(cfg: ExperimentConfig):
    if cfg.protocol == "bc":
        raise ValueError("exchange rate needs protocol dnc or lnc")
    return rate.exchange_rate_curve(cfg.protocol, cfg.M, cfg.channel, cfg.csi,
                                    _es_grid_for_rate(cfg), cfg.trials, cfg.seed)


EXIT_COLUMNS = ["curve", "i_a", "i_e"]


def run_exit(cfg: ExperimentConfig):
    """Threshold of the configured code plus its curves at the threshold.

    Returns ``(threshold, rows)`` where rows are curve samples for CSV.
    """
    V = cfg.distribution()
    opts = cfg.exit
    trials = int(opts.get("trials", 20000))
    grid = cfg.snr_values()
    base = {"M": cfg.M, "channel": cfg.channel, "csi": cfg.csi}
    cache = exitopt.TransferCache(cfg.M, cfg.channel, cfg.csi, trials, cfg.seed)
    th = exitopt.exit_threshold(V, base, grid, trials, cache=cache)
    rows = []
    eb = th.eb_n0_db if th.open else grid[-1]
    ia = exitopt.default_grid()
    tr = cache.get(exitopt.es_n0_for(eb, V.rate, cfg.mu))
    for x, y in zip(ia, tr.vnd_exit(V, ia)):
        rows.append({"curve": "vnd_demod", "i_a": float(x), "i_e": float(y)})
    for x, y in zip(ia, exitopt.cnd_inverse(V.d_c, ia)):
        rows.append({"curve": "cnd_inverse", "i_a": float(x), "i_e": float(y)})
    return V, th, rows


def threshold_record(V, th):
    return {"V": V.as_dict(), "label": V.label(),
            "threshold_db": th.eb_n0_db if th.open else None, "open": th.open}


def run_optimize(cfg: ExperimentConfig, threads=1, progress=None):
    """Search, then realise and BER-test candidates in threshold order.

    Stops at the first candidate whose required SNR at ``target_ber`` beats
    the DVB-S2-distribution code of the same rate, or after ``max_confirm``
    candidates.
    """
    o = cfg.optimize
    N = int(cfg.code["N"])
    K = int(cfg.code.get("K", round(N * _fraction(cfg.code["rate"]))))
    d_c = int(cfg.code.get("d_c", 0)) or cfg.distribution().d_c
    base = {"M": cfg.M, "channel": cfg.channel, "csi": cfg.csi}
    exit_grid = o.get("exit_snr", cfg.snr_values())
    if isinstance(exit_grid, dict):
        exit_grid = ExperimentConfig(snr=exit_grid).snr_values()
    ranked = exitopt.search_distributions(
        base, N, K, d_c, exit_grid, trials=int(o.get("exit_trials", 20000)), seed=cfg.seed,
        even_only=bool(o.get("even_only", False)), max_candidates=o.get("max_candidates"),
        progress=progress)
    target = float(o.get("target_ber", 1e-4))
    max_confirm = int(o.get("max_confirm", 2))
    record = {"ranking": [threshold_record(V, th) for V, th in ranked], "confirmations": []}
    if max_confirm <= 0:
        return record

    std_cfg = ExperimentConfig(**{**cfg.to_dict(), "kind": "ber",
                                  "code": {"distribution": "dvbs2", "rate": cfg.code["rate"], "N": N}})
    std_pts = run_ber(std_cfg, threads)
    std_req = required_snr(std_pts, target)
    record["standard"] = {"required_snr_db": _jsonable(std_req),
                          "points": [asdict(p) for p in std_pts]}
    for V, th in ranked[:max_confirm]:
        if not th.open:
            break
        c = ExperimentConfig(**{**cfg.to_dict(), "kind": "ber",
                                "code": {"V": dict(V.entries), "d_c": V.d_c, "N": V.N, "K": V.K}})
        pts = run_ber(c, threads)
        req = required_snr(pts, target)
        better = math.isfinite(req) and (not math.isfinite(std_req) or req < std_req)
        record["confirmations"].append({"label": V.label(), "required_snr_db": _jsonable(req),
                                        "beats_standard": better,
                                        "points": [asdict(p) for p in pts]})
        if better:
            record["winner"] = V.label()
            break
    return record


def _fraction(r):
    from fractions import Fraction
    return Fraction(str(r))


def run_pcm_gen(cfg: ExperimentConfig, path):
    """Realise the configured distribution and write it as alist.

    Returns the matrix read back from disk, which must equal the original.
    """
    pcm = generate_pcm(cfg.distribution(), np.random.default_rng(cfg.code_seed))
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    write_alist(path, pcm)
    back = read_alist(path, pcm.K)
    if back != pcm:
        raise RuntimeError("alist round trip changed the matrix")
    return pcm
