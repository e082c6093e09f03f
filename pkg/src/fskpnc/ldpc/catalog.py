"""Named degree distributions.

``DVBS2`` holds the column-weight profile of the DVB-S2 LDPC codes (per code
rate: the high info-column degree, its share of the K info columns, the
remaining info columns at degree 3, and the check degree). Matrices are
realised from these profiles with :func:`generate_pcm` at any length, so
they are "DVB-S2 distribution" codes, not the standardised matrices.

``OPTIMIZED`` lists EXIT-optimised N=16200 distributions for the relay
receiver together with the Eb/N0 (dB) needed for BER 1e-4 by the optimised
code, by the DVB-S2-distribution code, and the achievable-rate limit.
"""

from fractions import Fraction

from .distribution import DegreeDistribution

# rate -> (high degree, fraction of info columns at that degree, d_c)
DVBS2 = {
    "1/3": (12, Fraction(1, 3), 5),
    "2/5": (12, Fraction(1, 3), 6),
    "3/5": (12, Fraction(1, 3), 11),
    "2/3": (13, Fraction(1, 10), 10),
    "4/5": (11, Fraction(1, 8), 18),
}


def dvbs2_distribution(rate, N):
    """DVB-S2 profile scaled to length N (rate given as "3/5" or a Fraction)."""
    key = str(Fraction(rate))
    if key not in DVBS2:
        raise KeyError(f"no DVB-S2 profile for rate {key}")
    d_hi, frac, d_c = DVBS2[key]
    r = Fraction(key)
    K = r * N
    if K.denominator != 1:
        raise ValueError(f"N={N} is not compatible with rate {key}")
    K = int(K)
    n_hi = frac * K
    if n_hi.denominator != 1:
        raise ValueError(f"K={K} does not split evenly for rate {key}")
    n_hi = int(n_hi)
    return DegreeDistribution(
        entries=((2, N - K), (3, K - n_hi), (d_hi, n_hi)), d_c=d_c, N=N, K=K
    )


def _v(*entries, d_c, rate):
    N = 16200
    K = int(Fraction(rate) * N)
    return DegreeDistribution(entries=tuple(entries), d_c=d_c, N=N, K=K)


# (channel, csi, M, rate) -> (distribution, opt_db, std_db, limit_db)
OPTIMIZED = {
    ("awgn", "partial", 2, "3/5"): (_v((2, 6480), (3, 7290), (15, 2430), d_c=11, rate="3/5"), 9.78, 9.89, 9.41),
    ("awgn", "partial", 4, "3/5"): (_v((2, 6480), (3, 8640), (30, 1080), d_c=11, rate="3/5"), 6.65, 6.99, 6.29),
    ("awgn", "partial", 8, "3/5"): (_v((2, 6480), (3, 8991), (43, 729), d_c=11, rate="3/5"), 5.15, 5.53, 4.66),
    ("rayleigh", "partial", 2, "3/5"): (_v((2, 6480), (4, 8640), (22, 1080), d_c=11, rate="3/5"), 17.4, 17.8, 16.2),
    ("rayleigh", "partial", 4, "3/5"): (_v((2, 6480), (3, 8262), (23, 1458), d_c=11, rate="3/5"), 13.0, 13.8, 11.7),
    ("rayleigh", "partial", 8, "3/5"): (_v((2, 6480), (3, 8640), (30, 1080), d_c=11, rate="3/5"), 10.5, 11.6, 9.40),
    ("rayleigh", "none", 2, "3/5"): (_v((2, 6480), (3, 7290), (15, 2430), d_c=11, rate="3/5"), 17.4, 17.9, 16.4),
    ("rayleigh", "none", 4, "3/5"): (_v((2, 6480), (3, 8262), (23, 1458), d_c=11, rate="3/5"), 13.1, 13.9, 12.1),
    ("rayleigh", "none", 8, "3/5"): (_v((2, 6480), (3, 8640), (30, 1080), d_c=11, rate="3/5"), 10.9, 11.8, 9.83),
    ("awgn", "partial", 2, "2/5"): (_v((2, 9720), (3, 4050), (11, 2430), d_c=6, rate="2/5"), 9.93, 9.98, 9.52),
    ("awgn", "partial", 4, "2/5"): (_v((2, 9720), (4, 5760), (22, 720), d_c=6, rate="2/5"), 7.09, 7.17, 6.57),
    ("awgn", "partial", 8, "2/5"): (_v((2, 9720), (3, 5670), (27, 810), d_c=6, rate="2/5"), 5.54, 5.86, 5.07),
    ("rayleigh", "partial", 2, "2/5"): (_v((2, 9720), (3, 4860), (15, 1620), d_c=6, rate="2/5"), 14.8, 15.0, 13.9),
    ("rayleigh", "partial", 4, "2/5"): (_v((2, 9720), (4, 5760), (22, 720), d_c=6, rate="2/5"), 11.0, 11.3, 9.94),
    ("rayleigh", "partial", 8, "2/5"): (_v((2, 9720), (3, 4860), (15, 1620), d_c=6, rate="2/5"), 9.18, 9.44, 8.02),
    ("rayleigh", "none", 2, "2/5"): (_v((2, 9720), (3, 4536), (13, 1944), d_c=6, rate="2/5"), 15.1, 15.3, 14.3),
    ("rayleigh", "none", 4, "2/5"): (_v((2, 9720), (4, 5832), (24, 648), d_c=6, rate="2/5"), 11.4, 11.6, 10.4),
    ("rayleigh", "none", 8, "2/5"): (_v((2, 9720), (4, 5832), (24, 648), d_c=6, rate="2/5"), 9.55, 9.85, 8.46),
}
