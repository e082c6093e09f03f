"""eIRA LDPC codes: degree distributions, matrix construction, codec."""

from .distribution import (
    DegreeDistribution,
    InfeasibleDistribution,
    edge_identity_holds,
    from_counts,
    solve_node_counts,
)
from .catalog import DVBS2, OPTIMIZED, dvbs2_distribution
from .pcm import ParityCheckMatrix, accumulator, count_4cycles, from_dense, generate_pcm
from .codec import SumProductDecoder, decode, encode
from .alist import read_alist, write_alist
