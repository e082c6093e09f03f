import itertools

import numpy as np
import pytest

from fskpnc.modem import (
    ModulationConfig,
    bits_to_symbols,
    demap_hard,
    map_bits,
    modulate,
    network_coded_symbol,
    symbol_bits,
    symbols_to_bits,
)


def test_config():
    assert ModulationConfig(8).mu == 3
    for bad in (0, 3, 6, -4):
        with pytest.raises(ValueError):
            ModulationConfig(bad)


def test_map_bits_examples():
    assert map_bits([1, 0], ModulationConfig(4)) == 2
    assert map_bits([0, 0, 0], ModulationConfig(8)) == 0
    assert map_bits([1, 1, 1], ModulationConfig(8)) == 7
    with pytest.raises(ValueError):
        map_bits([1, 0, 1], ModulationConfig(4))


@pytest.mark.parametrize("M", [2, 4, 8, 16])
def test_map_bits_bijection(M):
    cfg = ModulationConfig(M)
    seen = set()
    for bits in itertools.product([0, 1], repeat=cfg.mu):
        q = map_bits(list(bits), cfg)
        assert 0 <= q < M
        assert list(symbol_bits(q, cfg)) == list(bits)
        seen.add(q)
    assert seen == set(range(M))
    q = np.arange(M)
    assert np.array_equal(bits_to_symbols(symbols_to_bits(q, cfg), cfg), q)


def test_network_coded_examples():
    cfg = ModulationConfig(8)
    assert network_coded_symbol(5, 3, cfg) == 6
    for q in range(8):
        assert network_coded_symbol(q, q, cfg) == 0
        assert network_coded_symbol(q, 0, cfg) == q


@pytest.mark.parametrize("M", [2, 4, 8])
def test_group_axioms(M):
    cfg = ModulationConfig(M)
    op = lambda a, b: network_coded_symbol(a, b, cfg)
    S = range(M)
    for a in S:
        assert op(a, 0) == a
        assert op(a, a) == 0  # every element is its own inverse
        for b in S:
            c = op(a, b)
            assert c in S
            assert c == op(b, a)
            # XOR of bit labels
            assert np.array_equal(symbol_bits(c, cfg), symbol_bits(a, cfg) ^ symbol_bits(b, cfg))
            assert np.array_equal(symbol_bits(op(c, a), cfg), symbol_bits(b, cfg))
            for d in S:
                assert op(op(a, b), d) == op(a, op(b, d))


def test_modulate_examples():
    assert modulate(0, ModulationConfig(2)).tolist() == [1, 0]
    assert modulate(3, ModulationConfig(4)).tolist() == [0, 0, 0, 1]
    cfg = ModulationConfig(8)
    q = np.arange(8)
    x = modulate(q, cfg)
    assert np.all(x.sum(axis=-1) == 1)
    assert np.array_equal(demap_hard(x), q)
    with pytest.raises(ValueError):
        modulate(8, cfg)
