from __future__ import annotations

from grplab.rng import SplitMix64, derive, mix64, stream


def test_mix64_reference_values():
    # SplitMix64 with seed 0 produces this well-known first output
    s = SplitMix64(0)
    assert s.next_u64() == 0xE220A8397B1DCDAF
    assert SplitMix64(0).next_u64() == 0xE220A8397B1DCDAF  # stateless restart


def test_streams_are_reproducible_and_distinct():
    a = [stream(42, 1).next_u64() for _ in range(4)]
    b = [stream(42, 1).next_u64() for _ in range(4)]
    c = [stream(42, 2).next_u64() for _ in range(4)]
    assert a == b
    assert a != c


def test_derive_is_order_sensitive():
    assert derive(7, 1, 2) != derive(7, 2, 1)
    assert derive(7) == mix64(7)


def test_uniform_in_unit_interval():
    s = SplitMix64(123)
    vals = [s.uniform() for _ in range(1000)]
    assert all(0.0 <= v < 1.0 for v in vals)
    assert 0.4 < sum(vals) / len(vals) < 0.6


def test_randrange_bounds_and_coverage():
    s = SplitMix64(5)
    seen = {s.randrange(6) for _ in range(500)}
    assert seen == set(range(6))


def test_sample_indices_distinct():
    s = SplitMix64(9)
    got = s.sample_indices(10, 7)
    assert len(set(got)) == 7
    assert all(0 <= v < 10 for v in got)
