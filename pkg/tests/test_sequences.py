import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qmclab.sequences import (
    OutOfDomainError,
    PointSet,
    from_samples,
    load_points,
    midpoint_set,
    parse_sequence,
    random_uniform,
    sequence_prefix,
    uniform_grid,
    van_der_corput,
    van_der_corput_set,
)


def bit_reverse(index):
    # reverse the binary digits of index behind the radix point
    bits = bin(index)[2:][::-1]
    return sum(int(b) * 2.0 ** -(j + 1) for j, b in enumerate(bits))


@pytest.mark.parametrize("index, expected", [(1, 0.5), (3, 0.75), (4, 0.125)])
def test_van_der_corput_examples(index, expected):
    assert van_der_corput(index, 2) == expected
    assert bit_reverse(index) == expected


def test_van_der_corput_matches_bit_reversal():
    for i in range(1, 2049):
        assert van_der_corput(i, 2) == bit_reverse(i)


def test_van_der_corput_base3():
    assert van_der_corput(1, 3) == pytest.approx(1 / 3)
    assert van_der_corput(5, 3) == pytest.approx(2 / 3 + 1 / 9)  # 5 = 12_3


@pytest.mark.parametrize("index, base", [(0, 2), (-3, 2), (1, 1), (4, 0)])
def test_van_der_corput_rejects(index, base):
    with pytest.raises(ValueError):
        van_der_corput(index, base)


@pytest.mark.parametrize("base", [2, 3, 5])
def test_van_der_corput_injective(base):
    pts = sequence_prefix(f"vdc:{base}", 2**16)
    assert np.unique(pts).size == pts.size


@pytest.mark.parametrize("base", [2, 3, 7])
def test_vectorised_prefix_matches_scalar(base):
    pts = sequence_prefix(f"vdc:{base}", 500)
    assert [van_der_corput(i, base) for i in range(1, 501)] == pts.tolist()


def test_midpoint_examples():
    assert midpoint_set(1).points.tolist() == [0.5]
    assert midpoint_set(2).points.tolist() == [0.25, 0.75]
    assert midpoint_set(4).points.tolist() == [0.125, 0.375, 0.625, 0.875]
    with pytest.raises(ValueError):
        midpoint_set(0)


@pytest.mark.parametrize("n", [2, 3, 7, 64, 1000])
def test_midpoint_gap(n):
    assert np.diff(midpoint_set(n).points).min() == pytest.approx(1 / n, rel=1e-12)


def test_random_deterministic_and_in_range():
    a, b = random_uniform(5, 42), random_uniform(5, 42)
    assert a.points.tolist() == b.points.tolist()
    big = random_uniform(1000, 42)
    assert np.all((big.points >= 0) & (big.points < 1))
    assert abs(big.points.mean() - 0.5) < 0.05


def test_random_prefix_property():
    short = sequence_prefix("random:9", 10)
    long = sequence_prefix("random:9", 100)
    assert short.tolist() == long[:10].tolist()


def test_random_is_pcg64():
    expected = np.sort(np.random.Generator(np.random.PCG64(3)).random(8))
    assert random_uniform(8, 3).points.tolist() == expected.tolist()


def test_from_samples():
    assert from_samples([0.9, 0.1]).points.tolist() == [0.1, 0.9]
    assert from_samples([0.5]).points.tolist() == [0.5]
    with pytest.raises(OutOfDomainError) as err:
        from_samples([0.2, 1.2])
    assert err.value.index == 1
    with pytest.raises(ValueError):
        from_samples([])


def test_point_set_is_read_only():
    ps = midpoint_set(3)
    with pytest.raises(ValueError):
        ps.points[0] = 0.0


def test_load_points(tmp_path):
    p = tmp_path / "pts.txt"
    p.write_text("# header\n0.75\n\n0.25  # trailing comment\n1\n")
    ps = load_points(p)
    assert ps.points.tolist() == [0.25, 0.75, 1.0]
    assert ps.provenance.startswith("file(")
    p.write_text("0.5\n-0.1\n")
    with pytest.raises(OutOfDomainError):
        load_points(p)


def test_parse_sequence():
    assert parse_sequence("vdc", 3).points.tolist() == [0.25, 0.5, 0.75]
    assert parse_sequence("grid", 2).points.tolist() == [0.0, 0.5]
    assert uniform_grid(4).points.tolist() == [0.0, 0.25, 0.5, 0.75]
    assert parse_sequence("random", 4, seed=11).points.tolist() == random_uniform(4, 11).points.tolist()
    assert parse_sequence("van-der-corput:3", 2).provenance == "van-der-corput(3)"
    with pytest.raises(KeyError):
        parse_sequence("sobol", 4)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["vdc:2", "vdc:3", "midpoint", "grid", "random:5"]), st.integers(1, 3000))
def test_generators_satisfy_invariants(spec, n):
    ps = parse_sequence(spec, n)
    assert isinstance(ps, PointSet)
    assert ps.n == n == ps.points.size
    assert np.all((ps.points >= 0) & (ps.points <= 1))
    assert np.all(np.diff(ps.points) >= 0)
