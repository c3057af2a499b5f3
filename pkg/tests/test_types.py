import numpy as np
import pytest

from core.errors import DomainError
from core.types import BoundValue, EmpiricalCdf, Partition, SampleSet, Sidedness, SignificanceLevel


def test_significance_level_domain():
    assert SignificanceLevel(0.5).confidence == 0.5
    for bad in (0.0, -0.1, 0.51, 1.0):
        with pytest.raises(DomainError):
            SignificanceLevel(bad)


def test_sample_set_rejects_out_of_range_and_empty():
    with pytest.raises(DomainError):
        SampleSet([])
    with pytest.raises(DomainError):
        SampleSet([0.2, 1.2])
    with pytest.raises(DomainError):
        SampleSet([np.nan])


def test_sample_set_keeps_input_order_and_sorted_view():
    samples = SampleSet([0.5, 0.1, 0.9])
    assert samples.values.tolist() == [0.5, 0.1, 0.9]
    assert samples.sorted_values.tolist() == [0.1, 0.5, 0.9]
    assert samples.prefix(2).values.tolist() == [0.5, 0.1]
    with pytest.raises(ValueError):
        samples.values[0] = 0.0


def test_binary_detection():
    assert SampleSet([0, 1, 1]).is_binary
    assert SampleSet([0, 1, 1]).successes == 2
    assert not SampleSet([0, 0.5]).is_binary


def test_uniform_partition():
    partition = Partition.uniform(4)
    assert partition.k == 4
    np.testing.assert_allclose(partition.widths, 0.25)
    assert partition.describe() == {"k": 4, "kind": "uniform"}


def test_partition_validation():
    with pytest.raises(DomainError):
        Partition([0.0, 0.6, 0.4, 1.0])
    with pytest.raises(DomainError):
        Partition([0.1, 1.0])
    with pytest.raises(DomainError):
        Partition.uniform(0)


def test_sample_adapted_partition_contains_every_sample():
    samples = SampleSet([0.3, 0.3, 0.7])
    partition = Partition.sample_adapted(samples)
    assert partition.knots.tolist() == [0.0, 0.3, 0.7, 1.0]
    assert partition.describe()["kind"] == "custom"


def test_refine_doubles_cells_and_keeps_old_knots():
    partition = Partition.uniform(3)
    refined = partition.refine()
    assert refined.k == 6
    assert set(partition.knots.tolist()) <= set(refined.knots.tolist())


def test_empirical_cdf_is_right_continuous():
    cdf = EmpiricalCdf.of(SampleSet([0.0, 0.5, 0.5, 1.0]))
    assert cdf(0.0) == 0.25
    assert cdf(0.49) == 0.25
    assert cdf(0.5) == 0.75
    assert cdf(1.0) == 1.0


def test_uniform_grid_cdf_within_one_over_n_of_diagonal():
    n = 200
    cdf = EmpiricalCdf.of(SampleSet(np.arange(n) / n))
    knots = np.linspace(0, 1, 51)
    assert np.all(np.abs(cdf(knots) - knots) <= 1.0 / n + 1e-12)


def test_bound_value_dict_form():
    bound = BoundValue(value=0.1, alpha=0.01, n=10, epsilon=None, sidedness=Sidedness.ONE_SIDED)
    assert bound.to_dict() == {"value": 0.1, "alpha": 0.01, "n": 10, "epsilon": None, "sidedness": "one-sided"}
    assert BoundValue.from_dict(bound.to_dict()) == bound
