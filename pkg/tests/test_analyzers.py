"""Tests for shattering search, compression certificates, and bounds."""

import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from scenlab.analyzers import (
    BoundQuery,
    BudgetExceededError,
    adversarial_pac_experiment,
    certify_no_compression_scheme,
    check_shattered,
    compression_beta,
    compression_bound,
    dvc_lower_bound,
    find_compression_subtuple,
    revalidate_not_shattered,
    satisfied_subset,
    vc_sample_bound,
    verify_range_shattering_witness,
)
from scenlab.counterexamples import (
    ExclusionConstraint,
    MembershipConstraint,
    interval_system,
    min_system,
    sum_system,
)
from scenlab.pathplan import band_shatter_candidates, path_system_alg1


def test_satisfied_subset():
    zs = [ExclusionConstraint(a) for a in range(4)]
    assert satisfied_subset(sum_system, 2, zs) == frozenset(
        z for z in zs if z.a != 2)


def test_check_shattered_singleton_atom_is_shattered():
    report = check_shattered(interval_system, [MembershipConstraint(0.0)],
                             max_len=1)
    assert report.shattered
    assert report.tuples_checked == 2  # empty tuple and (U(0),)


def test_check_shattered_counterexample_and_revalidation():
    zs = [MembershipConstraint(0.0), MembershipConstraint(0.3),
          MembershipConstraint(0.7)]
    report = check_shattered(interval_system, zs, max_len=3)
    assert report.verdict == "not_shattered"
    assert report.counterexample == ()  # the empty tuple already fails
    assert report.satisfied_subset == frozenset(zs[1:])
    assert revalidate_not_shattered(interval_system, report)
    payload = report.to_jsonable()
    assert payload["verdict"] == "not_shattered"
    assert len(payload["satisfied_subset"]) == 2


def test_check_shattered_include_empty_false():
    # Without the empty tuple, the first length-1 counterexample appears
    # instead: a positive point alone realizes the full candidate set.
    zs = [MembershipConstraint(0.3), MembershipConstraint(0.7)]
    report = check_shattered(interval_system, zs, include_empty=False)
    assert report.verdict == "not_shattered"
    assert report.counterexample == (zs[0],)
    assert report.satisfied_subset == frozenset(zs)


def test_check_shattered_validation_and_budget():
    with pytest.raises(ValueError):
        check_shattered(interval_system, [MembershipConstraint(0.0)] * 2)
    zs = [MembershipConstraint(a / 10) for a in range(10)]
    with pytest.raises(BudgetExceededError):
        check_shattered(interval_system, zs, max_len=10, budget=100)


def test_revalidate_rejects_positive_reports():
    report = check_shattered(interval_system, [MembershipConstraint(0.0)])
    assert not revalidate_not_shattered(interval_system, report)


def test_dvc_lower_bound_interval():
    sets = [[MembershipConstraint(0.0)],
            [MembershipConstraint(0.0), MembershipConstraint(0.4)]]
    report = dvc_lower_bound(interval_system, sets)
    assert report.lower_bound == 1
    assert report.witness == (MembershipConstraint(0.0),)
    assert [r.verdict for r in report.set_reports] == \
        ["shattered_up_to_L", "not_shattered"]


def test_find_compression_subtuple_on_sum_system():
    # Excluded zeros do not contribute to the sum, so they are droppable:
    # (U(3), U(0), U(3)) decides 7 and so does the subtuple (U(3), U(3)).
    vz = (ExclusionConstraint(3), ExclusionConstraint(0), ExclusionConstraint(3))
    assert find_compression_subtuple(sum_system, vz, 2) == (0, 2)
    # Two positive excluded values cannot be reproduced by fewer of them.
    vz = (ExclusionConstraint(3), ExclusionConstraint(4))
    assert find_compression_subtuple(sum_system, vz, 1) is None
    assert find_compression_subtuple(sum_system, vz, 2) == (0, 1)
    # Zeros are droppable: (U(0), U(4)) decides 5, as does (U(4),).
    vz = (ExclusionConstraint(0), ExclusionConstraint(4))
    assert find_compression_subtuple(sum_system, vz, 1) == (1,)


def test_find_compression_subtuple_min_system_none_certificate():
    for d in range(1, 4):
        vz = tuple(ExclusionConstraint(a) for a in range(d + 1))
        assert find_compression_subtuple(min_system, vz, d) is None


def test_find_compression_subtuple_validation_and_budget():
    with pytest.raises(ValueError):
        find_compression_subtuple(sum_system, (), -1)
    vz = tuple(ExclusionConstraint(a) for a in range(30))
    with pytest.raises(BudgetExceededError):
        find_compression_subtuple(sum_system, vz, 15, budget=1000)


def test_certify_no_compression_scheme_counting():
    base = [ExclusionConstraint(1 << j) for j in range(5)]
    report = certify_no_compression_scheme(sum_system, base, 2)
    # Binary weights make all 2^5 subset sums distinct (oracle below).
    oracle = {1 + sum(z.a for z in sub)
              for r in range(6) for sub in itertools.combinations(base, r)}
    assert report.distinct_decisions == len(oracle) == 32
    assert report.compressed_input_bound == 1 + 5 + 10
    assert report.impossible
    payload = report.to_jsonable()
    assert payload["impossible"] and payload["tuple_length_bound"] == 5


def test_certify_no_compression_scheme_possible_case():
    # The min system over {U(0), U(1)} realizes only 3 decisions; capacity 2
    # offers 4 subtuples, so the counting argument does not apply.
    base = [ExclusionConstraint(0), ExclusionConstraint(1)]
    report = certify_no_compression_scheme(min_system, base, 2)
    assert report.distinct_decisions == 3
    assert report.compressed_input_bound == 4
    assert not report.impossible


def test_certify_no_compression_scheme_permutations_flag():
    base = [ExclusionConstraint(1), ExclusionConstraint(2)]
    plain = certify_no_compression_scheme(sum_system, base, 1)
    permuted = certify_no_compression_scheme(sum_system, base, 1,
                                             permutations=True)
    # The sum is order-insensitive, so both enumerations agree.
    assert plain.distinct_decisions == permuted.distinct_decisions
    assert permuted.permutations


def test_certify_validation():
    with pytest.raises(ValueError):
        certify_no_compression_scheme(sum_system, [ExclusionConstraint(1)] * 2, 1)


def test_verify_range_shattering_witness_small():
    report = verify_range_shattering_witness(3)
    assert report.passed
    assert report.subsets_realized == 8
    assert report.vc_lower_bound == 3
    payload = report.to_jsonable()
    assert payload["all_realized"] and payload["decision_mismatches"] == []
    with pytest.raises(ValueError):
        verify_range_shattering_witness(0)
    with pytest.raises(ValueError):
        verify_range_shattering_witness(13)


def test_adversarial_pac_guard_and_exactness():
    zs = band_shatter_candidates(4)
    with pytest.raises(ValueError):
        adversarial_pac_experiment(path_system_alg1(), zs, n=3,
                                   epsilon=0.25, trials=10)
    report = adversarial_pac_experiment(path_system_alg1(), zs, n=2,
                                        epsilon=0.25, trials=50, seed=2)
    assert report.candidate_count == 4
    assert 0.0 <= report.min_risk <= report.mean_risk <= 1.0
    # Risks are multiples of 1/|Z'| by construction.
    assert (report.min_risk * 4) == pytest.approx(round(report.min_risk * 4))


def test_bound_query_validation():
    with pytest.raises(ValueError):
        BoundQuery(0.0, 0.5, 1)
    with pytest.raises(ValueError):
        BoundQuery(0.5, 1.0, 1)
    with pytest.raises(ValueError):
        BoundQuery(0.5, 0.5, -1)


def test_vc_sample_bound_direct_evaluation():
    def oracle(eps, beta, d):
        return math.ceil((4 / eps) * (d * math.log(12 / eps)
                                      + math.log(2 / beta)))
    for eps, beta, d in [(0.1, 0.05, 1), (0.1, 0.05, 2), (0.05, 0.01, 3)]:
        assert vc_sample_bound(BoundQuery(eps, beta, d)) == oracle(eps, beta, d)
    assert vc_sample_bound(BoundQuery(0.1, 0.05, 1)) == 340
    assert vc_sample_bound(BoundQuery(0.1, 0.05, 2)) == 531
    with pytest.raises(ValueError):
        vc_sample_bound(BoundQuery(0.1, 0.05, 0))


def test_compression_beta_values():
    assert compression_beta(100, 1, 0.1) == pytest.approx(
        100 * 0.9 ** 99, rel=1e-15)
    assert compression_beta(10, 0, 0.5) == pytest.approx(0.5 ** 10, rel=1e-15)
    with pytest.raises(ValueError):
        compression_beta(5, 5, 0.1)


@given(st.integers(min_value=1, max_value=3),
       st.floats(min_value=0.05, max_value=0.5),
       st.floats(min_value=0.001, max_value=0.2))
def test_compression_bound_inversion_matches_scan_oracle(d, eps, beta):
    n = compression_bound(BoundQuery(eps, beta, d))
    assert compression_beta(n, d, eps) <= beta
    if n > d + 1:
        assert compression_beta(n - 1, d, eps) > beta


def test_compression_bound_evaluation_mode():
    q = BoundQuery(0.1, 0.01, 1, n=100)
    assert compression_bound(q) == compression_beta(100, 1, 0.1)
