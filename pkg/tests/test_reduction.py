import os
import random
from fractions import Fraction

import pytest

from genlucas.charpoly import dominant_root, log_dominant_root, lucas_coefficient
from genlucas.errors import AmbiguityError, DomainError, ReductionFailure
from genlucas.linforms import bound_m_of_k
from genlucas.precreal import PrecReal, pr_eval
from genlucas.reduction import (ContinuedFraction, ConvergentCache, ReductionProblem,
                                RealSource, baker_davenport_reduce, build_large_k_problem,
                                build_small_k_problem, cf_expand, mu_value)
from oracles import max_w_bruteforce, random_instance


def golden(p):
    return (1 + PrecReal.exact(5, p).sqrt()) / 2


def test_golden_ratio_expansion():
    cf = cf_expand(golden, 60)
    assert cf.partial_quotients == [1] * 60


def test_known_expansions():
    assert cf_expand(lambda p: PrecReal.exact(2, p).sqrt(), 20).partial_quotients == [1] + [2] * 19
    e = cf_expand(lambda p: PrecReal.exact(1, p).exp(), 13).partial_quotients
    assert e == [2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8, 1]


def test_refined_expansion_is_a_prefix_extension():
    ratio = RealSource(lambda p: log_dominant_root(3, p) / log_dominant_root(2, p))
    a = cf_expand(ratio, precision=192, count=40)
    b = cf_expand(ratio, precision=384, count=80)
    assert b.partial_quotients[:40] == a.partial_quotients
    assert a.precision == 192


def test_convergent_laws():
    src = RealSource(lambda p: log_dominant_root(5, p) / log_dominant_root(3, p))
    cf = cf_expand(src, 60)
    qs = cf.partial_quotients
    conv = cf.convergents
    for i in range(2, len(conv)):
        assert conv[i][0] == qs[i] * conv[i - 1][0] + conv[i - 2][0]
        assert conv[i][1] == qs[i] * conv[i - 1][1] + conv[i - 2][1]
    assert all(conv[i][1] < conv[i + 1][1] for i in range(1, len(conv) - 1))
    x = src(1024)
    for (p, q), (_, q_next) in zip(conv, conv[1:]):
        err = abs(x - Fraction(p, q))
        assert err.upper() < Fraction(1, q * q_next)
        assert err.upper() < Fraction(1, q * q)


def test_rational_expansion_terminates():
    cf = cf_expand(PrecReal.exact(Fraction(415, 64)), 10)
    assert cf.partial_quotients == [6, 2, 15, 2]
    assert cf.convergents[-1] == (415, 64)
    # a non-dyadic rational is only ever enclosed, so its last quotient stays open
    with pytest.raises(AmbiguityError):
        cf_expand(lambda p: PrecReal.exact(Fraction(415, 93), p), 10, ceiling=4096)


def test_ambiguity_names_the_index():
    fuzzy = PrecReal.ball(Fraction(1, 3), Fraction(1, 2 ** 20))
    with pytest.raises(AmbiguityError, match="partial quotient"):
        cf_expand(fuzzy, 30, ceiling=2048)


def test_needs_a_stopping_rule():
    with pytest.raises(DomainError):
        cf_expand(golden)


def test_small_k_problem_shapes():
    pos = build_small_k_problem(3, 2, "z1_pos")
    neg = build_small_k_problem(3, 2, "z1_neg")
    assert pos.A == 13 and neg.A == 24
    assert pos.M == neg.M == bound_m_of_k(3)
    beta = dominant_root(2).alpha
    assert (pos.B(192) - beta).contains(0)
    g = pos.gamma_hat(192) * neg.gamma_hat(192)
    assert g.contains(1)
    mu = mu_value(3, 2)
    expected = 1 + mu.log() / log_dominant_root(2)
    assert (pos.mu_hat(192) - expected).contains(0)
    with pytest.raises(DomainError):
        build_small_k_problem(3, 3, "z1_pos")
    with pytest.raises(DomainError):
        build_small_k_problem(4, 3, "z2_pos")


def test_large_k_problem_shapes():
    pos = build_large_k_problem(2, "z2_pos", 91 * 10 ** 23)
    neg = build_large_k_problem(2, "z2_neg", 91 * 10 ** 23)
    assert (pos.A, neg.A) == (9, 26)
    assert pos.B(64).mid == 2 and neg.B(64).mid == 2
    mu = mu_value(None, 2)
    assert mu.sign() > 0
    phi = dominant_root(2).alpha
    assert (mu - (2 * phi - 1) * (phi - 1) / (2 + 3 * (phi - 2)) / 3).contains(0)


def test_problem_validation():
    with pytest.raises(DomainError):
        ReductionProblem(golden, golden, 0, 2, 10)
    with pytest.raises(DomainError):
        ReductionProblem(golden, golden, 1, 1, 10)
    with pytest.raises(DomainError):
        ReductionProblem(golden, golden, 1, 2, 0)


@pytest.mark.parametrize("sign", ["z1_pos", "z1_neg"])
def test_small_k_reduction(sign):
    prob = build_small_k_problem(3, 2, sign)
    r = baker_davenport_reduce(prob)
    assert r.q > 6 * prob.M
    assert r.epsilon.sign() > 0
    assert r.w_bound < 1600
    # stable when recomputed at twice the precision
    from genlucas.precreal import pr_nearest_int_distance as dist
    p = 2 * r.precision
    eps2 = dist(prob.mu_hat(p) * r.q) - prob.M * dist(prob.gamma_hat(p) * r.q)
    assert eps2.sign() > 0
    assert (eps2 - r.epsilon).contains(0)


def test_large_k_first_pass_example():
    r = baker_davenport_reduce(build_large_k_problem(2, "z2_pos", 775 * 10 ** 269))
    assert r.w_bound <= 2980
    assert r.q > 6 * 775 * 10 ** 269


def test_failure_path_with_dependent_shift():
    # mu = 3 * gamma makes ||mu q|| <= 3 ||gamma q||, so epsilon <= 0 for every q once M >= 3
    gamma = lambda p: PrecReal.exact(2, p).sqrt()
    mu = lambda p: 3 * PrecReal.exact(2, p).sqrt()
    prob = ReductionProblem(gamma, mu, 5, 2, 50, label="degenerate")
    with pytest.raises(ReductionFailure) as exc:
        baker_davenport_reduce(prob, retries=5)
    assert exc.value.problem is prob


def test_retries_advance_past_first_convergent():
    seen = set()
    rng = random.Random(11)
    for _ in range(60):
        prob, *_ = random_instance(rng, 2000)
        try:
            r = baker_davenport_reduce(prob)
        except ReductionFailure:
            continue
        seen.add(r.attempts)
    assert 1 in seen


@pytest.mark.parametrize("seed", range(12))
def test_oracle_equivalence_small_instances(seed):
    rng = random.Random(1000 + seed)
    prob, g, mu, B = random_instance(rng, 3000)
    try:
        r = baker_davenport_reduce(prob)
    except ReductionFailure:
        pytest.skip("no positive epsilon for this draw")
    assert max_w_bruteforce(g, mu, prob.A, B, prob.M) < r.w_bound


def test_cache_roundtrip_and_invalidation(tmp_path):
    calls = []

    def src(p):
        calls.append(p)
        return golden(p)

    cache = ConvergentCache(tmp_path)
    prob = ReductionProblem(src, lambda p: PrecReal.exact(Fraction(1, 3), p), 2, 2, 1000)
    r1 = baker_davenport_reduce(prob, cache=cache, cache_key="golden")
    n_calls = len(calls)
    r2 = baker_davenport_reduce(prob, cache=cache, cache_key="golden")
    assert r1.q == r2.q
    # the expansion came from disk: only epsilon evaluations touched the source
    assert len(calls) - n_calls <= r2.attempts
    assert not [f for f in os.listdir(tmp_path) if f.endswith(".tmp")]

    hit = cache.load("golden", src, 6 * 1000, 20)
    assert isinstance(hit, ContinuedFraction)
    assert cache.load("golden", src, 10 ** 40, 20) is None           # not deep enough
    assert cache.load("golden", src, 6 * 1000, 20, min_precision=10 ** 5) is None

    big = ReductionProblem(src, lambda p: PrecReal.exact(Fraction(1, 3), p), 2, 2, 10 ** 30)
    baker_davenport_reduce(big, cache=cache, cache_key="golden")
    assert cache.load("golden", src, 6 * 10 ** 30, 20) is not None


def test_corrupt_cache_entry_is_ignored(tmp_path):
    cache = ConvergentCache(tmp_path)
    (tmp_path / "bad.json").write_text("{not json")
    assert cache.load("bad", golden, 10, 0) is None


def test_pr_eval_sources_work_as_inputs():
    cf = cf_expand(lambda p: pr_eval("log(3)/log(2)", p), 15)
    assert cf.partial_quotients[:6] == [1, 1, 1, 2, 2, 3]
