#include "oracles.hpp"

#include "predlim/predictability.hpp"
#include "predlim/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace predlim;

namespace {

EntropyEstimate nats(double v) {
    EntropyEstimate e;
    e.value = v;
    e.unit = EntropyUnit::nats;
    e.estimator = EstimatorKind::sampen;
    return e;
}

EntropyEstimate bits(double v) {
    auto e = nats(v);
    e.unit = EntropyUnit::bits;
    return e;
}

}  // namespace

TEST_CASE("epl examples") {
    const auto zero = epl(nats(0.0));
    CHECK(zero.value == 1.0);
    CHECK(*zero.effective_size == 1.0);
    CHECK(epl(nats(std::log(4.0))).value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(epl(bits(2.0)).value == doctest::Approx(0.25).epsilon(1e-12));
    const auto s = epl(nats(1.7));
    CHECK(*s.effective_size == doctest::Approx(1.0 / s.value).epsilon(1e-12));
    CHECK_FALSE(s.n.has_value());
}

TEST_CASE("epl rejects permutation entropy") {
    EntropyEstimate p;
    p.value = 0.3;
    p.unit = EntropyUnit::normalized;
    p.estimator = EstimatorKind::perm_normalized;
    CHECK_THROWS_AS(epl(p), UnitError);
    CHECK_THROWS_AS(fano_invert(p, 10), UnitError);
}

TEST_CASE("fano endpoints") {
    CHECK(fano_invert(bits(0.0), 1000).value == 1.0);
    CHECK(fano_invert(bits(std::log2(1000.0)), 1000).value == 1.0 / 1000.0);
    CHECK(fano_invert(bits(50.0), 1000).value == 1.0 / 1000.0);
    CHECK(*fano_invert(bits(1.0), 1000).n == 1000);
    CHECK_THROWS(fano_invert(bits(std::nan("")), 10));
    CHECK_THROWS(fano_invert(bits(1.0), 1));
}

TEST_CASE("fano n = 1000, 4 bits") {
    const auto s = fano_invert(bits(4.0), 1000);
    CHECK(std::abs(oracle::fano_rhs(s.value, 1000.0) - 4.0) < 1e-9);
    // A fine scan of the decreasing right-hand side brackets the same root.
    double prev = 1.0 / 1000.0;
    for (double p = prev; p <= 1.0; p += 1e-4) {
        if (oracle::fano_rhs(p, 1000.0) < 4.0) {
            CHECK(s.value >= prev);
            CHECK(s.value <= p);
            break;
        }
        prev = p;
    }
}

TEST_CASE("fano frozen values") {
    CHECK(fano_invert(bits(3.0), 100).value == doctest::Approx(0.6833353934072879).epsilon(1e-9));
    CHECK(fano_invert(bits(1.5), 10).value == doctest::Approx(0.7714421645188967).epsilon(1e-9));
    CHECK(fano_invert(bits(5.0), 1000000).value == doctest::Approx(0.7866608819909506).epsilon(1e-9));
}

TEST_CASE("fano right-hand side is strictly decreasing on [1/n, 1]") {
    for (std::size_t n : {3u, 10u, 1000u, 1000000u}) {
        const double lo = 1.0 / static_cast<double>(n);
        double prev = fano_entropy_bits(lo, n);
        for (int k = 1; k <= 2000; ++k) {
            const double p = lo + (1.0 - lo) * k / 2000.0;
            const double v = fano_entropy_bits(p, n);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("fano round trip on random inputs") {
    Rng rng(3);
    for (int trial = 0; trial < 500; ++trial) {
        const auto n = static_cast<std::size_t>(3 + rng.below(100000));
        const double lo = 1.0 / static_cast<double>(n);
        const double p = lo + (1.0 - lo) * (0.001 + 0.998 * rng.uniform01());
        const double s = oracle::fano_rhs(p, static_cast<double>(n));
        CHECK(std::abs(fano_invert(bits(s), n).value - p) <= 1e-8);
    }
}

TEST_CASE("fano is non-decreasing in n at fixed entropy") {
    for (double s : {1.0, 3.0, 5.0}) {
        double prev = 0.0;
        for (std::size_t n : {10u, 100u, 1000u, 10000u}) {
            const double v = fano_invert(bits(s), n).value;
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("fano_nr examples") {
    const std::vector<ItemIndex> constant(8, 2);
    const auto c = fano_nr(nats(0.0), constant);
    CHECK(c.value == 1.0);
    CHECK(*c.n == 2);
    CHECK(c.method == Method::fano_nr);

    const std::vector<ItemIndex> two_way = {0, 1, 0, 0};  // N(0) = {0, 1}
    CHECK(fano_nr(bits(1.0), two_way).value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("pooled reach lowers fano_nr relative to per-user") {
    UserSequence a{0, "a", {0, 1, 0, 2, 0, 1}, {}};
    UserSequence b{1, "b", {0, 3, 0, 4, 0, 5}, {}};
    const std::vector<UserSequence> users = {a, b};
    const auto e = bits(1.2);
    const auto per_user = fano_nr(e, users, FanoutScope::per_user);
    const auto pooled = fano_nr(e, users, FanoutScope::pooled);
    CHECK(*pooled.n > *per_user.n);
    CHECK(pooled.value > per_user.value);
}

TEST_CASE("perm predictability") {
    std::vector<ItemIndex> inc(30);
    std::iota(inc.begin(), inc.end(), 0u);
    CHECK(perm_predictability(inc).value == 1.0);

    // Length 7: d = 3 gives 5 vectors, d = 4 and 5 give fewer than 5 and are skipped.
    const std::vector<ItemIndex> short_seq = {4, 1, 3, 2, 7, 5, 6};
    const auto s = perm_predictability(short_seq);
    CHECK(s.value == doctest::Approx(1.0 - perm_entropy(short_seq, 3).value).epsilon(1e-15));
    CHECK(s.entropy.params.at("d") == 3.0);

    CHECK_THROWS_AS(perm_predictability(std::vector<ItemIndex>{1, 2, 3}), SequenceTooShort);

    const std::vector<ItemIndex> digits = {3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9, 3,
                                           2, 3, 8, 4, 6, 2, 6, 4, 3, 3, 8, 3, 2, 7, 9, 5};
    CHECK(perm_predictability(digits).value == doctest::Approx(1.0 - 0.6856813909344662).epsilon(1e-12));
}

TEST_CASE("perm predictability of iid sequences is near zero") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        std::vector<ItemIndex> x(10000);
        for (auto& v : x) v = static_cast<ItemIndex>(rng.below(1000000));
        CHECK(perm_predictability(x).value <= 0.02);
    }
}

TEST_CASE("scores stay in (0, 1]") {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const double s = 30.0 * rng.uniform01();
        for (double v : {epl(nats(s)).value, fano_invert(nats(s), 50).value}) {
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
        }
    }
    CHECK(epl(nats(1e6)).value > 0.0);
}
