#include "oracles.hpp"

#include "predlim/pipeline.hpp"
#include "predlim/sweep.hpp"

#include <doctest.h>

#include <cmath>

using namespace predlim;

namespace {

DifficultySweepConfig small_sweep() {
    DifficultySweepConfig c;
    c.base.n = 500;
    c.base.users = 12;
    c.base.length = 80;
    c.base.seed = 6;
    c.base.params = RepeatLastParams{};
    c.targets = {0.2, 0.6};
    c.reps = 2;
    return c;
}

}  // namespace

TEST_CASE("difficulty sweep is reproducible") {
    const auto a = run_difficulty_sweep(small_sweep());
    const auto b = run_difficulty_sweep(small_sweep());
    CHECK(sweep_to_csv(a) == sweep_to_csv(b));
    CHECK(a.rows.size() == 2 * 4);
    CHECK(sweep_to_csv(a).rfind("grid_value,method,mean,std,rep_count\n", 0) == 0);
}

TEST_CASE("sweep rmse is taken over per-target means") {
    const auto c = small_sweep();
    const auto r = run_difficulty_sweep(c);
    for (Method m : c.methods) {
        const auto means = sweep_means(r, m);
        REQUIRE(means.size() == c.targets.size());
        CHECK(std::abs(r.rmse.at(m) - oracle::rmse(means, c.targets)) <= 1e-12);
        for (double v : means) {
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("sweep rows aggregate independent repetitions") {
    auto c = small_sweep();
    c.targets = {0.4};
    c.reps = 3;
    c.methods = {Method::epl};
    const auto r = run_difficulty_sweep(c);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].rep_count == 3);
    CHECK(r.rows[0].std > 0.0);
}

TEST_CASE("n sweep holds the oracle ceiling fixed") {
    NSweepConfig c;
    c.base.users = 10;
    c.base.length = 60;
    c.base.params = ContextSwitchParams{};
    c.n_grid = {100, 1000};
    c.reps = 1;
    const auto r = run_n_sweep(c);
    CHECK(r.rows.size() == 2 * 4);
    CHECK(r.rows[0].grid_value == 100.0);
    CHECK(r.rows.back().grid_value == 1000.0);

    c.base.params = RepeatLastParams{};
    CHECK_THROWS(run_n_sweep(c));
}

TEST_CASE("score_users matches per-user scoring") {
    GeneratorConfig g;
    g.n = 300;
    g.users = 6;
    g.length = 50;
    g.params = SessionResetParams{1, 0.1, 0.3};
    const auto corpus = generate(g, false);
    const std::vector<Method> methods = {Method::epl, Method::fano, Method::fano_nr, Method::perm};
    ScoringOptions options;
    options.global_n = g.n;
    const auto scores = score_users(corpus.sequences, methods, options);
    for (std::size_t u = 0; u < corpus.sequences.size(); ++u) {
        const auto& items = corpus.sequences[u].items;
        const auto e = sampen(items);
        CHECK(scores.at(Method::epl)[u] == epl(e).value);
        CHECK(scores.at(Method::fano)[u] == fano_invert(e, g.n).value);
        CHECK(scores.at(Method::fano_nr)[u] == fano_nr(e, std::span<const ItemIndex>(items)).value);
        CHECK(scores.at(Method::perm)[u] == perm_predictability(items).value);
    }
    options.nr_scope = FanoutScope::pooled;
    const auto pooled = score_users(corpus.sequences, std::vector<Method>{Method::fano_nr}, options);
    const auto reach = transition_fanout(corpus.sequences, FanoutScope::pooled);
    CHECK(pooled.at(Method::fano_nr)[0] == fano_invert(sampen(corpus.sequences[0].items), reach).value);
}
