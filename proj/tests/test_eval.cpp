#include "oracles.hpp"

#include "predlim/eval.hpp"
#include "predlim/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace predlim;

namespace {

std::vector<double> random_with_ties(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(rng.below(5)) * 0.25;
    return v;
}

const std::filesystem::path kReference = std::filesystem::path(PREDLIM_SOURCE_DIR) / "reference" / "best_models.csv";

}  // namespace

TEST_CASE("aggregate examples") {
    CHECK(aggregate_dataset(std::vector<double>{0.2, 0.8}, std::vector<double>{1, 3}) ==
          doctest::Approx(0.65).epsilon(1e-14));
    CHECK(aggregate_dataset(std::vector<double>{0.1, 0.2, 0.6}, std::vector<double>{2, 2, 2}) ==
          doctest::Approx(0.3).epsilon(1e-14));
    CHECK_THROWS(aggregate_dataset(std::vector<double>{}, std::vector<double>{}));
    CHECK_THROWS(aggregate_dataset(std::vector<double>{0.5}, std::vector<double>{0}));
}

TEST_CASE("event weights use T - 1") {
    std::vector<UserSequence> users = {{0, "a", {0, 1}, {}}, {1, "b", {0, 1, 0, 1, 0}, {}}};
    const InteractionLog log(ItemVocabulary::from_arrays({"x", "y"}, {3, 4}), users);
    const auto w = user_weights(log, Weighting::events);
    CHECK(w == std::vector<double>{1.0, 4.0});
    const std::vector<double> scores = {0.9, 0.4};
    CHECK(aggregate_dataset(scores, w) == doctest::Approx(0.5).epsilon(1e-14));
    // Length weights would give (2 * 0.9 + 5 * 0.4) / 7.
    CHECK(aggregate_dataset(scores, w) != doctest::Approx(3.8 / 7.0));
    CHECK(aggregate_dataset(scores, user_weights(log, Weighting::uniform)) == doctest::Approx(0.65));
}

TEST_CASE("aggregate stays within the score range") {
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> s(1 + rng.below(20)), w(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            s[i] = rng.uniform01();
            w[i] = 1.0 + static_cast<double>(rng.below(100));
        }
        const double a = aggregate_dataset(s, w);
        CHECK(a >= *std::min_element(s.begin(), s.end()) - 1e-15);
        CHECK(a <= *std::max_element(s.begin(), s.end()) + 1e-15);
    }
}

TEST_CASE("spearman examples") {
    const std::vector<double> a = {1, 2, 3, 4};
    CHECK(spearman(a, a) == 1.0);
    CHECK(spearman(a, std::vector<double>{4, 3, 2, 1}) == -1.0);
    CHECK(spearman(a, std::vector<double>{1, 3, 2, 4}) == 0.8);
    CHECK_THROWS_AS(spearman(a, std::vector<double>{2, 2, 2, 2}), std::domain_error);
    CHECK(average_ranks(std::vector<double>{5, 1, 5, 3}) == std::vector<double>{3.5, 1, 3.5, 2});
}

TEST_CASE("spearman and rmse match brute force") {
    Rng rng(12);
    int compared = 0;
    while (compared < 500) {
        const std::size_t n = 2 + rng.below(11);
        const auto a = random_with_ties(rng, n);
        const auto b = random_with_ties(rng, n);
        CHECK(std::abs(rmse(a, b) - oracle::rmse(a, b)) <= 1e-12);
        if (oracle::ranks(a) == std::vector<double>(n, (n + 1) / 2.0)) continue;
        if (oracle::ranks(b) == std::vector<double>(n, (n + 1) / 2.0)) continue;
        CHECK(std::abs(spearman(a, b) - oracle::spearman(a, b)) <= 1e-12);
        ++compared;
    }
}

TEST_CASE("spearman is invariant to increasing transforms") {
    const std::vector<double> a = {0.3, 0.1, 0.7, 0.2, 0.9};
    const std::vector<double> b = {0.2, 0.5, 0.4, 0.1, 0.8};
    std::vector<double> ta;
    for (double v : a) ta.push_back(std::exp(3.0 * v) + 2.0);
    CHECK(spearman(a, b) == doctest::Approx(spearman(ta, b)).epsilon(1e-15));
}

TEST_CASE("rmse examples") {
    const std::vector<double> a = {0.1, 0.5};
    CHECK(rmse(a, a) == 0.0);
    CHECK(rmse(std::vector<double>{0, 1}, std::vector<double>{1, 0}) == 1.0);
    CHECK(rmse(a, std::vector<double>{0.4, 0.2}) == rmse(std::vector<double>{0.4, 0.2}, a));
    CHECK_THROWS(rmse(a, std::vector<double>{1.0}));
}

TEST_CASE("reference file round trip") {
    const auto rows = read_reference(kReference);
    REQUIRE(rows.size() == 11);
    auto find = [&](const std::string& name) {
        return *std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.dataset == name; });
    };
    CHECK(find("Algebra").hit20 == 0.7317);
    CHECK(find("Bridge").hit20 == 0.6798);
    CHECK(find("Bridge").hit1 == 0.4546);
    CHECK(find("MovieLens-1M").best_model == "GRU4Rec");
}

TEST_CASE("consistency report against a hand calculation") {
    const auto reference = read_reference(kReference);
    std::istringstream in(
        "dataset_id,method,predictability\n"
        "Algebra,epl,0.70\nBridge,epl,0.72\nLastFM,epl,0.20\nTaFeng,epl,0.15\nUnknown,epl,0.5\n"
        "Algebra,fano,0.7317\nBridge,fano,0.6798\n");
    const auto scores = read_dataset_scores(in);
    const auto reports = consistency_report(scores, reference);
    REQUIRE(reports.size() == 2);
    const auto& e = reports[0];
    CHECK(e.method == Method::epl);
    CHECK(e.pairs.size() == 4);
    CHECK(e.warnings.size() == 1);
    // rank differences (1, -1, 0, 0): 1 - 6 * 2 / (4 * 15)
    CHECK(std::abs(e.spearman_rho - 0.8) <= 1e-12);
    const double hand = std::sqrt((0.0317 * 0.0317 + 0.0402 * 0.0402 + 0.0534 * 0.0534 + 0.0183 * 0.0183) / 4.0);
    CHECK(std::abs(e.rmse - hand) <= 1e-12);

    const auto& f = reports[1];
    CHECK(f.spearman_rho == 1.0);
    CHECK(f.rmse == 0.0);
    CHECK(consistency_to_json(reports).find("\"spearman_rho\"") != std::string::npos);
}
