#include "predlim/selection.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace predlim;

namespace {

InteractionLog toy_log(std::size_t users) {
    std::vector<InteractionRecord> rows;
    for (std::size_t u = 0; u < users; ++u) {
        const std::size_t len = 3 + u % 6;
        for (std::size_t t = 0; t < len; ++t) {
            rows.push_back({"user" + std::to_string(u), "item" + std::to_string((u * 3 + t * 7) % 11),
                            static_cast<std::int64_t>(10 * t + u)});
        }
    }
    return build_log(rows, {});
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<UserIndex, double> scores_for(const std::vector<UserIndex>& users) {
    std::map<UserIndex, double> s;
    for (UserIndex u : users) s[u] = 0.01 * ((u * 37) % 100);
    return s;
}

}  // namespace

TEST_CASE("four candidates, k = 2") {
    UserPartition p;
    p.candidate_users = {0, 1, 2, 3};
    const std::map<UserIndex, double> scores = {{0, 0.9}, {1, 0.7}, {2, 0.3}, {3, 0.1}};
    CHECK(build_plan(p, scores, 0.5, Strategy::high_pi, 1).selected == std::vector<UserIndex>{0, 1});
    CHECK(build_plan(p, scores, 0.5, Strategy::low_pi, 1).selected == std::vector<UserIndex>{2, 3});
    CHECK(build_plan(p, scores, 0.5, Strategy::random, 1).selected.size() == 2);
}

TEST_CASE("score ties resolve by user index") {
    UserPartition p;
    p.candidate_users = {4, 5, 6};
    const std::map<UserIndex, double> scores = {{4, 0.5}, {5, 0.5}, {6, 0.5}};
    CHECK(build_plan(p, scores, 0.34, Strategy::high_pi, 1).selected == std::vector<UserIndex>{4});
    CHECK(build_plan(p, scores, 0.34, Strategy::low_pi, 1).selected == std::vector<UserIndex>{4});
}

TEST_CASE("full budget selects the whole pool") {
    const auto log = toy_log(20);
    const auto part = partition_users(log, {});
    for (auto s : {Strategy::high_pi, Strategy::random, Strategy::low_pi}) {
        CHECK(build_plan(part, scores_for(part.candidate_users), 1.0, s, 3).selected == part.candidate_users);
    }
}

TEST_CASE("partition is disjoint, eligible and seeded") {
    const auto log = toy_log(30);
    PartitionConfig config;
    config.seed = 9;
    const auto a = partition_users(log, config);
    const auto b = partition_users(log, config);
    CHECK(a.eval_users == b.eval_users);
    std::set<UserIndex> eval(a.eval_users.begin(), a.eval_users.end());
    for (UserIndex u : a.candidate_users) CHECK(eval.count(u) == 0);
    for (UserIndex u : a.eval_users) CHECK(log.user(u).length() >= 5);
    for (UserIndex u : a.candidate_users) CHECK(log.user(u).length() >= 5);
    config.seed = 10;
    CHECK(partition_users(log, config).eval_users != a.eval_users);
}

TEST_CASE("budget errors and determinism") {
    const auto log = toy_log(30);
    const auto part = partition_users(log, {});
    const auto scores = scores_for(part.candidate_users);
    CHECK_THROWS(build_plan(part, scores, 1.5, Strategy::random, 1));
    CHECK_THROWS(build_plan(part, scores, -0.1, Strategy::random, 1));
    CHECK_THROWS(build_plan(part, {}, 0.5, Strategy::high_pi, 1));
    CHECK(build_plan(part, scores, 0.5, Strategy::random, 4).selected ==
          build_plan(part, scores, 0.5, Strategy::random, 4).selected);
}

TEST_CASE("materialized sizes") {
    const auto log = toy_log(30);
    const auto part = partition_users(log, {});
    const auto scores = scores_for(part.candidate_users);

    const auto empty = materialize(build_plan(part, scores, 0.0, Strategy::high_pi, 1), log);
    CHECK(empty.train.sequences().size() == part.eval_users.size());

    const auto plan = build_plan(part, scores, 0.5, Strategy::high_pi, 1);
    const auto split = materialize(plan, log);
    std::size_t expected = 0;
    for (UserIndex u : plan.eval_users) expected += log.user(u).length() - 1;
    for (UserIndex u : plan.selected) expected += log.user(u).length();
    CHECK(split.train.stats().num_interactions == expected);
    CHECK(split.test.size() == plan.eval_users.size());
    CHECK(split.train.num_items() == log.num_items());
    for (const auto& inst : split.test) CHECK(inst.target == log.user(inst.user_index).items.back());
}

TEST_CASE("strategies share byte-identical test files") {
    const auto log = toy_log(40);
    const auto part = partition_users(log, {});
    const auto scores = scores_for(part.candidate_users);
    const auto root = std::filesystem::temp_directory_path() / "predlim_select_test";
    std::filesystem::remove_all(root);
    for (double budget : {0.1, 0.3, 0.5}) {
        std::set<std::string> tests;
        std::set<std::size_t> counts;
        for (auto s : {Strategy::high_pi, Strategy::random, Strategy::low_pi}) {
            const auto plan = build_plan(part, scores, budget, s, 2);
            const auto dir = root / (to_string(s) + std::to_string(budget));
            write_split(materialize(plan, log), dir);
            tests.insert(slurp(dir / "test.csv"));
            counts.insert(plan.selected.size());
            CHECK(slurp(dir / "train.csv").rfind("user_id,item_id,timestamp\n", 0) == 0);
        }
        CHECK(tests.size() == 1);
        CHECK(counts.size() == 1);
    }
}

TEST_CASE("strategy names") {
    CHECK(parse_strategy("highpi") == Strategy::high_pi);
    CHECK(parse_strategy("low_pi") == Strategy::low_pi);
    CHECK(parse_strategy("Random") == Strategy::random);
    CHECK_THROWS(parse_strategy("best"));
}
