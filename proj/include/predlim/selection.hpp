#pragma once

#include "predlim/sequence.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace predlim {

enum class Strategy { high_pi, random, low_pi };

std::string to_string(Strategy strategy);
/// Accepts `highpi`, `high_pi` and `high-pi` (same for the others).
Strategy parse_strategy(const std::string& text);

struct PartitionConfig {
    double eval_fraction = 0.5;
    /// Users shorter than this (or than 2) take part in neither set.
    std::size_t min_length = 5;
    std::uint64_t seed = 0;
};

struct UserPartition {
    std::vector<UserIndex> eval_users;       // ascending
    std::vector<UserIndex> candidate_users;  // ascending
};

/// Seeded shuffle of the eligible users; the first round(eval_fraction * n) become eval users.
UserPartition partition_users(const InteractionLog& log, const PartitionConfig& config);

struct SelectionPlan {
    std::vector<UserIndex> eval_users;
    std::vector<UserIndex> candidate_users;
    double budget_fraction = 0.0;
    Strategy strategy = Strategy::random;
    std::uint64_t seed = 0;
    /// Ascending user indices, size round(budget_fraction * |candidates|).
    std::vector<UserIndex> selected;
};

/// `scores` must contain every candidate user; other entries are ignored.
/// Throws std::invalid_argument for a budget outside [0, 1] or a missing score.
SelectionPlan build_plan(const UserPartition& partition, const std::map<UserIndex, double>& scores,
                         double budget_fraction, Strategy strategy, std::uint64_t seed);

struct TestInstance {
    UserIndex user_index = 0;
    std::string user_id;
    std::size_t history_length = 0;
    ItemIndex target = 0;
    std::int64_t timestamp = 0;
};

struct MaterializedSplit {
    /// Eval prefixes followed by selected sequences, over the full log's item ids.
    InteractionLog train;
    std::vector<TestInstance> test;
};

MaterializedSplit materialize(const SelectionPlan& plan, const InteractionLog& log);

/// Writes <dir>/train.csv and <dir>/test.csv in the ingest CSV schema.
void write_split(const MaterializedSplit& split, const std::filesystem::path& dir);

}  // namespace predlim
