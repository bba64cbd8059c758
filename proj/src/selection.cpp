#include "predlim/selection.hpp"

#include "predlim/csv.hpp"
#include "predlim/log_io.hpp"
#include "predlim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace predlim {

std::string to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::high_pi: return "highpi";
        case Strategy::random: return "random";
        case Strategy::low_pi: return "lowpi";
    }
    throw std::invalid_argument("unknown strategy");
}

Strategy parse_strategy(const std::string& text) {
    std::string key;
    for (char c : text) {
        if (c != '-' && c != '_') key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (key == "highpi") return Strategy::high_pi;
    if (key == "random") return Strategy::random;
    if (key == "lowpi") return Strategy::low_pi;
    throw std::invalid_argument("unknown strategy '" + text + "' (expected highpi, random or lowpi)");
}

namespace {

std::size_t round_count(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

}  // namespace

UserPartition partition_users(const InteractionLog& log, const PartitionConfig& config) {
    if (!(config.eval_fraction >= 0.0 && config.eval_fraction <= 1.0)) {
        throw std::invalid_argument("eval_fraction must lie in [0, 1]");
    }
    const std::size_t min_length = std::max<std::size_t>(config.min_length, 2);
    std::vector<UserIndex> eligible;
    for (const auto& seq : log.sequences()) {
        if (seq.length() >= min_length) eligible.push_back(seq.user_index);
    }
    Rng rng(derive_seed(config.seed, {3}));
    rng.shuffle(eligible);
    const std::size_t n_eval = round_count(config.eval_fraction, eligible.size());
    UserPartition part;
    part.eval_users.assign(eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(n_eval));
    part.candidate_users.assign(eligible.begin() + static_cast<std::ptrdiff_t>(n_eval), eligible.end());
    std::sort(part.eval_users.begin(), part.eval_users.end());
    std::sort(part.candidate_users.begin(), part.candidate_users.end());
    return part;
}

SelectionPlan build_plan(const UserPartition& partition, const std::map<UserIndex, double>& scores,
                         double budget_fraction, Strategy strategy, std::uint64_t seed) {
    if (!(budget_fraction >= 0.0 && budget_fraction <= 1.0)) {
        throw std::invalid_argument("budget fraction must lie in [0, 1]");
    }
    SelectionPlan plan;
    plan.eval_users = partition.eval_users;
    plan.candidate_users = partition.candidate_users;
    plan.budget_fraction = budget_fraction;
    plan.strategy = strategy;
    plan.seed = seed;

    const auto& pool = plan.candidate_users;
    const std::size_t k = round_count(budget_fraction, pool.size());
    if (k > pool.size()) throw std::invalid_argument("budget exceeds the candidate pool");

    switch (strategy) {
        case Strategy::random: {
            Rng rng(derive_seed(seed, {4}));
            for (auto pos : rng.sample_without_replacement<std::size_t>(pool.size(), k)) {
                plan.selected.push_back(pool[pos]);
            }
            break;
        }
        case Strategy::high_pi:
        case Strategy::low_pi: {
            std::vector<std::pair<double, UserIndex>> ranked;
            ranked.reserve(pool.size());
            for (UserIndex u : pool) {
                const auto it = scores.find(u);
                if (it == scores.end()) {
                    throw std::invalid_argument("no score for candidate user " + std::to_string(u));
                }
                ranked.emplace_back(it->second, u);
            }
            if (strategy == Strategy::high_pi) {
                std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
                    return a.first != b.first ? a.first > b.first : a.second < b.second;
                });
            } else {
                std::sort(ranked.begin(), ranked.end());
            }
            for (std::size_t i = 0; i < k; ++i) plan.selected.push_back(ranked[i].second);
            break;
        }
    }
    std::sort(plan.selected.begin(), plan.selected.end());
    return plan;
}

MaterializedSplit materialize(const SelectionPlan& plan, const InteractionLog& log) {
    MaterializedSplit split;
    std::vector<UserSequence> train;
    auto append = [&](const UserSequence& src, std::size_t length) {
        UserSequence seq;
        seq.user_index = static_cast<UserIndex>(train.size());
        seq.user_id = src.user_id;
        seq.items.assign(src.items.begin(), src.items.begin() + static_cast<std::ptrdiff_t>(length));
        if (!src.timestamps.empty()) {
            seq.timestamps.assign(src.timestamps.begin(),
                                  src.timestamps.begin() + static_cast<std::ptrdiff_t>(length));
        }
        train.push_back(std::move(seq));
    };
    for (UserIndex u : plan.eval_users) {
        const auto& seq = log.user(u);
        if (seq.length() < 2) throw std::invalid_argument("eval user " + seq.user_id + " is shorter than 2");
        const std::size_t last = seq.length() - 1;
        append(seq, last);
        split.test.push_back({u, seq.user_id, last, seq.items[last],
                              seq.timestamps.empty() ? static_cast<std::int64_t>(last) : seq.timestamps[last]});
    }
    for (UserIndex u : plan.selected) append(log.user(u), log.user(u).length());

    std::vector<std::uint64_t> counts(log.num_items(), 0);
    for (const auto& seq : train) {
        for (ItemIndex i : seq.items) ++counts[i];
    }
    split.train = InteractionLog(ItemVocabulary::from_arrays(log.vocabulary().ids(), std::move(counts)),
                                 std::move(train));
    return split;
}

void write_split(const MaterializedSplit& split, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_interactions_csv(split.train, dir / "train.csv");
    const auto path = dir / "test.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << "user_id,item_id,timestamp\n";
    for (const auto& inst : split.test) {
        out << csv::escape(inst.user_id) << ',' << csv::escape(split.train.vocabulary().id_of(inst.target)) << ','
            << inst.timestamp << '\n';
    }
}

}  // namespace predlim
