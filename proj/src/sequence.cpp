#include "predlim/sequence.hpp"

#include "predlim/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <unordered_set>

namespace predlim {

ItemIndex ItemVocabulary::intern(const std::string& item_id) {
    auto [it, inserted] = forward_.try_emplace(item_id, static_cast<ItemIndex>(reverse_.size()));
    if (inserted) {
        reverse_.push_back(item_id);
        counts_.push_back(0);
    }
    return it->second;
}

std::optional<ItemIndex> ItemVocabulary::find(const std::string& item_id) const {
    auto it = forward_.find(item_id);
    if (it == forward_.end()) return std::nullopt;
    return it->second;
}

std::uint64_t ItemVocabulary::total_count() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

ItemVocabulary ItemVocabulary::from_arrays(std::vector<std::string> ids,
                                           std::vector<std::uint64_t> counts) {
    if (ids.size() != counts.size()) {
        throw DataError("vocabulary: ids and counts differ in length");
    }
    ItemVocabulary vocab;
    vocab.reverse_ = std::move(ids);
    vocab.counts_ = std::move(counts);
    vocab.forward_.reserve(vocab.reverse_.size());
    for (std::size_t i = 0; i < vocab.reverse_.size(); ++i) {
        if (!vocab.forward_.emplace(vocab.reverse_[i], static_cast<ItemIndex>(i)).second) {
            throw DataError("vocabulary: duplicate item id '" + vocab.reverse_[i] + "'");
        }
    }
    return vocab;
}

InteractionLog::InteractionLog(ItemVocabulary vocabulary, std::vector<UserSequence> sequences)
    : vocabulary_(std::move(vocabulary)), sequences_(std::move(sequences)) {
    for (std::size_t u = 0; u < sequences_.size(); ++u) {
        const auto& seq = sequences_[u];
        if (seq.user_index != u) throw DataError("log: sequences must be ordered by user_index");
        if (seq.items.empty()) throw DataError("log: user '" + seq.user_id + "' has no events");
        if (!seq.timestamps.empty() && seq.timestamps.size() != seq.items.size()) {
            throw DataError("log: timestamps and items differ in length for user '" +
                            seq.user_id + "'");
        }
        for (ItemIndex item : seq.items) {
            if (item >= vocabulary_.size()) throw DataError("log: item index out of range");
        }
    }
    stats_ = compute_stats(sequences_, vocabulary_.size());
}

LogStats InteractionLog::compute_stats(const std::vector<UserSequence>& sequences,
                                       std::size_t num_items) {
    LogStats stats;
    stats.num_users = sequences.size();
    stats.num_items = num_items;
    for (const auto& seq : sequences) stats.num_interactions += seq.length();
    stats.avg_length = stats.num_users == 0 ? 0.0
                                            : static_cast<double>(stats.num_interactions) /
                                                  static_cast<double>(stats.num_users);
    return stats;
}

namespace {

std::int64_t parse_timestamp(const std::string& field, std::size_t line_number) {
    std::int64_t value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && *(last - 1) == ' ') --last;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
        throw DataError("line " + std::to_string(line_number) + ": timestamp '" + field +
                        "' is not an integer");
    }
    return value;
}

std::size_t column_of(const std::vector<std::string>& header, const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("line 1: header is missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

std::vector<InteractionRecord> read_interactions_csv(std::istream& in) {
    std::string line;
    std::size_t line_number = 0;
    if (!csv::next_line(in, line, line_number)) throw DataError("input is empty");
    auto header = csv::split_line(line);
    if (!header.empty() && header.front().rfind("\xEF\xBB\xBF", 0) == 0) {
        header.front().erase(0, 3);
    }
    const std::size_t user_col = column_of(header, "user_id");
    const std::size_t item_col = column_of(header, "item_id");
    const std::size_t time_col = column_of(header, "timestamp");
    const std::size_t needed = std::max({user_col, item_col, time_col}) + 1;

    std::vector<InteractionRecord> records;
    while (csv::next_line(in, line, line_number)) {
        auto fields = csv::split_line(line);
        if (fields.size() < needed) {
            throw DataError("line " + std::to_string(line_number) + ": expected at least " +
                            std::to_string(needed) + " fields, got " +
                            std::to_string(fields.size()));
        }
        InteractionRecord rec;
        rec.user_id = std::move(fields[user_col]);
        rec.item_id = std::move(fields[item_col]);
        if (rec.user_id.empty() || rec.item_id.empty()) {
            throw DataError("line " + std::to_string(line_number) + ": empty user_id or item_id");
        }
        rec.timestamp = parse_timestamp(fields[time_col], line_number);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<InteractionRecord> read_interactions_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return read_interactions_csv(in);
}

InteractionLog build_log(const std::vector<InteractionRecord>& records,
                         const IngestConfig& config) {
    if (config.min_length < 1) throw std::invalid_argument("min_length must be >= 1");

    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return records[a].timestamp < records[b].timestamp;
    });
    if (config.max_events && order.size() > *config.max_events) order.resize(*config.max_events);

    // Group rows per user in timestamp order; users keyed by first appearance.
    std::unordered_map<std::string, std::size_t> user_slot;
    std::vector<std::vector<std::size_t>> rows_by_user;
    std::vector<std::string> user_ids;
    for (std::size_t row : order) {
        const auto& rec = records[row];
        auto [it, inserted] = user_slot.try_emplace(rec.user_id, rows_by_user.size());
        if (inserted) {
            rows_by_user.emplace_back();
            user_ids.push_back(rec.user_id);
        }
        auto& rows = rows_by_user[it->second];
        if (config.dedup && !rows.empty()) {
            const auto& prev = records[rows.back()];
            if (prev.item_id == rec.item_id && prev.timestamp == rec.timestamp) continue;
        }
        rows.push_back(row);
    }

    std::vector<bool> keep(rows_by_user.size());
    std::unordered_set<std::size_t> kept_rows;
    for (std::size_t u = 0; u < rows_by_user.size(); ++u) {
        keep[u] = rows_by_user[u].size() >= config.min_length;
        if (keep[u]) kept_rows.insert(rows_by_user[u].begin(), rows_by_user[u].end());
    }

    // Item indices in first-appearance order over the surviving timestamp-sorted rows.
    ItemVocabulary vocab;
    std::vector<ItemIndex> encoded(records.size(), 0);
    for (std::size_t row : order) {
        if (!kept_rows.count(row)) continue;
        const ItemIndex idx = vocab.intern(records[row].item_id);
        vocab.add_count(idx);
        encoded[row] = idx;
    }

    std::vector<UserSequence> sequences;
    for (std::size_t u = 0; u < rows_by_user.size(); ++u) {
        if (!keep[u]) continue;
        UserSequence seq;
        seq.user_index = static_cast<UserIndex>(sequences.size());
        seq.user_id = user_ids[u];
        seq.items.reserve(rows_by_user[u].size());
        seq.timestamps.reserve(rows_by_user[u].size());
        for (std::size_t row : rows_by_user[u]) {
            seq.items.push_back(encoded[row]);
            seq.timestamps.push_back(records[row].timestamp);
        }
        sequences.push_back(std::move(seq));
    }
    if (sequences.empty()) throw DataError("no users left after filtering");
    return InteractionLog(std::move(vocab), std::move(sequences));
}

InteractionLog ingest_csv(const std::filesystem::path& path, const IngestConfig& config) {
    return build_log(read_interactions_csv(path), config);
}

Fanout sequence_fanout(std::span<const ItemIndex> items) {
    if (items.size() < 2) throw DataError("fan-out needs a sequence with at least one transition");
    std::map<ItemIndex, std::unordered_set<ItemIndex>> successors;
    for (std::size_t t = 0; t + 1 < items.size(); ++t) successors[items[t]].insert(items[t + 1]);
    Fanout out;
    for (const auto& [state, next] : successors) {
        out.per_state.emplace(state, next.size());
        out.max_fanout = std::max(out.max_fanout, next.size());
    }
    return out;
}

std::size_t transition_fanout(std::span<const UserSequence> sequences, FanoutScope scope) {
    if (scope == FanoutScope::per_user) {
        std::size_t best = 0;
        for (const auto& seq : sequences) {
            if (seq.length() < 2) continue;
            best = std::max(best, sequence_fanout(seq.items).max_fanout);
        }
        if (best == 0) throw DataError("no transitions in scope");
        return best;
    }
    std::unordered_map<ItemIndex, std::unordered_set<ItemIndex>> successors;
    for (const auto& seq : sequences) {
        for (std::size_t t = 0; t + 1 < seq.items.size(); ++t) {
            successors[seq.items[t]].insert(seq.items[t + 1]);
        }
    }
    if (successors.empty()) throw DataError("no transitions in scope");
    std::size_t best = 0;
    for (const auto& [state, next] : successors) best = std::max(best, next.size());
    return best;
}

}  // namespace predlim
