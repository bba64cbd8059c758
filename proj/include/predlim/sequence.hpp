#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace predlim {

using ItemIndex = std::uint32_t;
using UserIndex = std::uint32_t;

/// Thrown for malformed input data (bad rows, empty logs, inconsistent files).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InteractionRecord {
    std::string user_id;
    std::string item_id;
    std::int64_t timestamp = 0;
};

/// Dense item encoding. Indices follow first appearance in the timestamp-sorted log.
class ItemVocabulary {
public:
    /// Returns the existing index or assigns the next free one.
    ItemIndex intern(const std::string& item_id);

    std::optional<ItemIndex> find(const std::string& item_id) const;
    const std::string& id_of(ItemIndex index) const { return reverse_.at(index); }

    std::size_t size() const { return reverse_.size(); }
    const std::vector<std::string>& ids() const { return reverse_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }
    std::uint64_t total_count() const;

    void add_count(ItemIndex index, std::uint64_t n = 1) { counts_.at(index) += n; }

    /// Rebuilds a vocabulary from persisted arrays. Throws DataError on duplicate ids.
    static ItemVocabulary from_arrays(std::vector<std::string> ids,
                                      std::vector<std::uint64_t> counts);

private:
    std::unordered_map<std::string, ItemIndex> forward_;
    std::vector<std::string> reverse_;
    std::vector<std::uint64_t> counts_;
};

struct UserSequence {
    UserIndex user_index = 0;
    std::string user_id;
    std::vector<ItemIndex> items;
    /// Parallel to items; empty for sequences that never had timestamps.
    std::vector<std::int64_t> timestamps;

    std::size_t length() const { return items.size(); }
};

struct LogStats {
    std::size_t num_users = 0;
    std::size_t num_items = 0;
    std::size_t num_interactions = 0;
    double avg_length = 0.0;

    bool operator==(const LogStats&) const = default;
};

/// Immutable after construction; safe to share between concurrent readers.
class InteractionLog {
public:
    InteractionLog() = default;
    InteractionLog(ItemVocabulary vocabulary, std::vector<UserSequence> sequences);

    const ItemVocabulary& vocabulary() const { return vocabulary_; }
    const std::vector<UserSequence>& sequences() const { return sequences_; }
    const UserSequence& user(UserIndex index) const { return sequences_.at(index); }
    const LogStats& stats() const { return stats_; }
    std::size_t num_items() const { return vocabulary_.size(); }

    static LogStats compute_stats(const std::vector<UserSequence>& sequences,
                                  std::size_t num_items);

private:
    ItemVocabulary vocabulary_;
    std::vector<UserSequence> sequences_;
    LogStats stats_;
};

struct IngestConfig {
    std::size_t min_length = 1;
    std::optional<std::size_t> max_events;
    /// Drop a row when the same user's previous event has identical item and timestamp.
    bool dedup = false;
};

/// Reads `user_id,item_id,timestamp` rows. Columns are located by header name;
/// extra columns are ignored. Throws DataError naming the offending line.
std::vector<InteractionRecord> read_interactions_csv(std::istream& in);
std::vector<InteractionRecord> read_interactions_csv(const std::filesystem::path& path);

/// Sorts by (timestamp, input position), truncates, groups by user, filters and encodes.
InteractionLog build_log(const std::vector<InteractionRecord>& records, const IngestConfig& config);

InteractionLog ingest_csv(const std::filesystem::path& path, const IngestConfig& config);

enum class FanoutScope { per_user, pooled };

struct Fanout {
    std::size_t max_fanout = 0;
    /// Distinct successor count per observed current state.
    std::map<ItemIndex, std::size_t> per_state;
};

/// Successor fan-out of a single sequence. Throws DataError if it has no transitions.
Fanout sequence_fanout(std::span<const ItemIndex> items);

/// N_r = max_x |N(x)|. per_user takes the maximum of per-sequence values; pooled
/// unions transitions across all sequences first.
std::size_t transition_fanout(std::span<const UserSequence> sequences, FanoutScope scope);

}  // namespace predlim
