#pragma once

#include "predlim/sequence.hpp"

#include <filesystem>
#include <string>

namespace predlim {

/// Log JSON schema (version 1):
///   { "format": "predlim-log", "version": 1,
///     "vocabulary": { "items": [id...], "counts": [n...] },
///     "users": [ { "user_index": u, "user_id": s, "items": [idx...], "timestamps": [t...] } ],
///     "stats": { "num_users", "num_items", "num_interactions", "avg_length" } }
/// Serialization is deterministic: equal logs produce byte-identical text.
std::string log_to_json(const InteractionLog& log);
InteractionLog log_from_json(const std::string& text);

void save_log(const InteractionLog& log, const std::filesystem::path& path);
InteractionLog load_log(const std::filesystem::path& path);

/// Writes the log back out in the ingest CSV schema (user_id,item_id,timestamp).
/// Sequences without timestamps use their position as the timestamp.
void write_interactions_csv(const InteractionLog& log, const std::filesystem::path& path);

}  // namespace predlim
