#include "predlim/log_io.hpp"

#include "predlim/csv.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace predlim {

using nlohmann::json;

std::string log_to_json(const InteractionLog& log) {
    json users = json::array();
    for (const auto& seq : log.sequences()) {
        users.push_back({{"user_index", seq.user_index},
                         {"user_id", seq.user_id},
                         {"items", seq.items},
                         {"timestamps", seq.timestamps}});
    }
    const auto& stats = log.stats();
    json doc = {
        {"format", "predlim-log"},
        {"version", 1},
        {"vocabulary", {{"items", log.vocabulary().ids()}, {"counts", log.vocabulary().counts()}}},
        {"users", std::move(users)},
        {"stats",
         {{"num_users", stats.num_users},
          {"num_items", stats.num_items},
          {"num_interactions", stats.num_interactions},
          {"avg_length", stats.avg_length}}},
    };
    return doc.dump() + "\n";
}

InteractionLog log_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("log JSON: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "predlim-log") {
            throw DataError("log JSON: unexpected format tag");
        }
        auto vocab = ItemVocabulary::from_arrays(
            doc.at("vocabulary").at("items").get<std::vector<std::string>>(),
            doc.at("vocabulary").at("counts").get<std::vector<std::uint64_t>>());
        std::vector<UserSequence> sequences;
        for (const auto& u : doc.at("users")) {
            UserSequence seq;
            seq.user_index = u.at("user_index").get<UserIndex>();
            seq.user_id = u.at("user_id").get<std::string>();
            seq.items = u.at("items").get<std::vector<ItemIndex>>();
            if (u.contains("timestamps")) {
                seq.timestamps = u.at("timestamps").get<std::vector<std::int64_t>>();
            }
            sequences.push_back(std::move(seq));
        }
        InteractionLog log(std::move(vocab), std::move(sequences));
        if (doc.contains("stats")) {
            const auto& s = doc.at("stats");
            if (s.at("num_users").get<std::size_t>() != log.stats().num_users ||
                s.at("num_items").get<std::size_t>() != log.stats().num_items ||
                s.at("num_interactions").get<std::size_t>() != log.stats().num_interactions) {
                throw DataError("log JSON: stored stats do not match sequences");
            }
        }
        return log;
    } catch (const json::exception& e) {
        throw DataError(std::string("log JSON: ") + e.what());
    }
}

void save_log(const InteractionLog& log, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << log_to_json(log);
}

InteractionLog load_log(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return log_from_json(buf.str());
}

void write_interactions_csv(const InteractionLog& log, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << "user_id,item_id,timestamp\n";
    for (const auto& seq : log.sequences()) {
        for (std::size_t t = 0; t < seq.items.size(); ++t) {
            const auto ts = seq.timestamps.empty() ? static_cast<std::int64_t>(t) : seq.timestamps[t];
            out << csv::escape(seq.user_id) << ',' << csv::escape(log.vocabulary().id_of(seq.items[t]))
                << ',' << ts << '\n';
        }
    }
}

}  // namespace predlim
