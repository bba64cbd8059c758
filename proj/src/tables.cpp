#include "predlim/tables.hpp"

#include "predlim/csv.hpp"

#include <charconv>
#include <fstream>

namespace predlim {

namespace {

std::map<std::string, std::size_t> header_index(const std::vector<std::string>& header,
                                                std::initializer_list<const char*> required,
                                                const char* what) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;
    for (const char* name : required) {
        if (!index.count(name)) throw DataError(std::string(what) + ": missing column '" + name + "'");
    }
    return index;
}

double parse_double(const std::string& text, std::size_t line) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw DataError("line " + std::to_string(line) + ": bad number '" + text + "'");
    }
    return v;
}

UserIndex parse_user(const std::string& text, std::size_t line) {
    UserIndex v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw DataError("line " + std::to_string(line) + ": bad user_index '" + text + "'");
    }
    return v;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return in;
}

}  // namespace

void write_entropy_csv(std::ostream& out, const std::vector<EntropyRow>& rows) {
    out << "user_index,estimator,value,unit,flags\n";
    for (const auto& row : rows) {
        const auto& e = row.estimate;
        std::string flags;
        for (const auto& [key, value] : e.params) {
            if (!flags.empty()) flags += ';';
            flags += key + '=' + csv::format_double(value);
        }
        if (e.saturated) flags += flags.empty() ? "saturated" : ";saturated";
        out << row.user_index << ',' << to_string(e.estimator) << ',' << csv::format_double(e.value) << ','
            << to_string(e.unit) << ',' << csv::escape(flags) << '\n';
    }
}

std::vector<EntropyRow> read_entropy_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!csv::next_line(in, line, line_no)) throw DataError("entropy table: empty input");
    const auto col = header_index(csv::split_line(line), {"user_index", "estimator", "value", "unit"},
                                  "entropy table");
    std::vector<EntropyRow> rows;
    while (csv::next_line(in, line, line_no)) {
        const auto f = csv::split_line(line);
        auto field = [&](const char* name) -> const std::string& {
            const std::size_t i = col.at(name);
            if (i >= f.size()) throw DataError("line " + std::to_string(line_no) + ": too few fields");
            return f[i];
        };
        EntropyRow row;
        row.user_index = parse_user(field("user_index"), line_no);
        row.estimate.estimator = parse_estimator(field("estimator"));
        row.estimate.value = parse_double(field("value"), line_no);
        row.estimate.unit = parse_entropy_unit(field("unit"));
        if (const auto it = col.find("flags"); it != col.end() && it->second < f.size()) {
            std::string_view rest = f[it->second];
            while (!rest.empty()) {
                const auto cut = rest.find(';');
                const std::string token(rest.substr(0, cut));
                rest = cut == std::string_view::npos ? std::string_view{} : rest.substr(cut + 1);
                if (token == "saturated") {
                    row.estimate.saturated = true;
                } else if (const auto eq = token.find('='); eq != std::string::npos) {
                    row.estimate.params[token.substr(0, eq)] = parse_double(token.substr(eq + 1), line_no);
                }
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<EntropyRow> read_entropy_csv(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return read_entropy_csv(in);
}

void write_scores_csv(std::ostream& out, const std::vector<ScoreRow>& rows) {
    out << "user_index,method,value,effective_size,n_used\n";
    for (const auto& row : rows) {
        const auto& s = row.score;
        out << row.user_index << ',' << to_string(s.method) << ',' << csv::format_double(s.value) << ',';
        if (s.effective_size) out << csv::format_double(*s.effective_size);
        out << ',';
        if (s.n) out << *s.n;
        out << '\n';
    }
}

std::map<Method, std::map<UserIndex, double>> read_scores_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!csv::next_line(in, line, line_no)) throw DataError("score table: empty input");
    const auto col = header_index(csv::split_line(line), {"user_index", "method", "value"}, "score table");
    std::map<Method, std::map<UserIndex, double>> out;
    while (csv::next_line(in, line, line_no)) {
        const auto f = csv::split_line(line);
        const std::size_t need = std::max({col.at("user_index"), col.at("method"), col.at("value")});
        if (need >= f.size()) throw DataError("line " + std::to_string(line_no) + ": too few fields");
        const auto user = parse_user(f[col.at("user_index")], line_no);
        const auto method = parse_method(f[col.at("method")]);
        if (!out[method].emplace(user, parse_double(f[col.at("value")], line_no)).second) {
            throw DataError("line " + std::to_string(line_no) + ": duplicate score for user " +
                            std::to_string(user));
        }
    }
    return out;
}

std::map<Method, std::map<UserIndex, double>> read_scores_csv(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return read_scores_csv(in);
}

}  // namespace predlim
