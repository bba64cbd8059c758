#include "predlim/eval.hpp"

#include "predlim/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace predlim {

Weighting parse_weighting(const std::string& text) {
    if (text == "events") return Weighting::events;
    if (text == "uniform") return Weighting::uniform;
    throw std::invalid_argument("unknown weighting '" + text + "'");
}

std::vector<double> user_weights(const InteractionLog& log, Weighting weighting) {
    std::vector<double> w;
    w.reserve(log.sequences().size());
    for (const auto& seq : log.sequences()) {
        w.push_back(weighting == Weighting::uniform ? 1.0 : static_cast<double>(seq.length()) - 1.0);
    }
    return w;
}

double aggregate_dataset(std::span<const double> scores, std::span<const double> weights) {
    if (scores.empty()) throw std::invalid_argument("aggregate: no user scores");
    if (scores.size() != weights.size()) throw std::invalid_argument("aggregate: scores and weights differ in length");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (weights[i] < 0.0) throw std::invalid_argument("aggregate: negative weight");
        num += weights[i] * scores[i];
        den += weights[i];
    }
    if (!(den > 0.0)) throw std::invalid_argument("aggregate: total weight is zero");
    return num / den;
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("spearman: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("spearman: need at least 2 pairs");
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) throw std::domain_error("spearman: zero rank variance");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double rmse(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("rmse: length mismatch");
    if (a.empty()) throw std::invalid_argument("rmse: empty input");
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(ss / static_cast<double>(a.size()));
}

namespace {

double parse_double(const std::string& text, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line) + ": '" + text + "' is not a number");
    }
}

std::vector<std::string> read_header(std::istream& in, std::size_t& line_no, const char* what) {
    std::string line;
    if (!csv::next_line(in, line, line_no)) throw DataError(std::string(what) + ": empty file");
    return csv::split_line(line);
}

std::size_t col(const std::vector<std::string>& header, const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("header is missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return in;
}

}  // namespace

std::vector<ReferenceRow> read_reference(std::istream& in) {
    std::size_t line_no = 0;
    const auto header = read_header(in, line_no, "reference");
    const auto c_ds = col(header, "dataset"), c_model = col(header, "best_model");
    const auto c_h1 = col(header, "hit1"), c_h20 = col(header, "hit20");
    std::vector<ReferenceRow> rows;
    std::string line;
    while (csv::next_line(in, line, line_no)) {
        const auto f = csv::split_line(line);
        if (f.size() < header.size()) throw DataError("line " + std::to_string(line_no) + ": too few fields");
        rows.push_back({f[c_ds], f[c_model], parse_double(f[c_h1], line_no), parse_double(f[c_h20], line_no)});
    }
    return rows;
}

std::vector<ReferenceRow> read_reference(const std::filesystem::path& path) {
    auto in = open(path);
    return read_reference(in);
}

std::vector<DatasetScore> read_dataset_scores(std::istream& in) {
    std::size_t line_no = 0;
    const auto header = read_header(in, line_no, "dataset scores");
    const auto c_ds = col(header, "dataset_id"), c_m = col(header, "method"), c_p = col(header, "predictability");
    std::vector<DatasetScore> rows;
    std::string line;
    while (csv::next_line(in, line, line_no)) {
        const auto f = csv::split_line(line);
        if (f.size() < header.size()) throw DataError("line " + std::to_string(line_no) + ": too few fields");
        DatasetScore s;
        s.dataset_id = f[c_ds];
        s.method = parse_method(f[c_m]);
        s.predictability = parse_double(f[c_p], line_no);
        rows.push_back(std::move(s));
    }
    return rows;
}

std::vector<DatasetScore> read_dataset_scores(const std::filesystem::path& path) {
    auto in = open(path);
    return read_dataset_scores(in);
}

std::vector<ConsistencyReport> consistency_report(std::span<const DatasetScore> scores,
                                                  std::span<const ReferenceRow> reference) {
    std::vector<Method> methods;
    for (const auto& s : scores) {
        if (std::find(methods.begin(), methods.end(), s.method) == methods.end()) methods.push_back(s.method);
    }
    std::vector<ConsistencyReport> reports;
    for (Method method : methods) {
        ConsistencyReport report;
        report.method = method;
        std::vector<double> acc, pred;
        for (const auto& s : scores) {
            if (s.method != method) continue;
            auto ref = std::find_if(reference.begin(), reference.end(),
                                    [&](const ReferenceRow& r) { return r.dataset == s.dataset_id; });
            if (ref == reference.end()) {
                report.warnings.push_back("no reference accuracy for dataset '" + s.dataset_id + "'; excluded");
                continue;
            }
            report.pairs.push_back({s.dataset_id, ref->hit20, s.predictability, 0.0, 0.0});
            acc.push_back(ref->hit20);
            pred.push_back(s.predictability);
        }
        if (report.pairs.size() < 2) {
            report.warnings.push_back("fewer than 2 datasets with references; statistics undefined");
            report.spearman_rho = std::nan("");
            report.rmse = report.pairs.empty() ? std::nan("") : rmse(acc, pred);
        } else {
            const auto ra = average_ranks(acc);
            const auto rp = average_ranks(pred);
            for (std::size_t i = 0; i < report.pairs.size(); ++i) {
                report.pairs[i].rank_accuracy = ra[i];
                report.pairs[i].rank_predictability = rp[i];
            }
            try {
                report.spearman_rho = spearman(acc, pred);
            } catch (const std::domain_error&) {
                report.spearman_rho = std::nan("");
                report.warnings.push_back("zero rank variance; spearman undefined");
            }
            report.rmse = rmse(acc, pred);
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

std::string consistency_to_json(std::span<const ConsistencyReport> reports) {
    using nlohmann::json;
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json out = json::array();
    for (const auto& r : reports) {
        json pairs = json::array();
        for (const auto& p : r.pairs) {
            pairs.push_back({{"dataset_id", p.dataset_id},
                             {"reference_accuracy", p.accuracy},
                             {"predictability", p.predictability},
                             {"rank_reference", p.rank_accuracy},
                             {"rank_predictability", p.rank_predictability}});
        }
        out.push_back({{"method", to_string(r.method)},
                       {"spearman_rho", num(r.spearman_rho)},
                       {"rmse", num(r.rmse)},
                       {"pairs", std::move(pairs)},
                       {"warnings", r.warnings}});
    }
    return json{{"reports", std::move(out)}}.dump(2) + "\n";
}

}  // namespace predlim
