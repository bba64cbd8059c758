#include "predlim/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace predlim {

std::string to_string(CohortDimension dim) {
    switch (dim) {
        case CohortDimension::novelty: return "novelty";
        case CohortDimension::longtail: return "longtail";
        case CohortDimension::activity: return "activity";
    }
    return "?";
}

CohortDimension parse_dimension(const std::string& text) {
    if (text == "novelty") return CohortDimension::novelty;
    if (text == "longtail" || text == "long-tail") return CohortDimension::longtail;
    if (text == "activity") return CohortDimension::activity;
    throw std::invalid_argument("unknown cohort dimension '" + text + "'");
}

std::vector<bool> longtail_items(const ItemVocabulary& vocabulary, double head_mass) {
    if (!(head_mass > 0.0 && head_mass <= 1.0)) {
        throw std::invalid_argument("head mass must lie in (0, 1]");
    }
    const auto& counts = vocabulary.counts();
    std::vector<ItemIndex> order(counts.size());
    std::iota(order.begin(), order.end(), ItemIndex{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](ItemIndex a, ItemIndex b) { return counts[a] > counts[b]; });
    const double total = static_cast<double>(vocabulary.total_count());
    std::vector<bool> tail(counts.size(), true);
    std::uint64_t covered = 0;
    for (ItemIndex item : order) {
        if (static_cast<double>(covered) >= head_mass * total) break;
        tail[item] = false;
        covered += counts[item];
    }
    return tail;
}

std::vector<UserFeature> compute_features(const InteractionLog& log, double head_mass) {
    const auto& vocab = log.vocabulary();
    const double total = static_cast<double>(vocab.total_count());
    const auto tail = longtail_items(vocab, head_mass);
    std::vector<double> surprisal(vocab.size(), 0.0);
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        const auto c = vocab.counts()[i];
        surprisal[i] = c == 0 ? 0.0 : -std::log(static_cast<double>(c) / total);
    }

    std::vector<UserFeature> features;
    features.reserve(log.sequences().size());
    for (const auto& seq : log.sequences()) {
        UserFeature f;
        f.user_index = seq.user_index;
        f.activity = seq.length();
        double novelty = 0.0;
        std::size_t in_tail = 0;
        for (ItemIndex item : seq.items) {
            novelty += surprisal[item];
            in_tail += tail[item] ? 1 : 0;
        }
        f.novelty = std::max(0.0, novelty / static_cast<double>(seq.length()));
        f.longtail_exposure = static_cast<double>(in_tail) / static_cast<double>(seq.length());
        features.push_back(f);
    }
    return features;
}

GroupStats group_stats(std::span<const double> values) {
    GroupStats s;
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (n - 1.0));
        s.stderr_mean = s.std / std::sqrt(n);
    }
    return s;
}

namespace {

double feature_value(const UserFeature& f, CohortDimension dim) {
    switch (dim) {
        case CohortDimension::novelty: return f.novelty;
        case CohortDimension::longtail: return f.longtail_exposure;
        case CohortDimension::activity: return static_cast<double>(f.activity);
    }
    return 0.0;
}

void finish(CohortGroup& g) {
    const auto s = group_stats(g.per_user_scores);
    g.mean = s.mean;
    g.std = s.std;
    g.stderr_mean = s.stderr_mean;
}

}  // namespace

CohortReport split_and_aggregate(std::span<const UserFeature> features, std::span<const double> scores,
                                 CohortDimension dimension) {
    if (features.size() != scores.size()) {
        throw std::invalid_argument("cohort: features and scores cover different user sets");
    }
    if (features.size() < 2) throw std::invalid_argument("cohort: need at least 2 users");

    std::vector<std::size_t> order(features.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const bool descending = dimension == CohortDimension::activity;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double fa = feature_value(features[a], dimension);
        const double fb = feature_value(features[b], dimension);
        if (fa != fb) return descending ? fa > fb : fa < fb;
        return features[a].user_index < features[b].user_index;
    });

    CohortReport report;
    report.dimension = dimension;
    report.q1.label = "Q1";
    report.q2.label = "Q2";
    const std::size_t q1_size = (order.size() + 1) / 2;
    for (std::size_t k = 0; k < order.size(); ++k) {
        auto& group = k < q1_size ? report.q1 : report.q2;
        group.users.push_back(features[order[k]].user_index);
        group.per_user_scores.push_back(scores[order[k]]);
    }
    finish(report.q1);
    finish(report.q2);
    return report;
}

std::string cohort_report_to_json(const CohortReport& report) {
    auto group_json = [](const CohortGroup& g) {
        return nlohmann::json{{"label", g.label},
                              {"user_count", g.user_count()},
                              {"mean_predictability", g.mean},
                              {"std", g.std},
                              {"stderr", g.stderr_mean},
                              {"users", g.users},
                              {"per_user_scores", g.per_user_scores}};
    };
    nlohmann::json doc = {{"dimension", to_string(report.dimension)},
                          {"groups", {group_json(report.q1), group_json(report.q2)}}};
    return doc.dump(2) + "\n";
}

}  // namespace predlim
