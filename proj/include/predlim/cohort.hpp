#pragma once

#include "predlim/sequence.hpp"

#include <span>
#include <string>
#include <vector>

namespace predlim {

struct UserFeature {
    UserIndex user_index = 0;
    /// Mean of -ln pop(i) over the user's events.
    double novelty = 0.0;
    /// Fraction of the user's events on long-tail items.
    double longtail_exposure = 0.0;
    std::size_t activity = 0;
};

enum class CohortDimension { novelty, longtail, activity };

std::string to_string(CohortDimension dim);
CohortDimension parse_dimension(const std::string& text);

/// Items outside the smallest head set whose interactions reach `head_mass` of the
/// total, items ranked by descending count then ascending index. Returns a per-item mask.
std::vector<bool> longtail_items(const ItemVocabulary& vocabulary, double head_mass = 0.8);

std::vector<UserFeature> compute_features(const InteractionLog& log, double head_mass = 0.8);

struct CohortGroup {
    std::string label;
    std::vector<UserIndex> users;
    std::vector<double> per_user_scores;
    double mean = 0.0;
    /// Sample standard deviation (n - 1); 0 for singleton groups.
    double std = 0.0;
    double stderr_mean = 0.0;

    std::size_t user_count() const { return users.size(); }
};

struct CohortReport {
    CohortDimension dimension = CohortDimension::novelty;
    CohortGroup q1;
    CohortGroup q2;
};

struct GroupStats {
    double mean = 0.0;
    double std = 0.0;
    double stderr_mean = 0.0;
};
GroupStats group_stats(std::span<const double> values);

/// Median split. Users are ordered by feature (ascending for novelty and long-tail,
/// descending for activity), ties by user_index; Q1 takes the first ceil(n/2).
/// `scores[k]` belongs to `features[k]`.
CohortReport split_and_aggregate(std::span<const UserFeature> features, std::span<const double> scores,
                                 CohortDimension dimension);

std::string cohort_report_to_json(const CohortReport& report);

}  // namespace predlim
