#pragma once

#include "predlim/predictability.hpp"
#include "predlim/sequence.hpp"

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace predlim {

enum class Weighting {
    events,   // w_u = T_u - 1, the number of next-step predictions
    uniform,  // w_u = 1
};

Weighting parse_weighting(const std::string& text);
std::vector<double> user_weights(const InteractionLog& log, Weighting weighting);

/// sum(w * s) / sum(w). Throws on empty input, size mismatch or non-positive total weight.
double aggregate_dataset(std::span<const double> scores, std::span<const double> weights);

/// 1-based ranks, ties receive the average of the positions they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks. Throws when either side has no rank variance.
double spearman(std::span<const double> a, std::span<const double> b);

double rmse(std::span<const double> a, std::span<const double> b);

/// Best-model accuracy per dataset (dataset,best_model,hit1,hit20).
struct ReferenceRow {
    std::string dataset;
    std::string best_model;
    double hit1 = 0.0;
    double hit20 = 0.0;
};

std::vector<ReferenceRow> read_reference(std::istream& in);
std::vector<ReferenceRow> read_reference(const std::filesystem::path& path);

struct DatasetScore {
    std::string dataset_id;
    Method method = Method::epl;
    double predictability = 0.0;
    std::optional<double> reference_accuracy;
};

/// dataset_id,method,predictability rows.
std::vector<DatasetScore> read_dataset_scores(std::istream& in);
std::vector<DatasetScore> read_dataset_scores(const std::filesystem::path& path);

struct ConsistencyPair {
    std::string dataset_id;
    double accuracy = 0.0;
    double predictability = 0.0;
    double rank_accuracy = 0.0;
    double rank_predictability = 0.0;
};

struct ConsistencyReport {
    Method method = Method::epl;
    double spearman_rho = 0.0;
    double rmse = 0.0;
    std::vector<ConsistencyPair> pairs;
    std::vector<std::string> warnings;
};

/// Joins P_d with the Hit@20 column of `reference` and scores agreement per method.
/// Datasets without a reference row are excluded and listed in `warnings`.
std::vector<ConsistencyReport> consistency_report(std::span<const DatasetScore> scores,
                                                  std::span<const ReferenceRow> reference);

std::string consistency_to_json(std::span<const ConsistencyReport> reports);

}  // namespace predlim
