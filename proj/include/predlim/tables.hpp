#pragma once

#include "predlim/entropy.hpp"
#include "predlim/predictability.hpp"
#include "predlim/sequence.hpp"

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <vector>

namespace predlim {

struct EntropyRow {
    UserIndex user_index = 0;
    EntropyEstimate estimate;
};

/// entropy.csv: user_index,estimator,value,unit,flags. `flags` is a ';'-separated list of
/// estimator parameters (`m=2`, `d=4`, ...) and `saturated` when set.
void write_entropy_csv(std::ostream& out, const std::vector<EntropyRow>& rows);
std::vector<EntropyRow> read_entropy_csv(std::istream& in);
std::vector<EntropyRow> read_entropy_csv(const std::filesystem::path& path);

struct ScoreRow {
    UserIndex user_index = 0;
    PredictabilityScore score;
};

/// scores.csv: user_index,method,value,effective_size,n_used. Unset columns are empty.
void write_scores_csv(std::ostream& out, const std::vector<ScoreRow>& rows);

/// Reads scores.csv into user_index -> value per method.
std::map<Method, std::map<UserIndex, double>> read_scores_csv(std::istream& in);
std::map<Method, std::map<UserIndex, double>> read_scores_csv(const std::filesystem::path& path);

}  // namespace predlim
