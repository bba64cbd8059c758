#pragma once

#include "predlim/pipeline.hpp"
#include "predlim/synth.hpp"

#include <map>
#include <string>
#include <vector>

namespace predlim {

struct SweepRow {
    double grid_value = 0.0;
    Method method = Method::epl;
    double mean = 0.0;
    double std = 0.0;
    std::size_t rep_count = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// Difficulty sweeps only: RMSE of per-target means against the targets.
    std::map<Method, double> rmse;
};

struct DifficultySweepConfig {
    /// Mechanism, n, users, length, seed and the non-noise parameters.
    GeneratorConfig base;
    std::vector<double> targets = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<Method> methods = {Method::epl, Method::fano, Method::fano_nr, Method::perm};
    std::size_t reps = 10;
    EstimatorSpec estimator;
    FanoutScope nr_scope = FanoutScope::per_user;
};

struct NSweepConfig {
    /// Context-switch parameters; n and eps are overwritten per grid point.
    GeneratorConfig base;
    std::vector<std::size_t> n_grid = {100, 316, 1000, 3162, 10000, 31623, 100000};
    double target_hit1 = 0.10;
    std::vector<Method> methods = {Method::epl, Method::fano, Method::fano_nr, Method::perm};
    std::size_t reps = 10;
    EstimatorSpec estimator;
    FanoutScope nr_scope = FanoutScope::per_user;
};

/// For each target and rep: invert the noise, generate, score users and average them.
SweepResult run_difficulty_sweep(const DifficultySweepConfig& config);

/// Context-switch sweep over n with the noise re-inverted to hold target_hit1.
SweepResult run_n_sweep(const NSweepConfig& config);

/// CSV with columns grid_value,method,mean,std,rep_count.
std::string sweep_to_csv(const SweepResult& result);

/// Mean of one method's column, in grid order.
std::vector<double> sweep_means(const SweepResult& result, Method method);

}  // namespace predlim
