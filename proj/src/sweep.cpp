#include "predlim/sweep.hpp"

#include "predlim/csv.hpp"
#include "predlim/eval.hpp"
#include "predlim/rng.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace predlim {

namespace {

struct PointStats {
    double mean = 0.0;
    double std = 0.0;
};

PointStats mean_std(const std::vector<double>& values) {
    PointStats s;
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

// Runs `reps` corpora for one grid point and appends one row per method.
void run_point(const GeneratorConfig& config, std::size_t grid_index, double grid_value,
               std::size_t reps, std::span<const Method> methods, const EstimatorSpec& estimator,
               FanoutScope nr_scope, std::vector<SweepRow>& rows) {
    if (reps == 0) throw std::invalid_argument("sweep: reps must be >= 1");
    std::map<Method, std::vector<double>> per_rep;
    ScoringOptions options;
    options.estimator = estimator;
    options.global_n = config.n;
    options.nr_scope = nr_scope;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        GeneratorConfig rep_config = config;
        rep_config.seed = derive_seed(config.seed, {grid_index, rep});
        const auto corpus = generate(rep_config, /*keep_trace=*/false);
        const auto scores = score_users(corpus.sequences, methods, options);
        for (Method m : methods) {
            const auto& v = scores.at(m);
            per_rep[m].push_back(std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()));
        }
    }
    for (Method m : methods) {
        const auto s = mean_std(per_rep[m]);
        rows.push_back({grid_value, m, s.mean, s.std, reps});
    }
}

}  // namespace

SweepResult run_difficulty_sweep(const DifficultySweepConfig& config) {
    config.base.validate();
    SweepResult result;
    std::vector<double> oracle_values;
    for (std::size_t g = 0; g < config.targets.size(); ++g) {
        const double target = config.targets[g];
        const auto point = config.base.with_noise(invert_noise(config.base, target));
        oracle_values.push_back(oracle_hit1(point));
        run_point(point, g, target, config.reps, config.methods, config.estimator, config.nr_scope, result.rows);
    }
    for (Method m : config.methods) result.rmse[m] = rmse(sweep_means(result, m), oracle_values);
    return result;
}

SweepResult run_n_sweep(const NSweepConfig& config) {
    if (config.base.mechanism() != Mechanism::context_switch) {
        throw std::invalid_argument("n-sweep runs the context-switch mechanism");
    }
    SweepResult result;
    for (std::size_t g = 0; g < config.n_grid.size(); ++g) {
        GeneratorConfig point = config.base;
        point.n = config.n_grid[g];
        point = point.with_noise(invert_noise(point, config.target_hit1));
        run_point(point, g, static_cast<double>(point.n), config.reps, config.methods, config.estimator,
                  config.nr_scope, result.rows);
    }
    return result;
}

std::vector<double> sweep_means(const SweepResult& result, Method method) {
    std::vector<double> out;
    for (const auto& row : result.rows) {
        if (row.method == method) out.push_back(row.mean);
    }
    return out;
}

std::string sweep_to_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "grid_value,method,mean,std,rep_count\n";
    for (const auto& row : result.rows) {
        out << csv::format_double(row.grid_value) << ',' << to_string(row.method) << ','
            << csv::format_double(row.mean) << ',' << csv::format_double(row.std) << ',' << row.rep_count
            << '\n';
    }
    return out.str();
}

}  // namespace predlim
