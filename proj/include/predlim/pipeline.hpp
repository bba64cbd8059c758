#pragma once

#include "predlim/entropy.hpp"
#include "predlim/predictability.hpp"
#include "predlim/sequence.hpp"

#include <map>
#include <span>
#include <vector>

namespace predlim {

struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::sampen;
    int m = 2;                               // sampen template length
    std::vector<int> perm_dims = {3, 4, 5};  // perm embedding dimensions
    int tau = 1;
};

/// Per-sequence entropy with the chosen estimator. For perm this returns the
/// minimum normalized entropy over the feasible dimensions.
EntropyEstimate estimate_entropy(std::span<const ItemIndex> items, const EstimatorSpec& spec);

struct ScoringOptions {
    EstimatorSpec estimator;
    /// Candidate-set size for global Fano (|I| for real logs, n for synthetic ones).
    std::size_t global_n = 2;
    FanoutScope nr_scope = FanoutScope::per_user;
};

/// Per-user scores for each requested method, aligned with `sequences`.
/// EPL, Fano and Fano-N_r share one entropy estimate per user; perm uses ordinal patterns.
std::map<Method, std::vector<double>> score_users(std::span<const UserSequence> sequences,
                                                  std::span<const Method> methods,
                                                  const ScoringOptions& options);

}  // namespace predlim
