#include "predlim/pipeline.hpp"

#include "predlim/parallel.hpp"

#include <algorithm>

namespace predlim {

EntropyEstimate estimate_entropy(std::span<const ItemIndex> items, const EstimatorSpec& spec) {
    switch (spec.kind) {
        case EstimatorKind::sampen: return sampen(items, spec.m);
        case EstimatorKind::lz: return lz_entropy(items);
        case EstimatorKind::perm_normalized:
            return perm_predictability(items, spec.perm_dims, spec.tau).entropy;
        case EstimatorKind::plugin: break;
    }
    throw std::invalid_argument("plugin entropy needs an explicit distribution, not a sequence");
}

std::map<Method, std::vector<double>> score_users(std::span<const UserSequence> sequences,
                                                  std::span<const Method> methods,
                                                  const ScoringOptions& options) {
    const auto wants = [&](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
    const bool need_entropy = wants(Method::epl) || wants(Method::fano) || wants(Method::fano_nr);

    std::size_t pooled_reach = 0;
    if (wants(Method::fano_nr) && options.nr_scope == FanoutScope::pooled) {
        pooled_reach = std::max<std::size_t>(transition_fanout(sequences, FanoutScope::pooled), 2);
    }

    std::map<Method, std::vector<double>> out;
    for (Method m : methods) out[m].assign(sequences.size(), 0.0);
    auto slot = [&](Method m) { return wants(m) ? out.find(m)->second.data() : nullptr; };
    double* epl_out = slot(Method::epl);
    double* fano_out = slot(Method::fano);
    double* nr_out = slot(Method::fano_nr);
    double* perm_out = slot(Method::perm);

    parallel_for(sequences.size(), [&](std::size_t u) {
        const auto& items = sequences[u].items;
        if (need_entropy) {
            const auto entropy = estimate_entropy(items, options.estimator);
            if (epl_out) epl_out[u] = epl(entropy).value;
            if (fano_out) fano_out[u] = fano_invert(entropy, options.global_n).value;
            if (nr_out) {
                nr_out[u] = options.nr_scope == FanoutScope::pooled
                                              ? fano_invert(entropy, pooled_reach).value
                                              : fano_nr(entropy, std::span<const ItemIndex>(items)).value;
            }
        }
        if (perm_out) {
            perm_out[u] = perm_predictability(items, options.estimator.perm_dims, options.estimator.tau).value;
        }
    });
    return out;
}

}  // namespace predlim
