#include "predlim/predictability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace predlim {

std::string to_string(Method method) {
    switch (method) {
        case Method::epl: return "epl";
        case Method::fano: return "fano";
        case Method::fano_nr: return "fano_nr";
        case Method::perm: return "perm";
    }
    return "?";
}

Method parse_method(const std::string& text) {
    if (text == "epl") return Method::epl;
    if (text == "fano") return Method::fano;
    if (text == "fano_nr" || text == "fano-nr") return Method::fano_nr;
    if (text == "perm") return Method::perm;
    throw std::invalid_argument("unknown method '" + text + "'");
}

PredictabilityScore epl(const EntropyEstimate& entropy) {
    if (entropy.estimator == EstimatorKind::perm_normalized ||
        entropy.unit == EntropyUnit::normalized) {
        throw UnitError("EPL needs an entropy in nats or bits, not a normalized permutation entropy");
    }
    const double s = entropy.nats();
    if (!std::isfinite(s) || s < 0.0) {
        throw std::invalid_argument("EPL needs a finite, non-negative entropy");
    }
    PredictabilityScore score;
    score.method = Method::epl;
    score.entropy = entropy;
    score.value = std::exp(-s);
    score.effective_size = std::exp(s);
    if (score.value <= 0.0) score.value = std::numeric_limits<double>::min();
    return score;
}

double fano_entropy_bits(double p, std::size_t n) {
    if (n < 2) throw std::invalid_argument("Fano relation needs n >= 2");
    auto xlog2x = [](double v) { return v > 0.0 ? v * std::log2(v) : 0.0; };
    const double q = 1.0 - p;
    return -xlog2x(p) - xlog2x(q) + q * std::log2(static_cast<double>(n - 1));
}

PredictabilityScore fano_invert(const EntropyEstimate& entropy, std::size_t n) {
    if (n < 2) throw std::invalid_argument("Fano inversion needs n >= 2");
    if (entropy.unit == EntropyUnit::normalized) {
        throw UnitError("Fano inversion needs an entropy in nats or bits");
    }
    const double s = entropy.bits();
    if (!std::isfinite(s)) throw std::invalid_argument("Fano inversion: entropy is not finite");

    PredictabilityScore score;
    score.method = Method::fano;
    score.entropy = entropy;
    score.n = n;

    const double floor = 1.0 / static_cast<double>(n);
    if (s <= 0.0) {
        score.value = 1.0;
        return score;
    }
    if (s >= std::log2(static_cast<double>(n))) {
        score.value = floor;
        return score;
    }
    // S_F is decreasing on [1/n, 1]: S_F(1/n) = log2 n > s > 0 = S_F(1).
    double lo = floor;
    double hi = 1.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (fano_entropy_bits(mid, n) > s) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    score.value = std::clamp(0.5 * (lo + hi), floor, 1.0);
    return score;
}

PredictabilityScore fano_nr(const EntropyEstimate& entropy, std::span<const UserSequence> sequences,
                            FanoutScope scope) {
    const std::size_t reach = transition_fanout(sequences, scope);
    auto score = fano_invert(entropy, std::max<std::size_t>(reach, 2));
    score.method = Method::fano_nr;
    return score;
}

PredictabilityScore fano_nr(const EntropyEstimate& entropy, std::span<const ItemIndex> items) {
    const std::size_t reach = sequence_fanout(items).max_fanout;
    auto score = fano_invert(entropy, std::max<std::size_t>(reach, 2));
    score.method = Method::fano_nr;
    return score;
}

PredictabilityScore perm_predictability(std::span<const ItemIndex> items, std::span<const int> dims,
                                        int tau) {
    std::optional<EntropyEstimate> best;
    for (int d : dims) {
        try {
            auto est = perm_entropy(items, d, tau);
            if (!best || est.value < best->value) best = est;
        } catch (const SequenceTooShort&) {
            // infeasible scale, skipped
        }
    }
    if (!best) {
        throw SequenceTooShort("perm predictability: sequence of length " +
                               std::to_string(items.size()) + " is too short for every d");
    }
    return perm_from_entropy(*best);
}

PredictabilityScore perm_from_entropy(const EntropyEstimate& entropy) {
    if (entropy.estimator != EstimatorKind::perm_normalized) {
        throw UnitError("perm predictability needs a normalized permutation entropy");
    }
    PredictabilityScore score;
    score.method = Method::perm;
    score.entropy = entropy;
    score.value = 1.0 - entropy.value;
    if (score.value <= 0.0) score.value = std::numeric_limits<double>::min();
    return score;
}

}  // namespace predlim
