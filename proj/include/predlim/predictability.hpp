#pragma once

#include "predlim/entropy.hpp"
#include "predlim/sequence.hpp"

#include <optional>
#include <span>
#include <string>

namespace predlim {

enum class Method { epl, fano, fano_nr, perm };

std::string to_string(Method method);
Method parse_method(const std::string& text);

struct PredictabilityScore {
    double value = 1.0;
    Method method = Method::epl;
    EntropyEstimate entropy;
    /// Candidate-set size used by the Fano variants.
    std::optional<std::size_t> n;
    /// exp(S) in nats; only set for EPL.
    std::optional<double> effective_size;
};

/// Entropy-induced lower bound exp(-S). Takes no candidate-set size by construction.
PredictabilityScore epl(const EntropyEstimate& entropy);

/// Right-hand side of the Fano relation in bits:
///   -p log2 p - (1-p) log2(1-p) + (1-p) log2(n-1), with 0 log 0 = 0.
double fano_entropy_bits(double predictability, std::size_t n);

/// Solves fano_entropy_bits(P, n) = S for P in [1/n, 1] by bisection.
/// S >= log2 n clamps to 1/n and S <= 0 clamps to 1.
PredictabilityScore fano_invert(const EntropyEstimate& entropy, std::size_t n);

/// Fano inversion with n = max(N_r, 2), N_r the successor fan-out of `sequences` under `scope`.
PredictabilityScore fano_nr(const EntropyEstimate& entropy, std::span<const UserSequence> sequences,
                            FanoutScope scope);
PredictabilityScore fano_nr(const EntropyEstimate& entropy, std::span<const ItemIndex> items);

inline constexpr int kDefaultPermDimsArray[] = {3, 4, 5};
inline constexpr std::span<const int> kDefaultPermDims{kDefaultPermDimsArray};

/// 1 - min over feasible d of normalized permutation entropy. Infeasible d are skipped.
PredictabilityScore perm_predictability(std::span<const ItemIndex> items,
                                        std::span<const int> dims = kDefaultPermDims, int tau = 1);

/// 1 - H_norm for an already-minimized permutation entropy. Rejects other estimators.
PredictabilityScore perm_from_entropy(const EntropyEstimate& entropy);

}  // namespace predlim
