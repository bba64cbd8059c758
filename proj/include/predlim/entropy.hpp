#pragma once

#include "predlim/sequence.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace predlim {

/// `normalized` is reserved for permutation entropy, which is unitless in [0, 1].
enum class EntropyUnit { nats, bits, normalized };
enum class EstimatorKind { sampen, lz, perm_normalized, plugin };

std::string to_string(EntropyUnit unit);
std::string to_string(EstimatorKind kind);
EntropyUnit parse_entropy_unit(const std::string& text);
EstimatorKind parse_estimator(const std::string& text);

/// Raised when an estimate is used with incompatible semantics (e.g. perm entropy fed to EPL).
class UnitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a sequence is too short for an estimator's window.
class SequenceTooShort : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct EntropyEstimate {
    double value = 0.0;
    EntropyUnit unit = EntropyUnit::nats;
    EstimatorKind estimator = EstimatorKind::plugin;
    std::map<std::string, double> params;
    /// Set when the estimator hit a degenerate count and returned its cap.
    bool saturated = false;

    double nats() const;
    double bits() const;
    EntropyEstimate converted(EntropyUnit target) const;
};

/// Validated probability vector (entries >= 0, sum within 1e-9 of 1).
class Distribution {
public:
    explicit Distribution(std::vector<double> probs);

    /// Normalizes non-negative weights; throws if all are zero.
    static Distribution from_weights(std::span<const double> weights);
    static Distribution uniform(std::size_t support);

    std::span<const double> probs() const { return probs_; }
    std::size_t support_size() const { return probs_.size(); }
    double max_probability() const;

private:
    std::vector<double> probs_;
};

EntropyEstimate plugin_entropy(const Distribution& d, EntropyUnit unit = EntropyUnit::nats);

/// Pair counts behind sample entropy. Both lengths use the same T - m template starts.
struct SampleEntropyCounts {
    std::uint64_t matches_m = 0;       // B
    std::uint64_t matches_m1 = 0;      // A
    std::uint64_t candidate_pairs = 0; // (T-m)(T-m-1)/2
};

SampleEntropyCounts sampen_counts(std::span<const ItemIndex> x, int m);

/// Sample entropy with exact symbol matching, in nats. A == 0 or B == 0 returns
/// ln(candidate_pairs) with `saturated` set.
EntropyEstimate sampen(std::span<const ItemIndex> x, int m = 2);

/// Match lengths Lambda_i: length of the shortest substring starting at i that does
/// not start at any earlier position (overlap allowed); Lambda_0 = 1. Zero-based.
std::vector<std::size_t> lz_match_lengths(std::span<const ItemIndex> x);

/// Lempel-Ziv entropy rate estimate T log2 T / sum(Lambda), in bits.
EntropyEstimate lz_entropy(std::span<const ItemIndex> x);

/// Minimum number of embedding vectors perm_entropy accepts.
inline constexpr std::size_t kMinPermVectors = 5;

/// Ordinal pattern of a window as a Lehmer code in [0, d!). Ties rank earlier positions lower.
std::uint32_t ordinal_pattern(std::span<const ItemIndex> window);

/// Normalized permutation entropy H / ln(d!) over (x_i, x_{i+tau}, ..., x_{i+(d-1)tau}).
EntropyEstimate perm_entropy(std::span<const ItemIndex> x, int d, int tau = 1);

}  // namespace predlim
