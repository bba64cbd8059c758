#pragma once

#include "predlim/sequence.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace predlim {

enum class Mechanism { session_reset, repeat_last, context_switch };

std::string to_string(Mechanism mechanism);
/// Accepts both `session-reset` and `session_reset` spellings.
Mechanism parse_mechanism(const std::string& text);

/// Preference set of size m, reset with probability rho before each emission,
/// emission from the set w.p. 1 - eps, else uniform over all n items.
struct SessionResetParams {
    std::size_t set_size = 1;
    double reset_prob = 0.05;
    double eps = 0.0;
};

/// x_1 uniform; then repeat the last item w.p. p, else uniform over n.
struct RepeatLastParams {
    double repeat_prob = 0.0;
};

/// C shared contexts of size m_c; switch to a different context w.p. s before each
/// emission, emit in-context w.p. 1 - eps, else uniform over n.
struct ContextSwitchParams {
    std::size_t contexts = 5;
    std::size_t context_size = 5;
    double switch_prob = 0.05;
    double eps = 0.0;
};

using MechanismParams = std::variant<SessionResetParams, RepeatLastParams, ContextSwitchParams>;

struct GeneratorConfig {
    std::size_t n = 10000;
    std::size_t users = 300;
    std::size_t length = 200;
    std::uint64_t seed = 0;
    MechanismParams params = RepeatLastParams{};

    Mechanism mechanism() const;
    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
    /// The noise parameter: eps for session reset / context switch, p for repeat last.
    double noise() const;
    GeneratorConfig with_noise(double value) const;
};

/// Latent state per step. For session reset `sets` holds the user's successive
/// preference sets and `state[t]` indexes the set that emitted x_t; for context
/// switch `state[t]` is a context id into LatentTrace::contexts; for repeat last
/// `state[t]` is x_{t-1} (undefined at t = 0, stored as x_0).
struct UserTrace {
    std::vector<std::vector<ItemIndex>> sets;
    std::vector<std::uint32_t> state;
};

struct LatentTrace {
    std::vector<std::vector<ItemIndex>> contexts;
    std::vector<UserTrace> users;
};

/// Generated corpus. `sequences` are in generator item space [0, n); `log` is the
/// same data re-encoded through the ingest path with item ids equal to the
/// decimal generator index.
struct SynthCorpus {
    GeneratorConfig config;
    double oracle_hit1 = 0.0;
    std::vector<UserSequence> sequences;
    std::optional<LatentTrace> trace;

    InteractionLog to_log() const;
};

/// Closed-form top-1 hit rate of a predictor that sees the latent state.
double oracle_hit1(const GeneratorConfig& config);

/// Feasible target interval [lo, hi] for invert_noise with the other parameters fixed.
std::pair<double, double> feasible_hit1_range(const GeneratorConfig& config);

/// Noise parameter that makes oracle_hit1 equal `target`. Throws std::domain_error
/// naming the feasible interval when the inverse falls outside [0, 1].
double invert_noise(const GeneratorConfig& config, double target);

/// Deterministic in (config, seed); each user draws from its own substream.
SynthCorpus generate(const GeneratorConfig& config, bool keep_trace = true);

/// Hits / predictions of the latent-state oracle over steps t >= 1. Lowest index
/// wins ties among in-set items.
double simulate_oracle(const SynthCorpus& corpus);

/// Number of next-step predictions simulate_oracle makes.
std::size_t oracle_prediction_count(const SynthCorpus& corpus);

/// Writes <dir>/log.json, <dir>/oracle.json and <dir>/latent.json.
void save_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir);
SynthCorpus load_corpus(const std::filesystem::path& dir);

std::string config_to_json(const GeneratorConfig& config);
GeneratorConfig config_from_json(const std::string& text);

}  // namespace predlim
