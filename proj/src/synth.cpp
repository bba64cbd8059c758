#include "predlim/synth.hpp"

#include "predlim/log_io.hpp"
#include "predlim/parallel.hpp"
#include "predlim/rng.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace predlim {

using nlohmann::json;

namespace {

constexpr std::uint64_t kUserStream = 1;
constexpr std::uint64_t kContextStream = 2;

void check_probability(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    }
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << text;
}

}  // namespace

std::string to_string(Mechanism mechanism) {
    switch (mechanism) {
        case Mechanism::session_reset: return "session-reset";
        case Mechanism::repeat_last: return "repeat-last";
        case Mechanism::context_switch: return "context-switch";
    }
    return "?";
}

Mechanism parse_mechanism(const std::string& text) {
    if (text == "session-reset" || text == "session_reset") return Mechanism::session_reset;
    if (text == "repeat-last" || text == "repeat_last") return Mechanism::repeat_last;
    if (text == "context-switch" || text == "context_switch") return Mechanism::context_switch;
    throw std::invalid_argument("unknown mechanism '" + text + "'");
}

Mechanism GeneratorConfig::mechanism() const {
    return std::visit(overloaded{
                          [](const SessionResetParams&) { return Mechanism::session_reset; },
                          [](const RepeatLastParams&) { return Mechanism::repeat_last; },
                          [](const ContextSwitchParams&) { return Mechanism::context_switch; },
                      },
                      params);
}

void GeneratorConfig::validate() const {
    if (n < 2) throw std::invalid_argument("generator: n must be >= 2");
    if (users < 1) throw std::invalid_argument("generator: users must be >= 1");
    if (length < 2) throw std::invalid_argument("generator: length must be >= 2");
    std::visit(overloaded{
                   [&](const SessionResetParams& p) {
                       if (p.set_size < 1 || p.set_size > n) {
                           throw std::invalid_argument("session reset: m must lie in [1, n]");
                       }
                       check_probability(p.reset_prob, "session reset: rho");
                       check_probability(p.eps, "session reset: eps");
                   },
                   [&](const RepeatLastParams& p) { check_probability(p.repeat_prob, "repeat last: p"); },
                   [&](const ContextSwitchParams& p) {
                       if (p.contexts < 2) throw std::invalid_argument("context switch: C must be >= 2");
                       if (p.context_size < 1 || p.context_size > n) {
                           throw std::invalid_argument("context switch: m_c must lie in [1, n]");
                       }
                       check_probability(p.switch_prob, "context switch: s");
                       check_probability(p.eps, "context switch: eps");
                   },
               },
               params);
}

double GeneratorConfig::noise() const {
    return std::visit(overloaded{
                          [](const SessionResetParams& p) { return p.eps; },
                          [](const RepeatLastParams& p) { return p.repeat_prob; },
                          [](const ContextSwitchParams& p) { return p.eps; },
                      },
                      params);
}

GeneratorConfig GeneratorConfig::with_noise(double value) const {
    GeneratorConfig out = *this;
    std::visit(overloaded{
                   [&](SessionResetParams& p) { p.eps = value; },
                   [&](RepeatLastParams& p) { p.repeat_prob = value; },
                   [&](ContextSwitchParams& p) { p.eps = value; },
               },
               out.params);
    return out;
}

double oracle_hit1(const GeneratorConfig& config) {
    config.validate();
    const double inv_n = 1.0 / static_cast<double>(config.n);
    return std::visit(overloaded{
                          [&](const SessionResetParams& p) {
                              return (1.0 - p.eps) / static_cast<double>(p.set_size) + p.eps * inv_n;
                          },
                          [&](const RepeatLastParams& p) {
                              return p.repeat_prob + (1.0 - p.repeat_prob) * inv_n;
                          },
                          [&](const ContextSwitchParams& p) {
                              return (1.0 - p.eps) / static_cast<double>(p.context_size) + p.eps * inv_n;
                          },
                      },
                      config.params);
}

std::pair<double, double> feasible_hit1_range(const GeneratorConfig& config) {
    config.validate();
    const double inv_n = 1.0 / static_cast<double>(config.n);
    return std::visit(overloaded{
                          [&](const SessionResetParams& p) {
                              return std::pair{inv_n, 1.0 / static_cast<double>(p.set_size)};
                          },
                          [&](const RepeatLastParams&) { return std::pair{inv_n, 1.0}; },
                          [&](const ContextSwitchParams& p) {
                              return std::pair{inv_n, 1.0 / static_cast<double>(p.context_size)};
                          },
                      },
                      config.params);
}

double invert_noise(const GeneratorConfig& config, double target) {
    const auto [lo, hi] = feasible_hit1_range(config);
    const double inv_n = 1.0 / static_cast<double>(config.n);
    auto infeasible = [&]() {
        std::ostringstream msg;
        msg.precision(17);
        msg << to_string(config.mechanism()) << ": target Hit@1 " << target
            << " is outside the feasible interval [" << lo << ", " << hi << "]";
        return std::domain_error(msg.str());
    };
    if (!std::isfinite(target)) throw infeasible();

    double value = 0.0;
    if (config.mechanism() == Mechanism::repeat_last) {
        value = (target - inv_n) / (1.0 - inv_n);
    } else {
        // (1 - eps)/m + eps/n = h  =>  eps = (1/m - h) / (1/m - 1/n)
        const double top = hi;
        if (top == inv_n) {
            if (target != inv_n) throw infeasible();
            return 0.0;
        }
        value = (top - target) / (top - inv_n);
    }
    if (!(value >= 0.0 && value <= 1.0)) throw infeasible();
    return value;
}

SynthCorpus generate(const GeneratorConfig& config, bool keep_trace) {
    config.validate();
    SynthCorpus corpus;
    corpus.config = config;
    corpus.oracle_hit1 = oracle_hit1(config);
    corpus.sequences.resize(config.users);

    LatentTrace trace;
    trace.users.resize(config.users);
    if (const auto* cs = std::get_if<ContextSwitchParams>(&config.params)) {
        Rng rng(derive_seed(config.seed, {kContextStream}));
        for (std::size_t c = 0; c < cs->contexts; ++c) {
            trace.contexts.push_back(rng.sample_without_replacement<ItemIndex>(config.n, cs->context_size));
        }
    }

    const std::size_t n = config.n;
    const std::size_t len = config.length;
    parallel_for(config.users, [&](std::size_t u) {
        Rng rng(derive_seed(config.seed, {kUserStream, u}));
        auto& seq = corpus.sequences[u];
        seq.user_index = static_cast<UserIndex>(u);
        seq.user_id = "u" + std::to_string(u);
        seq.items.resize(len);
        auto& ut = trace.users[u];
        ut.state.resize(len);

        std::visit(overloaded{
                       [&](const SessionResetParams& p) {
                           ut.sets.push_back(rng.sample_without_replacement<ItemIndex>(n, p.set_size));
                           for (std::size_t t = 0; t < len; ++t) {
                               if (t > 0 && rng.bernoulli(p.reset_prob)) {
                                   ut.sets.push_back(rng.sample_without_replacement<ItemIndex>(n, p.set_size));
                               }
                               const auto& current = ut.sets.back();
                               ut.state[t] = static_cast<std::uint32_t>(ut.sets.size() - 1);
                               seq.items[t] = rng.bernoulli(p.eps)
                                                  ? static_cast<ItemIndex>(rng.below(n))
                                                  : current[rng.below(current.size())];
                           }
                       },
                       [&](const RepeatLastParams& p) {
                           seq.items[0] = static_cast<ItemIndex>(rng.below(n));
                           ut.state[0] = seq.items[0];
                           for (std::size_t t = 1; t < len; ++t) {
                               ut.state[t] = seq.items[t - 1];
                               seq.items[t] = rng.bernoulli(p.repeat_prob)
                                                  ? seq.items[t - 1]
                                                  : static_cast<ItemIndex>(rng.below(n));
                           }
                       },
                       [&](const ContextSwitchParams& p) {
                           auto context = static_cast<std::uint32_t>(rng.below(p.contexts));
                           for (std::size_t t = 0; t < len; ++t) {
                               if (t > 0 && rng.bernoulli(p.switch_prob)) {
                                   context = static_cast<std::uint32_t>(
                                       (context + 1 + rng.below(p.contexts - 1)) % p.contexts);
                               }
                               ut.state[t] = context;
                               const auto& members = trace.contexts[context];
                               seq.items[t] = rng.bernoulli(p.eps)
                                                  ? static_cast<ItemIndex>(rng.below(n))
                                                  : members[rng.below(members.size())];
                           }
                       },
                   },
                   config.params);
    });
    if (keep_trace) corpus.trace = std::move(trace);
    return corpus;
}

std::size_t oracle_prediction_count(const SynthCorpus& corpus) {
    std::size_t count = 0;
    for (const auto& seq : corpus.sequences) count += seq.length() > 0 ? seq.length() - 1 : 0;
    return count;
}

double simulate_oracle(const SynthCorpus& corpus) {
    if (!corpus.trace) throw std::invalid_argument("simulate_oracle: corpus has no latent trace");
    const auto& trace = *corpus.trace;
    if (trace.users.size() != corpus.sequences.size()) {
        throw std::invalid_argument("simulate_oracle: trace does not cover every user");
    }
    const Mechanism mech = corpus.config.mechanism();
    std::size_t hits = 0;
    std::size_t total = 0;
    for (std::size_t u = 0; u < corpus.sequences.size(); ++u) {
        const auto& items = corpus.sequences[u].items;
        const auto& ut = trace.users[u];
        if (ut.state.size() != items.size()) {
            throw std::invalid_argument("simulate_oracle: trace length mismatch");
        }
        for (std::size_t t = 1; t < items.size(); ++t) {
            ItemIndex guess = 0;
            switch (mech) {
                case Mechanism::repeat_last: guess = items[t - 1]; break;
                case Mechanism::session_reset: guess = ut.sets.at(ut.state[t]).front(); break;
                case Mechanism::context_switch: guess = trace.contexts.at(ut.state[t]).front(); break;
            }
            hits += guess == items[t] ? 1 : 0;
            ++total;
        }
    }
    if (total == 0) throw std::invalid_argument("simulate_oracle: no prediction steps");
    return static_cast<double>(hits) / static_cast<double>(total);
}

InteractionLog SynthCorpus::to_log() const {
    std::vector<InteractionRecord> records;
    for (const auto& seq : sequences) {
        for (std::size_t t = 0; t < seq.items.size(); ++t) {
            records.push_back({seq.user_id, std::to_string(seq.items[t]), static_cast<std::int64_t>(t)});
        }
    }
    return build_log(records, IngestConfig{});
}

std::string config_to_json(const GeneratorConfig& config) {
    json j = {{"mechanism", to_string(config.mechanism())},
              {"n", config.n},
              {"users", config.users},
              {"length", config.length},
              {"seed", config.seed}};
    std::visit(overloaded{
                   [&](const SessionResetParams& p) {
                       j["params"] = {{"m", p.set_size}, {"rho", p.reset_prob}, {"eps", p.eps}};
                   },
                   [&](const RepeatLastParams& p) { j["params"] = {{"p", p.repeat_prob}}; },
                   [&](const ContextSwitchParams& p) {
                       j["params"] = {{"C", p.contexts}, {"m_c", p.context_size}, {"s", p.switch_prob}, {"eps", p.eps}};
                   },
               },
               config.params);
    return j.dump();
}

namespace {

GeneratorConfig config_from(const json& j) {
    GeneratorConfig config;
    config.n = j.at("n").get<std::size_t>();
    config.users = j.at("users").get<std::size_t>();
    config.length = j.at("length").get<std::size_t>();
    config.seed = j.at("seed").get<std::uint64_t>();
    const auto& p = j.at("params");
    switch (parse_mechanism(j.at("mechanism").get<std::string>())) {
        case Mechanism::session_reset:
            config.params = SessionResetParams{p.at("m").get<std::size_t>(), p.at("rho").get<double>(),
                                               p.at("eps").get<double>()};
            break;
        case Mechanism::repeat_last: config.params = RepeatLastParams{p.at("p").get<double>()}; break;
        case Mechanism::context_switch:
            config.params = ContextSwitchParams{p.at("C").get<std::size_t>(), p.at("m_c").get<std::size_t>(),
                                                p.at("s").get<double>(), p.at("eps").get<double>()};
            break;
    }
    config.validate();
    return config;
}

}  // namespace

GeneratorConfig config_from_json(const std::string& text) {
    try {
        return config_from(json::parse(text));
    } catch (const json::exception& e) {
        throw DataError(std::string("generator config JSON: ") + e.what());
    }
}

void save_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    save_log(corpus.to_log(), dir / "log.json");
    json oracle = {{"config", json::parse(config_to_json(corpus.config))},
                   {"oracle_hit1", corpus.oracle_hit1},
                   {"item_space", "item_id is the decimal generator item index in [0, n)"},
                   {"latent_trace", corpus.trace ? json("latent.json") : json(nullptr)}};
    write_file(dir / "oracle.json", oracle.dump(2) + "\n");
    if (corpus.trace) {
        json users = json::array();
        for (const auto& ut : corpus.trace->users) users.push_back({{"sets", ut.sets}, {"state", ut.state}});
        json latent = {{"contexts", corpus.trace->contexts}, {"users", std::move(users)}};
        write_file(dir / "latent.json", latent.dump() + "\n");
    }
}

SynthCorpus load_corpus(const std::filesystem::path& dir) {
    SynthCorpus corpus;
    try {
        const json oracle = json::parse(read_file(dir / "oracle.json"));
        corpus.config = config_from(oracle.at("config"));
        corpus.oracle_hit1 = oracle.at("oracle_hit1").get<double>();
        const auto log = load_log(dir / "log.json");
        for (const auto& seq : log.sequences()) {
            UserSequence raw;
            raw.user_index = seq.user_index;
            raw.user_id = seq.user_id;
            raw.timestamps = seq.timestamps;
            for (ItemIndex item : seq.items) {
                raw.items.push_back(static_cast<ItemIndex>(std::stoul(log.vocabulary().id_of(item))));
            }
            corpus.sequences.push_back(std::move(raw));
        }
        if (oracle.contains("latent_trace") && oracle.at("latent_trace").is_string()) {
            const json latent = json::parse(read_file(dir / oracle.at("latent_trace").get<std::string>()));
            LatentTrace trace;
            trace.contexts = latent.at("contexts").get<std::vector<std::vector<ItemIndex>>>();
            for (const auto& u : latent.at("users")) {
                trace.users.push_back({u.at("sets").get<std::vector<std::vector<ItemIndex>>>(),
                                       u.at("state").get<std::vector<std::uint32_t>>()});
            }
            corpus.trace = std::move(trace);
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("corpus: ") + e.what());
    }
    return corpus;
}

}  // namespace predlim
