#include "predlim/cohort.hpp"
#include "predlim/csv.hpp"
#include "predlim/entropy.hpp"
#include "predlim/eval.hpp"
#include "predlim/log_io.hpp"
#include "predlim/pipeline.hpp"
#include "predlim/predictability.hpp"
#include "predlim/selection.hpp"
#include "predlim/sequence.hpp"
#include "predlim/sweep.hpp"
#include "predlim/synth.hpp"
#include "predlim/tables.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using namespace predlim;

namespace {

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    return out;
}

FanoutScope parse_scope(const std::string& text) {
    if (text == "per-user" || text == "per_user") return FanoutScope::per_user;
    if (text == "pooled") return FanoutScope::pooled;
    throw std::invalid_argument("unknown n-scope '" + text + "'");
}

struct SynthFlags {
    std::string mechanism = "repeat-last";
    std::size_t n = 10000;
    std::size_t users = 300;
    std::size_t length = 200;
    std::uint64_t seed = 0;
    std::size_t set_size = 1;
    double rho = 0.05;
    std::size_t contexts = 5;
    std::size_t context_size = 5;
    double switch_prob = 0.05;

    void add_to(CLI::App* app) {
        app->add_option("--mechanism", mechanism, "session-reset | repeat-last | context-switch")->required();
        app->add_option("--n", n, "Number of items");
        app->add_option("--users", users, "Number of users");
        app->add_option("--length", length, "Events per user");
        app->add_option("--seed", seed, "Base seed");
        app->add_option("--m", set_size, "Session reset preference set size");
        app->add_option("--rho", rho, "Session reset probability");
        app->add_option("--contexts", contexts, "Context switch: number of contexts");
        app->add_option("--context-size", context_size, "Context switch: items per context");
        app->add_option("--switch-prob", switch_prob, "Context switch probability");
    }

    GeneratorConfig config() const {
        GeneratorConfig c;
        c.n = n;
        c.users = users;
        c.length = length;
        c.seed = seed;
        switch (parse_mechanism(mechanism)) {
            case Mechanism::session_reset: c.params = SessionResetParams{set_size, rho, 0.0}; break;
            case Mechanism::repeat_last: c.params = RepeatLastParams{0.0}; break;
            case Mechanism::context_switch:
                c.params = ContextSwitchParams{contexts, context_size, switch_prob, 0.0};
                break;
        }
        return c;
    }
};

EstimatorSpec estimator_spec(const std::string& name, int m, const std::vector<int>& dims) {
    EstimatorSpec spec;
    spec.kind = parse_estimator(name);
    spec.m = m;
    spec.perm_dims = dims;
    return spec;
}

void print_rmse(const SweepResult& result) {
    for (const auto& [method, value] : result.rmse) {
        std::cout << "rmse " << to_string(method) << ' ' << csv::format_double(value) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Predictability estimation toolkit for sequential interaction logs"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Encode an interaction CSV into a log JSON");
    std::string ingest_input, ingest_output;
    IngestConfig ingest_config;
    std::optional<std::size_t> max_events;
    ingest->add_option("--input", ingest_input, "CSV with user_id,item_id,timestamp")->required();
    ingest->add_option("--min-length", ingest_config.min_length, "Drop users with fewer events");
    ingest->add_option("--max-events", max_events, "Keep only the earliest M events");
    ingest->add_flag("--dedup", ingest_config.dedup, "Drop consecutive duplicate events");
    ingest->add_option("--output", ingest_output, "Log JSON path")->required();

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Per-user entropy estimates");
    std::string est_log, est_output, est_estimator = "sampen", est_unit = "nats";
    int est_m = 2;
    std::vector<int> est_dims = {3, 4, 5};
    estimate->add_option("--log", est_log)->required();
    estimate->add_option("--estimator", est_estimator, "sampen | lz | perm");
    estimate->add_option("--m", est_m, "SampEn template length");
    estimate->add_option("--d", est_dims, "Permutation dimensions")->delimiter(',');
    estimate->add_option("--unit", est_unit, "nats | bits (ignored for perm)");
    estimate->add_option("--output", est_output)->required();

    // score
    auto* score = app.add_subcommand("score", "Predictability scores from entropy estimates");
    std::string sc_log, sc_entropy, sc_method = "epl", sc_scope = "per-user", sc_output;
    score->add_option("--log", sc_log)->required();
    score->add_option("--entropy", sc_entropy)->required();
    score->add_option("--method", sc_method, "epl | fano | fano_nr | perm");
    score->add_option("--n-scope", sc_scope, "global | per-user | pooled (fano_nr only)");
    score->add_option("--output", sc_output)->required();

    // synth
    auto* synth = app.add_subcommand("synth", "Generate an oracle-controlled synthetic corpus");
    SynthFlags synth_flags;
    synth_flags.add_to(synth);
    std::optional<double> synth_target, synth_eps, synth_p;
    std::string synth_output;
    synth->add_option("--target-hit1", synth_target, "Oracle Hit@1 to invert the noise for");
    synth->add_option("--eps", synth_eps, "Noise level (session reset, context switch)");
    synth->add_option("--p", synth_p, "Repeat probability (repeat last)");
    synth->add_option("--output", synth_output, "Corpus directory")->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Difficulty or catalogue-size sweep on synthetic data");
    SynthFlags sweep_flags;
    sweep_flags.add_to(sweep);
    std::string sweep_kind = "difficulty", sweep_estimator = "sampen", sweep_scope = "per-user", sweep_output;
    std::size_t sweep_reps = 10;
    std::vector<double> sweep_targets = DifficultySweepConfig{}.targets;
    std::vector<std::size_t> sweep_grid = NSweepConfig{}.n_grid;
    double sweep_target = 0.10;
    sweep->add_option("--kind", sweep_kind, "difficulty | n");
    sweep->add_option("--reps", sweep_reps);
    sweep->add_option("--estimator", sweep_estimator, "sampen | lz");
    sweep->add_option("--n-scope", sweep_scope, "per-user | pooled");
    sweep->add_option("--targets", sweep_targets, "Oracle Hit@1 grid (difficulty)")->delimiter(',');
    sweep->add_option("--n-grid", sweep_grid, "Catalogue sizes (n)")->delimiter(',');
    sweep->add_option("--target-hit1", sweep_target, "Fixed oracle Hit@1 (n)");
    sweep->add_option("--output", sweep_output, "Sweep CSV")->required();

    // aggregate
    auto* aggregate = app.add_subcommand("aggregate", "Weighted dataset-level predictability");
    std::string ag_log, ag_scores, ag_dataset, ag_weighting = "events", ag_output;
    bool ag_append = false;
    aggregate->add_option("--log", ag_log)->required();
    aggregate->add_option("--scores", ag_scores)->required();
    aggregate->add_option("--dataset-id", ag_dataset)->required();
    aggregate->add_option("--weights", ag_weighting, "events | uniform");
    aggregate->add_option("--output", ag_output, "dataset_id,method,predictability CSV")->required();
    aggregate->add_flag("--append", ag_append, "Append rows instead of overwriting");

    // report
    auto* report = app.add_subcommand("report", "Rank agreement of dataset scores with best-model accuracy");
    std::string rp_scores, rp_reference = "reference/best_models.csv", rp_output;
    report->add_option("--scores", rp_scores, "dataset_id,method,predictability CSV")->required();
    report->add_option("--reference", rp_reference);
    report->add_option("--output", rp_output)->required();

    // cohort
    auto* cohort = app.add_subcommand("cohort", "Median-split cohort comparison");
    std::string co_log, co_scores, co_dimension, co_method = "epl", co_output;
    double co_tail = 0.8;
    cohort->add_option("--log", co_log)->required();
    cohort->add_option("--scores", co_scores)->required();
    cohort->add_option("--dimension", co_dimension, "novelty | longtail | activity")->required();
    cohort->add_option("--method", co_method);
    cohort->add_option("--tail-mass", co_tail, "Head share of interactions");
    cohort->add_option("--output", co_output)->required();

    // select
    auto* select = app.add_subcommand("select", "Predictability-guided training data selection");
    std::string se_log, se_scores, se_strategy, se_method = "epl", se_dir;
    double se_budget = 0.2;
    PartitionConfig se_partition;
    select->add_option("--log", se_log)->required();
    select->add_option("--scores", se_scores)->required();
    select->add_option("--strategy", se_strategy, "highpi | random | lowpi")->required();
    select->add_option("--method", se_method, "Score method used for ranking");
    select->add_option("--budget", se_budget, "Fraction of candidate users to add");
    select->add_option("--seed", se_partition.seed);
    select->add_option("--eval-fraction", se_partition.eval_fraction);
    select->add_option("--min-length", se_partition.min_length);
    select->add_option("--output-dir", se_dir)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) {
            ingest_config.max_events = max_events;
            const auto log = ingest_csv(ingest_input, ingest_config);
            save_log(log, ingest_output);
            const auto& s = log.stats();
            std::cout << "users " << s.num_users << " items " << s.num_items << " interactions "
                      << s.num_interactions << '\n';
        } else if (*estimate) {
            const auto log = load_log(est_log);
            const auto spec = estimator_spec(est_estimator, est_m, est_dims);
            const auto unit = parse_entropy_unit(est_unit);
            std::vector<EntropyRow> rows;
            for (const auto& seq : log.sequences()) {
                auto e = estimate_entropy(seq.items, spec);
                if (e.unit != EntropyUnit::normalized) e = e.converted(unit);
                rows.push_back({seq.user_index, e});
            }
            auto out = open_output(est_output);
            write_entropy_csv(out, rows);
        } else if (*score) {
            const auto log = load_log(sc_log);
            const auto method = parse_method(sc_method);
            const bool global_nr = sc_scope == "global";
            const auto scope = global_nr ? FanoutScope::per_user : parse_scope(sc_scope);
            std::size_t pooled = 0;
            if (method == Method::fano_nr && !global_nr && scope == FanoutScope::pooled) {
                pooled = std::max<std::size_t>(transition_fanout(log.sequences(), FanoutScope::pooled), 2);
            }
            const std::size_t global_n = std::max<std::size_t>(log.num_items(), 2);
            std::vector<ScoreRow> rows;
            for (const auto& row : read_entropy_csv(sc_entropy)) {
                const auto& seq = log.user(row.user_index);
                PredictabilityScore s;
                switch (method) {
                    case Method::epl: s = epl(row.estimate); break;
                    case Method::fano: s = fano_invert(row.estimate, global_n); break;
                    case Method::fano_nr:
                        if (global_nr) {
                            s = fano_invert(row.estimate, global_n);
                        } else if (pooled) {
                            s = fano_invert(row.estimate, pooled);
                        } else {
                            s = fano_nr(row.estimate, std::span<const ItemIndex>(seq.items));
                        }
                        s.method = Method::fano_nr;
                        break;
                    case Method::perm: s = perm_from_entropy(row.estimate); break;
                }
                rows.push_back({row.user_index, s});
            }
            auto out = open_output(sc_output);
            write_scores_csv(out, rows);
        } else if (*synth) {
            auto config = synth_flags.config();
            const int given = (synth_target ? 1 : 0) + (synth_eps ? 1 : 0) + (synth_p ? 1 : 0);
            if (given != 1) throw std::invalid_argument("give exactly one of --target-hit1, --eps, --p");
            if (synth_target) {
                config = config.with_noise(invert_noise(config, *synth_target));
            } else {
                const bool repeat = config.mechanism() == Mechanism::repeat_last;
                if (repeat != static_cast<bool>(synth_p)) {
                    throw std::invalid_argument(repeat ? "repeat-last takes --p" : "this mechanism takes --eps");
                }
                config = config.with_noise(synth_p ? *synth_p : *synth_eps);
            }
            const auto corpus = generate(config);
            save_corpus(corpus, synth_output);
            std::cout << "oracle_hit1 " << csv::format_double(corpus.oracle_hit1) << '\n';
        } else if (*sweep) {
            const auto spec = estimator_spec(sweep_estimator, 2, {3, 4, 5});
            const auto scope = parse_scope(sweep_scope);
            SweepResult result;
            if (sweep_kind == "difficulty") {
                DifficultySweepConfig c;
                c.base = sweep_flags.config();
                c.targets = sweep_targets;
                c.reps = sweep_reps;
                c.estimator = spec;
                c.nr_scope = scope;
                result = run_difficulty_sweep(c);
            } else if (sweep_kind == "n") {
                NSweepConfig c;
                c.base = sweep_flags.config();
                c.n_grid = sweep_grid;
                c.target_hit1 = sweep_target;
                c.reps = sweep_reps;
                c.estimator = spec;
                c.nr_scope = scope;
                result = run_n_sweep(c);
            } else {
                throw std::invalid_argument("unknown sweep kind '" + sweep_kind + "'");
            }
            auto out = open_output(sweep_output);
            out << sweep_to_csv(result);
            print_rmse(result);
        } else if (*aggregate) {
            const auto log = load_log(ag_log);
            const auto weights = user_weights(log, parse_weighting(ag_weighting));
            const auto table = read_scores_csv(ag_scores);
            const bool exists = std::filesystem::exists(ag_output);
            std::ofstream out(ag_output, ag_append ? std::ios::app | std::ios::binary : std::ios::binary);
            if (!out) throw DataError("cannot write '" + ag_output + "'");
            if (!ag_append || !exists) out << "dataset_id,method,predictability\n";
            for (const auto& [method, per_user] : table) {
                std::vector<double> s, w;
                for (const auto& [u, value] : per_user) {
                    if (u >= weights.size()) throw DataError("score for unknown user " + std::to_string(u));
                    s.push_back(value);
                    w.push_back(weights[u]);
                }
                out << csv::escape(ag_dataset) << ',' << to_string(method) << ','
                    << csv::format_double(aggregate_dataset(s, w)) << '\n';
            }
        } else if (*report) {
            const auto scores = read_dataset_scores(rp_scores);
            const auto reference = read_reference(rp_reference);
            const auto reports = consistency_report(scores, reference);
            auto out = open_output(rp_output);
            out << consistency_to_json(reports);
            for (const auto& r : reports) {
                std::cout << to_string(r.method) << " rho " << csv::format_double(r.spearman_rho) << " rmse "
                          << csv::format_double(r.rmse) << '\n';
                for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
            }
        } else if (*cohort) {
            const auto log = load_log(co_log);
            const auto table = read_scores_csv(co_scores);
            const auto method = parse_method(co_method);
            const auto it = table.find(method);
            if (it == table.end()) throw DataError("no '" + co_method + "' scores in " + co_scores);
            std::vector<UserFeature> features;
            std::vector<double> values;
            for (const auto& f : compute_features(log, co_tail)) {
                if (const auto s = it->second.find(f.user_index); s != it->second.end()) {
                    features.push_back(f);
                    values.push_back(s->second);
                }
            }
            const auto result = split_and_aggregate(features, values, parse_dimension(co_dimension));
            auto out = open_output(co_output);
            out << cohort_report_to_json(result);
        } else if (*select) {
            const auto log = load_log(se_log);
            const auto table = read_scores_csv(se_scores);
            const auto method = parse_method(se_method);
            const auto it = table.find(method);
            if (it == table.end()) throw DataError("no '" + se_method + "' scores in " + se_scores);
            const auto partition = partition_users(log, se_partition);
            const auto plan = build_plan(partition, it->second, se_budget, parse_strategy(se_strategy),
                                         se_partition.seed);
            write_split(materialize(plan, log), se_dir);
            std::cout << "eval " << plan.eval_users.size() << " candidates " << plan.candidate_users.size()
                      << " selected " << plan.selected.size() << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
