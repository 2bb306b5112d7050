#include "quagd/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>

#include "quagd/errors.hpp"
#include "quagd/harness.hpp"
#include "quagd/report.hpp"
#include "quagd/rng.hpp"
#include "quagd/theory.hpp"

namespace quagd::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write '" + path.string() + "'");
    return file;
}

void write_effective_config(const ExperimentConfig& cfg, std::ostream& out) {
    const auto text = format_config(cfg);
    auto file = open_output(fs::path(cfg.out_dir) / "effective_config.ini");
    file << text;
    out << "# effective configuration\n" << text << '\n';
}

int report_audit(const RunTrace& trace, std::ostream& err) {
    const auto audit = audit_invariants(trace);
    for (const auto& v : audit.violations) {
        err << "audit: " << to_string(v.kind) << " violation at k=" << v.k;
        if (v.round >= 0) err << " round " << v.round;
        err << ": " << v.detail << '\n';
    }
    return static_cast<int>(audit.violations.size());
}

void warn_alpha(const OptRunConfig& run, std::ostream& err) {
    if (!alpha_in_interval(run)) {
        err << "warning: step size " << format_number(run.alpha)
            << " lies outside the admissible interval; convergence is not guaranteed\n";
    }
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const AssumptionViolation& e) {
        err << "assumption violated: " << e.what() << '\n';
        return kAssumptionViolation;
    } catch (const ConsensusNonTermination& e) {
        err << "nontermination: " << e.what() << '\n';
        for (std::size_t j = 0; j < e.snapshot().size(); ++j) {
            const auto& s = e.snapshot()[j];
            err << "  node " << j << ": y=" << s.y << " z=" << s.z << " y_s=" << s.y_s << " z_s=" << s.z_s
                << " M=" << s.M << " m=" << s.m << '\n';
        }
        return kNonTermination;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

std::string delta_file_tag(const std::string& delta) {
    return "trace_delta_" + format_number(QuantizationLevel::parse(delta).value()) + ".csv";
}

} // namespace

int cmd_run(const ExperimentConfig& input, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = resolve(input);
        auto run = to_run_config(cfg, cfg.delta);
        validate(run);
        fs::create_directories(cfg.out_dir);
        write_effective_config(cfg, out);
        warn_alpha(run, err);

        std::ofstream trace_file;
        if (cfg.trace) {
            trace_file = open_output(fs::path(cfg.out_dir) / "consensus_trace.tsv");
            run.consensus_trace = &trace_file;
        }
        const auto trace = run_experiment(run, *cfg.x_star);

        auto csv = open_output(fs::path(cfg.out_dir) / "trace.csv");
        write_trace_csv(csv, trace);
        auto svg = open_output(fs::path(cfg.out_dir) / "residual.svg");
        write_log_plot_svg(svg, {{"delta = " + cfg.delta, trace.residuals()}}, "QuAGD residual");

        const int violations = report_audit(trace, err);
        out << "final residual " << format_number(trace.steps.back().residual) << " after " << cfg.max_iters
            << " iterations; audit violations: " << violations << '\n';
        return kSuccess;
    });
}

int cmd_sweep(const ExperimentConfig& input, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = resolve(input);
        if (cfg.deltas.empty()) throw ConfigError("sweep needs at least one quantization level");
        std::vector<double> deltas;
        std::set<double> seen;
        for (const auto& text : cfg.deltas) {
            const double d = QuantizationLevel::parse(text).value();
            if (!seen.insert(d).second) throw ConfigError("duplicate quantization level " + text);
            deltas.push_back(d);
        }
        const auto base = to_run_config(cfg, cfg.deltas.front());
        validate(base);
        fs::create_directories(cfg.out_dir);
        write_effective_config(cfg, out);
        warn_alpha(base, err);

        const auto report = delta_sweep(base, deltas, *cfg.x_star);

        std::vector<PlotSeries> curves;
        std::size_t failures = 0;
        for (std::size_t i = 0; i < report.entries.size(); ++i) {
            const auto& entry = report.entries[i];
            if (!entry.error.empty()) {
                ++failures;
                err << "delta " << cfg.deltas[i] << " failed: " << entry.error << '\n';
                continue;
            }
            auto csv = open_output(fs::path(cfg.out_dir) / delta_file_tag(cfg.deltas[i]));
            write_trace_csv(csv, *entry.trace);
            report_audit(*entry.trace, err);
            if (entry.quantization_dominated) {
                err << "note: delta " << cfg.deltas[i] << " is quantization-dominated (plateau at k <= 1)\n";
            }
            curves.push_back({"delta = " + cfg.deltas[i], entry.trace->residuals()});
        }
        auto csv = open_output(fs::path(cfg.out_dir) / "sweep.csv");
        write_sweep_csv(csv, report);
        auto svg = open_output(fs::path(cfg.out_dir) / "sweep.svg");
        write_log_plot_svg(svg, curves, "QuAGD residual by quantization level");

        write_sweep_csv(out, report);
        return failures == report.entries.size() ? kNonTermination : kSuccess;
    });
}

int cmd_theory(const ExperimentConfig& input, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        ExperimentConfig cfg = input;
        double L = 0.0;
        double mu = 0.0;
        if (cfg.theory_mu && cfg.theory_lipschitz) {
            L = *cfg.theory_lipschitz;
            mu = *cfg.theory_mu;
            if (!cfg.graph_file.empty()) cfg.nodes = load_graph(cfg).size();
        } else {
            cfg = resolve(cfg);
            const auto registry = CostRegistry::with_builtin_types();
            std::vector<CostPtr> costs;
            for (const auto& [node, record] : cfg.costs) costs.push_back(registry.create(record));
            const auto sums = summed_constants(costs);
            L = cfg.theory_lipschitz.value_or(sums.lipschitz);
            mu = cfg.theory_mu.value_or(sums.strong_convexity);
        }
        const auto n = static_cast<double>(cfg.nodes);
        double quant = 0.0;
        {
            const auto& text = cfg.delta;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), quant);
            if (ec != std::errc{} || ptr != text.data() + text.size() || quant < 0.0) {
                throw ConfigError("delta must be a nonnegative number for theory evaluation");
            }
        }

        const auto interval = step_size_interval(L, mu, n);
        nlohmann::ordered_json record;
        record["n"] = cfg.nodes;
        record["L"] = L;
        record["mu"] = mu;
        record["quant_delta"] = quant;
        record["alpha_lower"] = interval.lower;
        record["alpha_upper"] = interval.upper;
        record["interval_nonempty"] = interval.nonempty;
        record["sufficient_condition"] = interval.sufficient_condition;

        out << "n = " << format_number(n) << ", L = " << format_number(L) << ", mu = " << format_number(mu) << '\n';
        out << "step-size interval: (" << format_number(interval.lower) << ", " << format_number(interval.upper)
            << ")" << (interval.nonempty ? "" : " EMPTY") << '\n';
        out << "L < 3mu (sufficient for a nonempty interval): " << (interval.sufficient_condition ? "yes" : "no")
            << '\n';
        if (!interval.nonempty) {
            out << record.dump() << '\n';
            err << "assumption violated: step-size interval is empty\n";
            return kAssumptionViolation;
        }

        const double alpha = input.alpha.value_or(interval.midpoint());
        const double young_upper = young_delta_upper(alpha, L, mu, n);
        const double young = cfg.theory_young_delta.value_or(young_upper / 2.0);
        const auto c = compute_theta_and_floor(alpha, young, L, mu, n, quant);

        out << "alpha: " << format_number(alpha) << '\n';
        out << "Young parameter interval: (0, " << format_number(young_upper) << ")\n";
        out << "Young parameter: " << format_number(young) << '\n';
        out << "theta: " << format_number(c.theta) << '\n';
        out << "error floor: " << format_number(c.error_floor) << '\n';
        out << "asymptotic bound on |x_hat - x*|^2: " << format_number(c.asymptotic_bound) << '\n';

        record["alpha"] = alpha;
        record["young_delta_upper"] = young_upper;
        record["young_delta"] = young;
        record["alpha_hat"] = c.alpha_hat;
        record["theta"] = c.theta;
        record["error_floor"] = c.error_floor;
        record["asymptotic_bound"] = c.asymptotic_bound;
        out << record.dump() << '\n';
        return kSuccess;
    });
}

namespace {

struct Overrides {
    std::string config_file;
    std::size_t nodes = 0;
    double edge_prob = 0.0;
    std::string graph_file;
    std::size_t d_bound = 0;
    std::string delta;
    std::vector<std::string> deltas;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::size_t max_iters = 0;
    std::int64_t max_rounds = 0;
    std::string out_dir;
    bool trace = false;
    double mu = 0.0;
    double lipschitz = 0.0;
    double young_delta = 0.0;
};

class OptionSet {
public:
    OptionSet(CLI::App& app, Overrides& o, bool theory) {
        app.add_option("--config", o.config_file, "Configuration file")->check(CLI::ExistingFile);
        track(app.add_option("--nodes", o.nodes, "Node count of the generated graph"), [&o](ExperimentConfig& c) { c.nodes = o.nodes; });
        track(app.add_option("--edge-prob", o.edge_prob, "Extra edge probability of the generated graph"),
              [&o](ExperimentConfig& c) { c.edge_prob = o.edge_prob; });
        track(app.add_option("--graph-file", o.graph_file, "Edge-list file instead of a generated graph"),
              [&o](ExperimentConfig& c) { c.graph_file = o.graph_file; });
        track(app.add_option("--d-bound", o.d_bound, "Diameter bound (0 = exact diameter)"),
              [&o](ExperimentConfig& c) { c.d_bound = o.d_bound; });
        track(app.add_option("--delta", o.delta, "Quantization level"), [&o](ExperimentConfig& c) { c.delta = o.delta; });
        track(app.add_option("--deltas", o.deltas, "Quantization levels for a sweep")->delimiter(','),
              [&o](ExperimentConfig& c) { c.deltas = o.deltas; });
        track(app.add_option("--alpha", o.alpha, "Step size (default: interval midpoint)"),
              [&o](ExperimentConfig& c) { c.alpha = o.alpha; });
        track(app.add_option("--seed", o.seed, "Master seed"), [&o](ExperimentConfig& c) { c.seed = o.seed; });
        track(app.add_option("--max-iters", o.max_iters, "Outer iterations K"),
              [&o](ExperimentConfig& c) { c.max_iters = o.max_iters; });
        track(app.add_option("--max-rounds", o.max_rounds, "Round budget per consensus call (0 = default)"),
              [&o](ExperimentConfig& c) { c.max_rounds = o.max_rounds; });
        track(app.add_option("--out", o.out_dir, "Output directory"), [&o](ExperimentConfig& c) { c.out_dir = o.out_dir; });
        track(app.add_flag("--trace", o.trace, "Write the per-round consensus trace"),
              [&o](ExperimentConfig& c) { c.trace = o.trace; });
        if (theory) {
            track(app.add_option("--mu", o.mu, "Summed strong-convexity constant"),
                  [&o](ExperimentConfig& c) { c.theory_mu = o.mu; });
            track(app.add_option("--lipschitz", o.lipschitz, "Summed Lipschitz constant"),
                  [&o](ExperimentConfig& c) { c.theory_lipschitz = o.lipschitz; });
            track(app.add_option("--young-delta", o.young_delta, "Young parameter (default: half its supremum)"),
                  [&o](ExperimentConfig& c) { c.theory_young_delta = o.young_delta; });
        }
    }

    ExperimentConfig build(const Overrides& o) const {
        ExperimentConfig cfg;
        if (!o.config_file.empty()) {
            std::ifstream in(o.config_file);
            if (!in) throw ConfigError("cannot open config file '" + o.config_file + "'");
            cfg = parse_config(in, o.config_file);
        }
        for (const auto& [opt, apply] : tracked_) {
            if (opt->count() > 0) apply(cfg);
        }
        return cfg;
    }

private:
    void track(CLI::Option* opt, std::function<void(ExperimentConfig&)> apply) {
        tracked_.emplace_back(opt, std::move(apply));
    }

    std::vector<std::pair<CLI::Option*, std::function<void(ExperimentConfig&)>>> tracked_;
};

} // namespace

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Distributed gradient descent with quantized finite-time averaging"};
    app.require_subcommand(1);

    Overrides run_o, sweep_o, theory_o;
    auto* run = app.add_subcommand("run", "Run one experiment and write trace.csv / residual.svg");
    OptionSet run_opts(*run, run_o, false);
    auto* sweep = app.add_subcommand("sweep", "Run one experiment per quantization level");
    OptionSet sweep_opts(*sweep, sweep_o, false);
    auto* theory = app.add_subcommand("theory", "Evaluate step-size interval, contraction factor and error floor");
    OptionSet theory_opts(*theory, theory_o, true);

    auto* gen = app.add_subcommand("graph-gen", "Write a random strongly connected digraph as an edge list");
    std::size_t gen_nodes = 20;
    double gen_prob = 0.2;
    std::uint64_t gen_seed = 42;
    std::string gen_out;
    gen->add_option("--nodes", gen_nodes, "Node count");
    gen->add_option("--edge-prob", gen_prob, "Extra edge probability");
    gen->add_option("--seed", gen_seed, "Master seed");
    gen->add_option("--out", gen_out, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    if (*gen) {
        return guarded(err, [&] {
            if (gen_nodes < 2) throw ConfigError("nodes must be at least 2");
            if (!(gen_prob >= 0.0 && gen_prob <= 1.0)) throw ConfigError("edge-prob must lie in [0, 1]");
            const auto g = generate_random_strongly_connected(gen_nodes, gen_prob, tagged_seed(gen_seed, StreamTag::graph));
            if (gen_out.empty()) {
                write_edge_list(out, g);
            } else {
                auto file = open_output(gen_out);
                write_edge_list(file, g);
                out << "wrote " << gen_out << ": n = " << g.size() << ", edges = " << g.edge_count()
                    << ", diameter = " << diameter(g) << '\n';
            }
            return kSuccess;
        });
    }

    ExperimentConfig cfg;
    const int status = guarded(err, [&] {
        if (*run) cfg = run_opts.build(run_o);
        if (*sweep) cfg = sweep_opts.build(sweep_o);
        if (*theory) cfg = theory_opts.build(theory_o);
        return kSuccess;
    });
    if (status != kSuccess) return status;

    if (*run) return cmd_run(cfg, out, err);
    if (*sweep) return cmd_sweep(cfg, out, err);
    return cmd_theory(cfg, out, err);
}

} // namespace quagd::cli
