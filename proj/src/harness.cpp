#include "quagd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <set>

#include "quagd/errors.hpp"
#include "quagd/report.hpp"
#include "quagd/rng.hpp"

namespace quagd {

namespace {

double mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Slack for evaluating real-valued bounds in double precision.
constexpr double kRoundingSlack = 1e-9;

} // namespace

double residual_error(std::span<const double> x, std::span<const double> x0, double x_star) {
    if (x.size() != x0.size()) throw std::invalid_argument("estimate and initial vectors differ in size");
    double sum = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double denom = x0[j] - x_star;
        if (denom == 0.0) {
            throw ConfigError("residual undefined: initial estimate of node " + std::to_string(j) +
                              " equals the optimum");
        }
        const double num = x[j] - x_star;
        sum += (num * num) / (denom * denom);
    }
    return std::sqrt(sum);
}

void observe(RunTrace& trace, double x_star) {
    if (trace.steps.empty()) return;
    const auto& x0 = trace.steps.front().estimates;
    for (auto& step : trace.steps) {
        step.residual = residual_error(step.estimates, x0, x_star);
        const double x_hat = mean(step.estimates);
        step.centroid_err = step.stepped.empty() ? 0.0 : std::abs(x_hat - mean(step.stepped));
        step.max_node_dev = 0.0;
        for (double xi : step.estimates) step.max_node_dev = std::max(step.max_node_dev, std::abs(xi - x_hat));
    }
}

RunTrace centralized_baseline(const OptRunConfig& cfg, std::optional<double> x_star) {
    const std::size_t n = cfg.costs.size();
    if (n == 0 || cfg.x0.size() != n) throw ConfigError("baseline needs one cost and one initial value per node");

    RunTrace trace;
    trace.nodes = n;
    trace.quantized = false;
    TraceStep initial;
    initial.estimates = cfg.x0;
    trace.steps.push_back(std::move(initial));

    for (std::size_t k = 0; k < cfg.max_iters; ++k) {
        const auto& x = trace.steps.back().estimates;
        std::vector<double> stepped(n);
        for (std::size_t i = 0; i < n; ++i) stepped[i] = gradient_step(x[i], cfg.alpha, *cfg.costs[i]);
        TraceStep step;
        step.k = k + 1;
        step.estimates.assign(n, mean(stepped));
        step.stepped = std::move(stepped);
        trace.steps.push_back(std::move(step));
    }
    if (x_star) observe(trace, *x_star);
    return trace;
}

RunTrace run_experiment(const OptRunConfig& cfg, double x_star) {
    auto trace = quagd_run(cfg);
    observe(trace, x_star);
    return trace;
}

double plateau_level(std::span<const double> residuals) {
    if (residuals.empty()) throw std::invalid_argument("plateau of an empty trace");
    const std::size_t count = std::max<std::size_t>(1, residuals.size() / 5);
    std::vector<double> tail(residuals.end() - static_cast<std::ptrdiff_t>(count), residuals.end());
    std::sort(tail.begin(), tail.end());
    const std::size_t mid = tail.size() / 2;
    return tail.size() % 2 == 1 ? tail[mid] : 0.5 * (tail[mid - 1] + tail[mid]);
}

std::size_t iterations_to_plateau(std::span<const double> residuals, double plateau) {
    for (std::size_t k = 0; k < residuals.size(); ++k) {
        if (residuals[k] <= 2.0 * plateau) return k;
    }
    return residuals.size();
}

SweepReport delta_sweep(const OptRunConfig& base, std::span<const double> deltas, double x_star) {
    if (deltas.empty()) throw ConfigError("sweep needs at least one quantization level");
    std::set<double> seen;
    for (double d : deltas) {
        if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("quantization levels must be positive");
        if (!seen.insert(d).second) throw ConfigError("duplicate quantization level " + format_number(d));
    }

    const auto sums = summed_constants(base.costs);
    const double n = static_cast<double>(base.graph.size());

    std::vector<std::future<RunTrace>> runs;
    runs.reserve(deltas.size());
    for (double d : deltas) {
        OptRunConfig cfg = base;
        cfg.delta = QuantizationLevel(d);
        cfg.consensus_trace = nullptr;
        runs.push_back(std::async(std::launch::async, [cfg = std::move(cfg), x_star] {
            return run_experiment(cfg, x_star);
        }));
    }

    SweepReport report;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        SweepEntry entry;
        entry.delta = deltas[i];
        try {
            entry.trace = runs[i].get();
            const auto residuals = entry.trace->residuals();
            entry.plateau = plateau_level(residuals);
            entry.iters_to_plateau = iterations_to_plateau(residuals, entry.plateau);
            entry.quantization_dominated = entry.iters_to_plateau <= 1;
        } catch (const std::exception& e) {
            entry.error = e.what();
            entry.plateau = std::numeric_limits<double>::quiet_NaN();
        }
        try {
            const double upper = young_delta_upper(base.alpha, sums.lipschitz, sums.strong_convexity, n);
            entry.theory_floor = compute_theta_and_floor(base.alpha, upper / 2.0, sums.lipschitz,
                                                         sums.strong_convexity, n, deltas[i])
                                     .asymptotic_bound;
        } catch (const AssumptionViolation&) {
            entry.theory_floor = std::numeric_limits<double>::quiet_NaN();
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::conservation: return "conservation";
    case ViolationKind::accuracy: return "accuracy";
    case ViolationKind::centroid_gap: return "centroid_gap";
    case ViolationKind::node_deviation: return "node_deviation";
    case ViolationKind::agreement: return "agreement";
    }
    return "unknown";
}

AuditReport audit_invariants(const RunTrace& trace) {
    AuditReport report;
    const double delta = trace.delta;
    const auto n = static_cast<std::int64_t>(trace.nodes);

    for (const auto& step : trace.steps) {
        for (const auto& v : step.conservation_violations) {
            report.violations.push_back({ViolationKind::conservation, step.k, v.round,
                                         "y total " + std::to_string(v.y_total) + " (expected " +
                                             std::to_string(v.y_expected) + "), z total " +
                                             std::to_string(v.z_total) + " (expected " +
                                             std::to_string(v.z_expected) + ")"});
        }
        if (step.k == 0) continue;

        if (trace.quantized) {
            const std::int64_t gap = n * step.consensus_count - step.quantized_sum;
            if (gap > n || gap < -n) {
                report.violations.push_back({ViolationKind::accuracy, step.k, -1,
                                             "n*m - sum(q) = " + std::to_string(gap)});
            }
        }
        if (std::adjacent_find(step.estimates.begin(), step.estimates.end(), std::not_equal_to<>()) !=
            step.estimates.end()) {
            report.violations.push_back({ViolationKind::agreement, step.k, -1, "node outputs differ"});
        }

        report.max_centroid_err = std::max(report.max_centroid_err, step.centroid_err);
        report.max_node_dev = std::max(report.max_node_dev, step.max_node_dev);
        if (step.centroid_err > 2.0 * delta * (1.0 + kRoundingSlack)) {
            report.violations.push_back({ViolationKind::centroid_gap, step.k, -1,
                                         "|x_hat - z_hat| = " + format_number(step.centroid_err)});
        }
        if (step.max_node_dev > 4.0 * delta * (1.0 + kRoundingSlack)) {
            report.violations.push_back({ViolationKind::node_deviation, step.k, -1,
                                         "max |x_i - x_hat| = " + format_number(step.max_node_dev)});
        }
    }
    return report;
}

OptRunConfig make_reference_instance(std::uint64_t seed, double delta, std::size_t n, double edge_prob,
                                     std::size_t max_iters) {
    OptRunConfig cfg;
    cfg.graph = generate_random_strongly_connected(n, edge_prob, tagged_seed(seed, StreamTag::graph));

    Rng cost_rng(tagged_seed(seed, StreamTag::costs));
    for (std::size_t i = 0; i < n; ++i) {
        cfg.costs.push_back(std::make_shared<QuadraticCost>(1.0, cost_rng.uniform(0.0, 10.0)));
    }
    Rng init_rng(tagged_seed(seed, StreamTag::initial));
    for (std::size_t i = 0; i < n; ++i) cfg.x0.push_back(init_rng.uniform(0.0, 10.0));

    const auto sums = summed_constants(cfg.costs);
    cfg.alpha = step_size_interval(sums.lipschitz, sums.strong_convexity, static_cast<double>(n)).midpoint();
    cfg.delta = QuantizationLevel(delta);
    cfg.max_iters = max_iters;
    cfg.seed = seed;
    return cfg;
}

} // namespace quagd
