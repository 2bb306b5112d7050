#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quagd/optimizer.hpp"
#include "quagd/theory.hpp"
#include "quagd/trace.hpp"

namespace quagd {

/// √(Σ_j (x_j − x*)² / (x0_j − x*)²). Throws ConfigError naming the first
/// node whose initial value equals x*.
double residual_error(std::span<const double> x, std::span<const double> x0, double x_star);

/// Fills residual, |x̂ − ẑ| and max_i |x_i − x̂| for every step.
void observe(RunTrace& trace, double x_star);

/// Unquantized exact-averaging reference: x_i^{[k+1]} = (1/n)Σ_i (x_i^{[k]} − α∇f_i(x_i^{[k]})),
/// which is centralized gradient descent on Σ f_i from k = 1 on. Uses only
/// costs, x0, alpha and max_iters (no graph). Observer fields are filled when
/// x_star is given.
RunTrace centralized_baseline(const OptRunConfig& cfg, std::optional<double> x_star = std::nullopt);

/// quagd_run followed by observe().
RunTrace run_experiment(const OptRunConfig& cfg, double x_star);

/// Median of the final 20% of values (at least one value).
double plateau_level(std::span<const double> residuals);

/// First k whose residual is within 2× the plateau.
std::size_t iterations_to_plateau(std::span<const double> residuals, double plateau);

struct SweepEntry {
    double delta = 0.0;
    std::optional<RunTrace> trace;
    std::string error;  ///< non-empty when the run failed
    double plateau = 0.0;
    std::size_t iters_to_plateau = 0;
    /// Asymptotic bound on ‖x̂ − x*‖² from the theory constants (NaN if the
    /// parameters are outside the admissible intervals).
    double theory_floor = 0.0;
    /// The plateau is reached at k <= 1: quantization dominates the run.
    bool quantization_dominated = false;
};

struct SweepReport {
    std::vector<SweepEntry> entries;
};

/// Runs one experiment per Δ with the shared master seed. Runs execute
/// concurrently and each owns its state; failures are recorded per entry.
/// Throws ConfigError for non-positive or duplicate deltas.
SweepReport delta_sweep(const OptRunConfig& base, std::span<const double> deltas, double x_star);

enum class ViolationKind { conservation, accuracy, centroid_gap, node_deviation, agreement };

std::string to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::size_t k = 0;
    std::int64_t round = -1;  ///< protocol round for conservation violations
    std::string detail;
};

struct AuditReport {
    std::vector<Violation> violations;
    double max_centroid_err = 0.0;
    double max_node_dev = 0.0;

    bool clean() const noexcept { return violations.empty(); }
};

/// Checks an observed quantized trace for: mass conservation, averaging
/// accuracy |n·m − Σ⌊z_i/Δ⌋| <= n (exact integers), |x̂ − ẑ| <= 2Δ,
/// max_i |x_i − x̂| <= 4Δ, and agreement of all node outputs (k >= 1).
AuditReport audit_invariants(const RunTrace& trace);

/// The reference experiment: n nodes on a random strongly connected digraph,
/// f_i = ½(x − c_i)² with c_i ~ U[0, 10], x_i^{[0]} ~ U[0, 10], α at the
/// midpoint of its interval.
OptRunConfig make_reference_instance(std::uint64_t seed, double delta = 0.01, std::size_t n = 20,
                                     double edge_prob = 0.2, std::size_t max_iters = 60);

} // namespace quagd
