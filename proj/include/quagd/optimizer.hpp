#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "quagd/consensus.hpp"
#include "quagd/cost.hpp"
#include "quagd/graph.hpp"
#include "quagd/quantizer.hpp"
#include "quagd/trace.hpp"

namespace quagd {

/// x − α∇f(x).
double gradient_step(double x, double alpha, const CostFunction& f);

struct OptRunConfig {
    Digraph graph{2};
    std::vector<CostPtr> costs;
    double alpha = 0.0;
    QuantizationLevel delta{1.0};
    /// Diameter bound D'; 0 means "use diameter(graph)".
    std::size_t d_bound = 0;
    std::vector<double> x0;
    std::size_t max_iters = 0;
    std::uint64_t seed = 0;
    /// Round budget per consensus call; 0 selects the protocol default.
    std::int64_t max_rounds = 0;
    bool audit = true;
    std::ostream* consensus_trace = nullptr;
    /// Fault-injection hook forwarded to every consensus call (outer step k, round, in-flight messages).
    std::function<void(std::size_t k, std::int64_t round, std::vector<MassMessage>& in_flight)> tamper;
};

/// Checks sizes, x0 >= 0, finiteness, strong connectivity and the diameter
/// bound. Throws ConfigError or AssumptionViolation.
void validate(const OptRunConfig& cfg);

/// Diameter bound that quagd_run will use.
std::size_t effective_d_bound(const OptRunConfig& cfg);

/// True when cfg.alpha lies strictly inside the step-size interval for the
/// summed cost constants.
bool alpha_in_interval(const OptRunConfig& cfg);

/// Consensus failed to stop at outer step `outer_step`.
class OuterStepNonTermination : public ConsensusNonTermination {
public:
    OuterStepNonTermination(std::size_t outer_step, const ConsensusNonTermination& inner);
    std::size_t outer_step() const noexcept { return outer_step_; }
    const char* what() const noexcept override { return message_.c_str(); }

private:
    std::size_t outer_step_;
    std::string message_;
};

/// Quantized averaged gradient descent: for k = 0..K−1 every node takes a
/// local gradient step and all nodes then run the quantized averaging
/// protocol on the stepped values. The returned trace has K + 1 steps with
/// raw simulation data; observer diagnostics are left for the harness.
///
/// An alpha outside the admissible interval is allowed (see alpha_in_interval).
RunTrace quagd_run(const OptRunConfig& cfg);

} // namespace quagd
