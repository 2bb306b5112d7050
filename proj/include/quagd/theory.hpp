#pragma once

// Step-size interval, Young-parameter interval, contraction factor and
// quantization error floor for gradient descent over quantized averaging.
//
// Everything here is templated on the scalar so the same expressions can be
// evaluated in double or exactly in Rational.

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

#include "quagd/errors.hpp"

namespace quagd {

using Rational = boost::rational<std::int64_t>;

template <typename Scalar>
struct StepSizeInterval {
    Scalar lower{};
    Scalar upper{};
    bool nonempty = false;
    /// L < 3μ, the sufficient condition for a nonempty interval.
    bool sufficient_condition = false;

    bool contains(const Scalar& alpha) const { return lower < alpha && alpha < upper; }
    Scalar midpoint() const { return (lower + upper) / Scalar(2); }
};

/// (n(μ+L)/(4μL), 2n/(μ+L)) for summed constants L = ΣL_i, μ = Σμ_i.
template <typename Scalar>
StepSizeInterval<Scalar> step_size_interval(const Scalar& L, const Scalar& mu, const Scalar& n) {
    if (!(L > Scalar(0)) || !(mu > Scalar(0)) || !(n > Scalar(0))) {
        throw AssumptionViolation("step-size interval needs L, mu, n > 0");
    }
    StepSizeInterval<Scalar> out;
    out.lower = n * (mu + L) / (Scalar(4) * mu * L);
    out.upper = Scalar(2) * n / (mu + L);
    out.nonempty = out.lower < out.upper;
    out.sufficient_condition = L < Scalar(3) * mu;
    return out;
}

/// Supremum of the admissible Young parameter δ at step size alpha:
/// n[4αμL − n(μ+L)] / (2α[n(μ+L) − 2αμL]). Throws AssumptionViolation when
/// alpha is not strictly inside the step-size interval.
template <typename Scalar>
Scalar young_delta_upper(const Scalar& alpha, const Scalar& L, const Scalar& mu, const Scalar& n) {
    const auto interval = step_size_interval(L, mu, n);
    if (!interval.contains(alpha)) {
        throw AssumptionViolation("step size lies outside the admissible interval");
    }
    const Scalar numerator = n * (Scalar(4) * alpha * mu * L - n * (mu + L));
    const Scalar denominator = Scalar(2) * alpha * (n * (mu + L) - Scalar(2) * alpha * mu * L);
    return numerator / denominator;
}

template <typename Scalar>
struct TheoryConstants {
    Scalar L{};
    Scalar mu{};
    Scalar alpha{};
    Scalar delta_young{};
    Scalar alpha_hat{};       ///< α / n
    Scalar theta{};           ///< per-step contraction of the squared centroid error
    Scalar error_floor{};     ///< additive O(Δ²) term per step
    /// error_floor / (1 − θ): limit of the unrolled recursion
    /// e_{k+1} <= θ e_k + floor, i.e. the geometric series Σ θ^i · floor.
    Scalar asymptotic_bound{};
};

/// θ = 2(1 + αδ/n)(1 − 2αμL/(n(μ+L))) and
/// floor = (8 + 32â²L² + 32âL²/δ)Δ² with â = α/n.
/// Throws AssumptionViolation unless δ > 0, Δ >= 0 and θ ∈ (0, 1).
template <typename Scalar>
TheoryConstants<Scalar> compute_theta_and_floor(const Scalar& alpha, const Scalar& delta_young, const Scalar& L,
                                                const Scalar& mu, const Scalar& n, const Scalar& quant_delta) {
    if (!(delta_young > Scalar(0))) throw AssumptionViolation("Young parameter must be positive");
    if (quant_delta < Scalar(0)) throw AssumptionViolation("quantization level must be nonnegative");
    if (!(n > Scalar(0)) || !(mu > Scalar(0)) || !(L > Scalar(0))) {
        throw AssumptionViolation("theory constants need L, mu, n > 0");
    }

    TheoryConstants<Scalar> c;
    c.L = L;
    c.mu = mu;
    c.alpha = alpha;
    c.delta_young = delta_young;
    c.alpha_hat = alpha / n;
    c.theta = Scalar(2) * (Scalar(1) + alpha * delta_young / n) *
              (Scalar(1) - Scalar(2) * alpha * mu * L / (n * (mu + L)));
    if (!(c.theta > Scalar(0) && c.theta < Scalar(1))) {
        throw AssumptionViolation("contraction factor falls outside (0, 1)");
    }
    const Scalar aL = c.alpha_hat * L;
    c.error_floor = (Scalar(8) + Scalar(32) * aL * aL + Scalar(32) * aL * L / delta_young) * quant_delta * quant_delta;
    c.asymptotic_bound = c.error_floor / (Scalar(1) - c.theta);
    return c;
}

/// Default parameter choice: α at the midpoint of its interval and δ at half
/// of its supremum. Throws AssumptionViolation if the interval is empty.
template <typename Scalar>
TheoryConstants<Scalar> default_theory(const Scalar& L, const Scalar& mu, const Scalar& n, const Scalar& quant_delta) {
    const auto interval = step_size_interval(L, mu, n);
    if (!interval.nonempty) throw AssumptionViolation("step-size interval is empty");
    const Scalar alpha = interval.midpoint();
    const Scalar delta_young = young_delta_upper(alpha, L, mu, n) / Scalar(2);
    return compute_theta_and_floor(alpha, delta_young, L, mu, n, quant_delta);
}

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }
inline double to_double(double v) { return v; }

} // namespace quagd
