#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace quagd {

/// Local objective f_i: R -> R, L-smooth and μ-strongly convex.
class CostFunction {
public:
    virtual ~CostFunction() = default;

    virtual double evaluate(double x) const = 0;
    virtual double gradient(double x) const = 0;
    virtual double lipschitz() const = 0;
    virtual double strong_convexity() const = 0;

    /// Registry key, e.g. "quadratic".
    virtual std::string type_name() const = 0;
    /// Parameters as stored in a cost record.
    virtual std::map<std::string, double> parameters() const = 0;
};

using CostPtr = std::shared_ptr<const CostFunction>;

/// f(x) = ½β(x − c)².
class QuadraticCost final : public CostFunction {
public:
    QuadraticCost(double beta, double center);

    double evaluate(double x) const override;
    double gradient(double x) const override { return beta_ * (x - center_); }
    double lipschitz() const override { return beta_; }
    double strong_convexity() const override { return beta_; }
    std::string type_name() const override { return "quadratic"; }
    std::map<std::string, double> parameters() const override;

    double beta() const noexcept { return beta_; }
    double center() const noexcept { return center_; }

private:
    double beta_;
    double center_;
};

/// f(x) = ½μ(x − c)² + w·log cosh(x − c). Curvature lies in [μ, μ + w].
class LogCoshCost final : public CostFunction {
public:
    LogCoshCost(double mu, double weight, double center);

    double evaluate(double x) const override;
    double gradient(double x) const override;
    double lipschitz() const override { return mu_ + weight_; }
    double strong_convexity() const override { return mu_; }
    std::string type_name() const override { return "logcosh"; }
    std::map<std::string, double> parameters() const override;

private:
    double mu_;
    double weight_;
    double center_;
};

/// `{type: "quadratic", beta: 1, center: 2.5}`
struct CostRecord {
    std::string type;
    std::map<std::string, double> params;
};

/// Throws ConfigError on malformed records.
CostRecord parse_cost_record(std::string_view text);
std::string format_cost_record(const CostRecord& record);
CostRecord to_record(const CostFunction& f);

/// Name-keyed factories for cost types. The default registry knows
/// "quadratic" (beta, center) and "logcosh" (mu, weight, center).
class CostRegistry {
public:
    using Factory = std::function<CostPtr(const std::map<std::string, double>&)>;

    void add(std::string name, Factory factory);
    bool contains(std::string_view name) const;
    /// Throws ConfigError for unknown types or missing/extra parameters.
    CostPtr create(const CostRecord& record) const;

    static CostRegistry with_builtin_types();

private:
    std::map<std::string, Factory, std::less<>> factories_;
};

/// Σβ_i c_i / Σβ_i when every cost is quadratic, otherwise nullopt.
std::optional<double> quadratic_minimizer(std::span<const CostPtr> costs);

struct SummedConstants {
    double lipschitz = 0.0;         ///< L = Σ L_i
    double strong_convexity = 0.0;  ///< μ = Σ μ_i
};

SummedConstants summed_constants(std::span<const CostPtr> costs);

} // namespace quagd
