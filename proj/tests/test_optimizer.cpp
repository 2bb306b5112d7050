#include <doctest.h>

#include <cmath>
#include <memory>

#include "quagd/cost.hpp"
#include "quagd/errors.hpp"
#include "quagd/harness.hpp"
#include "quagd/optimizer.hpp"

using namespace quagd;

namespace {

OptRunConfig identical_quadratics(std::size_t n, double c, double x0, double delta, std::size_t iters) {
    OptRunConfig cfg;
    cfg.graph = complete_digraph(n);
    for (std::size_t i = 0; i < n; ++i) cfg.costs.push_back(std::make_shared<QuadraticCost>(1.0, c));
    cfg.x0.assign(n, x0);
    cfg.alpha = 0.75;
    cfg.delta = QuantizationLevel(delta);
    cfg.max_iters = iters;
    cfg.seed = 9;
    return cfg;
}

} // namespace

TEST_CASE("gradient step examples") {
    CHECK(gradient_step(4.0, 0.5, QuadraticCost(1.0, 2.0)) == 3.0);
    CHECK(gradient_step(2.0, 0.5, QuadraticCost(1.0, 2.0)) == 2.0);
    CHECK(gradient_step(0.0, 0.1, QuadraticCost(2.0, 5.0)) == doctest::Approx(1.0));
}

TEST_CASE("analytic gradients match central differences") {
    Rng rng(12);
    const QuadraticCost quad(1.7, 3.2);
    const LogCoshCost lc(0.8, 2.5, -1.0);
    for (int t = 0; t < 100; ++t) {
        const double x = rng.uniform(-10, 10);
        const double h = 1e-5;
        for (const CostFunction* f : {static_cast<const CostFunction*>(&quad), static_cast<const CostFunction*>(&lc)}) {
            const double fd = (f->evaluate(x + h) - f->evaluate(x - h)) / (2 * h);
            CHECK(std::abs(fd - f->gradient(x)) <= 1e-6 * std::max(1.0, std::abs(f->gradient(x))));
        }
    }
    CHECK(lc.lipschitz() == doctest::Approx(3.3));
    CHECK(lc.strong_convexity() == doctest::Approx(0.8));
}

TEST_CASE("cost records parse, format and build") {
    const auto rec = parse_cost_record("{type: \"quadratic\", beta: 1, center: 2.5}");
    CHECK(rec.type == "quadratic");
    CHECK(rec.params.at("center") == 2.5);
    CHECK(parse_cost_record(format_cost_record(rec)).params == rec.params);

    const auto registry = CostRegistry::with_builtin_types();
    const auto f = registry.create(rec);
    CHECK(f->gradient(3.5) == doctest::Approx(1.0));
    CHECK(to_record(*f).params == rec.params);

    CHECK_THROWS_AS(registry.create({"cubic", {}}), ConfigError);
    CHECK_THROWS_AS(registry.create({"quadratic", {{"beta", 1.0}}}), ConfigError);
    CHECK_THROWS_AS(registry.create({"quadratic", {{"beta", 1.0}, {"center", 0.0}, {"gamma", 1.0}}}), ConfigError);
    CHECK_THROWS_AS(registry.create({"quadratic", {{"beta", -1.0}, {"center", 0.0}}}), ConfigError);
    CHECK_THROWS_AS(parse_cost_record("{type: quadratic"), ConfigError);
}

TEST_CASE("quadratic minimizer and summed constants") {
    std::vector<CostPtr> costs{std::make_shared<QuadraticCost>(1.0, 2.0), std::make_shared<QuadraticCost>(3.0, 6.0)};
    CHECK(*quadratic_minimizer(costs) == doctest::Approx(5.0));
    const auto sums = summed_constants(costs);
    CHECK(sums.lipschitz == 4.0);
    CHECK(sums.strong_convexity == 4.0);
    costs.push_back(std::make_shared<LogCoshCost>(1.0, 1.0, 0.0));
    CHECK_FALSE(quadratic_minimizer(costs).has_value());
}

TEST_CASE("zero iterations returns only the initial state") {
    auto cfg = identical_quadratics(3, 2.0, 5.0, 0.01, 0);
    const auto trace = quagd_run(cfg);
    REQUIRE(trace.steps.size() == 1);
    CHECK(trace.steps[0].estimates == cfg.x0);
}

TEST_CASE("one outer step on identical inputs is the quantized gradient step") {
    auto cfg = identical_quadratics(4, 2.0, 5.0, 0.01, 1);
    const auto trace = quagd_run(cfg);
    REQUIRE(trace.steps.size() == 2);
    const double stepped = 5.0 - cfg.alpha * (5.0 - 2.0);
    const double expected = dequantize(quantize_floor(stepped, cfg.delta), cfg.delta);
    for (double x : trace.steps[1].estimates) CHECK(x == expected);
    CHECK(trace.steps[1].inner_rounds == 1);
}

TEST_CASE("estimates stay on the quantization grid") {
    const auto cfg = make_reference_instance(4, 0.01);
    const auto trace = quagd_run(cfg);
    CHECK(trace.steps.size() == cfg.max_iters + 1);
    for (std::size_t k = 1; k < trace.steps.size(); ++k) {
        const auto& s = trace.steps[k];
        for (double x : s.estimates) CHECK(x == dequantize(s.consensus_count, cfg.delta));
        CHECK(s.inner_rounds % static_cast<std::int64_t>(effective_d_bound(cfg)) == 0);
    }
}

TEST_CASE("runs are reproducible for a fixed seed") {
    const auto cfg = make_reference_instance(8, 0.01);
    const auto a = quagd_run(cfg);
    const auto b = quagd_run(cfg);
    for (std::size_t k = 0; k < a.steps.size(); ++k) {
        CHECK(a.steps[k].estimates == b.steps[k].estimates);
        CHECK(a.steps[k].inner_rounds == b.steps[k].inner_rounds);
    }
}

TEST_CASE("configuration validation") {
    auto cfg = identical_quadratics(3, 2.0, 5.0, 0.01, 2);
    cfg.x0[1] = -1.0;
    CHECK_THROWS_AS(quagd_run(cfg), ConfigError);

    cfg = identical_quadratics(3, 2.0, 5.0, 0.01, 2);
    cfg.costs.pop_back();
    CHECK_THROWS_AS(quagd_run(cfg), ConfigError);

    cfg = identical_quadratics(3, 2.0, 5.0, 0.01, 2);
    cfg.graph = directed_path(3);
    try {
        (void)quagd_run(cfg);
        FAIL("expected AssumptionViolation");
    } catch (const AssumptionViolation& e) {
        CHECK(std::string(e.what()).find("from node 1 to node 0") != std::string::npos);
    }

    cfg = identical_quadratics(4, 2.0, 5.0, 0.01, 2);
    cfg.graph = directed_cycle(4);
    cfg.d_bound = 2;
    CHECK_THROWS_AS(quagd_run(cfg), AssumptionViolation);
    cfg.d_bound = 5;
    CHECK(quagd_run(cfg).steps.size() == 3);
}

TEST_CASE("non-termination reports the outer step") {
    auto cfg = make_reference_instance(2, 0.01);
    cfg.max_rounds = 1;
    try {
        (void)quagd_run(cfg);
        FAIL("expected non-termination");
    } catch (const OuterStepNonTermination& e) {
        CHECK(e.outer_step() == 0);
        CHECK(std::string(e.what()).find("outer step 0") != std::string::npos);
    }
}

TEST_CASE("step size membership") {
    const auto cfg = make_reference_instance(1, 0.01);
    CHECK(cfg.alpha == doctest::Approx(0.75));
    CHECK(alpha_in_interval(cfg));
    auto off = cfg;
    off.alpha = 1.2;
    CHECK_FALSE(alpha_in_interval(off));
}
