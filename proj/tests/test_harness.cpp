#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "quagd/errors.hpp"
#include "quagd/harness.hpp"
#include "quagd/report.hpp"

using namespace quagd;

namespace {

double centroid(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

TEST_CASE("residual examples") {
    const std::vector<double> x0(20, 1.0);
    CHECK(residual_error(x0, x0, 0.0) == doctest::Approx(std::sqrt(20.0)));
    CHECK(residual_error(std::vector<double>(20, 0.0), x0, 0.0) == 0.0);
    CHECK(residual_error(std::vector<double>{1.5, 2.0}, std::vector<double>{2.0, 3.0}, 1.0) ==
          doctest::Approx(std::sqrt(0.25 + 0.25)));
    CHECK(residual_error(std::vector<double>{1.5, 2.0}, std::vector<double>{2.0, 3.0}, 1.0) ==
          doctest::Approx(0.7071).epsilon(1e-4));
}

TEST_CASE("residual rejects a zero denominator and names the node") {
    try {
        (void)residual_error(std::vector<double>{1, 2, 3}, std::vector<double>{1, 5, 6}, 5.0);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("node 1") != std::string::npos);
    }
}

TEST_CASE("residual is invariant under node permutation") {
    Rng rng(4);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + rng.uniform_index(20);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(std::span(perm));
        std::vector<double> x(n), x0(n), px(n), px0(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.uniform(0, 10);
            x0[i] = rng.uniform(11, 20);
        }
        for (std::size_t i = 0; i < n; ++i) {
            px[i] = x[perm[i]];
            px0[i] = x0[perm[i]];
        }
        CHECK(residual_error(x, x0, 5.0) == doctest::Approx(residual_error(px, px0, 5.0)).epsilon(1e-12));
    }
}

TEST_CASE("baseline on identical quadratics is scalar gradient descent") {
    OptRunConfig cfg;
    const double c = 4.0;
    for (int i = 0; i < 3; ++i) cfg.costs.push_back(std::make_shared<QuadraticCost>(1.0, c));
    cfg.x0 = {2.0, 2.0, 2.0};
    cfg.alpha = 0.5;
    cfg.max_iters = 10;
    const auto trace = centralized_baseline(cfg, c + 1.0);
    double x = 2.0;
    for (std::size_t k = 1; k < trace.steps.size(); ++k) {
        x = (1.0 - 0.5) * x + 0.5 * c;
        for (double v : trace.steps[k].estimates) CHECK(v == doctest::Approx(x));
    }
    CHECK(trace.steps.size() == 11);
    CHECK_FALSE(trace.quantized);
}

TEST_CASE("baseline edge cases") {
    OptRunConfig one;
    one.costs.push_back(std::make_shared<QuadraticCost>(2.0, 1.0));
    one.x0 = {5.0};
    one.alpha = 0.25;
    one.max_iters = 3;
    const auto t1 = centralized_baseline(one);
    CHECK(t1.steps[1].estimates[0] == doctest::Approx(5.0 - 0.25 * 2.0 * 4.0));
    CHECK(t1.steps[3].estimates[0] == doctest::Approx(1.0 + 4.0 * 0.125));

    OptRunConfig frozen = one;
    frozen.alpha = 0.0;
    const auto t2 = centralized_baseline(frozen);
    for (const auto& s : t2.steps) CHECK(s.estimates[0] == 5.0);

    frozen.x0.clear();
    CHECK_THROWS_AS(centralized_baseline(frozen), ConfigError);
}

TEST_CASE("plateau statistics") {
    std::vector<double> r{10, 5, 2, 1, 0.5, 0.3, 0.2, 0.21, 0.19, 0.2};
    CHECK(plateau_level(r) == doctest::Approx(0.195));  // median of the last two
    CHECK(iterations_to_plateau(r, plateau_level(r)) == 5);
    CHECK(plateau_level(std::vector<double>{3.0}) == 3.0);
    CHECK(iterations_to_plateau(std::vector<double>{1.0, 1.0}, 0.1) == 2);
}

TEST_CASE("reference instance starts at the expected residual") {
    const auto cfg = make_reference_instance(1, 0.01);
    CHECK(cfg.graph.size() == 20);
    CHECK(is_strongly_connected(cfg.graph));
    const double x_star = *quadratic_minimizer(cfg.costs);
    const auto trace = run_experiment(cfg, x_star);
    CHECK(trace.steps.front().residual == doctest::Approx(std::sqrt(20.0)));
    CHECK(trace.steps.back().residual < 0.5);
}

TEST_CASE("audit is clean on reference runs") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        for (double delta : {0.1, 0.01}) {
            const auto cfg = make_reference_instance(seed, delta);
            const auto trace = run_experiment(cfg, *quadratic_minimizer(cfg.costs));
            const auto audit = audit_invariants(trace);
            CHECK(audit.clean());
            CHECK(audit.max_centroid_err <= 2 * delta * (1 + 1e-9));
            CHECK(audit.max_node_dev <= 4 * delta * (1 + 1e-9));
        }
    }
}

TEST_CASE("audit localizes injected faults") {
    auto cfg = make_reference_instance(6, 0.01);
    cfg.max_iters = 5;
    cfg.tamper = [](std::size_t k, std::int64_t round, std::vector<MassMessage>& in_flight) {
        if (k == 3 && round == 0 && !in_flight.empty()) in_flight.front().c_z += 1;
    };
    const auto x_star = *quadratic_minimizer(cfg.costs);
    try {
        const auto trace = run_experiment(cfg, x_star);
        const auto audit = audit_invariants(trace);
        REQUIRE_FALSE(audit.clean());
        CHECK(audit.violations.front().kind == ViolationKind::conservation);
        CHECK(audit.violations.front().k == 4);
        CHECK(audit.violations.front().round == 0);
    } catch (const ConsensusNonTermination&) {
        // extra z can also prevent the stop; the fault is still surfaced
    }

    auto clean = make_reference_instance(6, 0.01);
    clean.max_iters = 5;
    auto trace = run_experiment(clean, x_star);
    trace.steps[2].estimates[1] += clean.delta.value();
    trace.steps[3].consensus_count += 3;
    observe(trace, x_star);
    const auto audit = audit_invariants(trace);
    const auto has = [&](ViolationKind kind, std::size_t k) {
        return std::any_of(audit.violations.begin(), audit.violations.end(),
                           [&](const Violation& v) { return v.kind == kind && v.k == k; });
    };
    CHECK(has(ViolationKind::agreement, 2));
    CHECK(has(ViolationKind::accuracy, 3));
}

TEST_CASE("halving the quantization level halves the runtime bounds") {
    const auto cfg = make_reference_instance(3, 0.02);
    auto half = cfg;
    half.delta = QuantizationLevel(0.01);
    const auto x_star = *quadratic_minimizer(cfg.costs);
    const auto a = audit_invariants(run_experiment(cfg, x_star));
    const auto b = audit_invariants(run_experiment(half, x_star));
    CHECK(a.clean());
    CHECK(b.clean());
    CHECK(b.max_centroid_err <= 0.02 * (1 + 1e-9));
    CHECK(b.max_node_dev <= 0.04 * (1 + 1e-9));
}

TEST_CASE("sweep behaviour") {
    const auto cfg = make_reference_instance(2, 0.01);
    const auto x_star = *quadratic_minimizer(cfg.costs);

    const std::vector<double> one{0.01};
    const auto single = delta_sweep(cfg, one, x_star);
    REQUIRE(single.entries.size() == 1);
    CHECK(single.entries[0].error.empty());
    CHECK(std::isfinite(single.entries[0].theory_floor));

    const std::vector<double> levels{0.1, 0.01, 0.001};
    const auto a = delta_sweep(cfg, levels, x_star);
    const auto b = delta_sweep(cfg, levels, x_star);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        CHECK(a.entries[i].trace->residuals() == b.entries[i].trace->residuals());
        CHECK(a.entries[i].plateau == b.entries[i].plateau);
    }
    CHECK(a.entries[2].theory_floor < a.entries[1].theory_floor);

    const std::vector<double> coarse{100.0};
    const auto big = delta_sweep(cfg, coarse, x_star);
    CHECK(big.entries[0].quantization_dominated);

    CHECK_THROWS_AS(delta_sweep(cfg, std::vector<double>{0.1, 0.1}, x_star), ConfigError);
    CHECK_THROWS_AS(delta_sweep(cfg, std::vector<double>{}, x_star), ConfigError);
    CHECK_THROWS_AS(delta_sweep(cfg, std::vector<double>{-1.0}, x_star), ConfigError);

    std::ostringstream csv;
    write_sweep_csv(csv, a);
    std::istringstream lines(csv.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "delta,plateau,iters_to_plateau,theory_floor");
}

TEST_CASE("centroid follows the stepped mean within the rounding bound") {
    const auto cfg = make_reference_instance(11, 0.1);
    const auto trace = run_experiment(cfg, *quadratic_minimizer(cfg.costs));
    for (std::size_t k = 1; k < trace.steps.size(); ++k) {
        const auto& s = trace.steps[k];
        CHECK(std::abs(centroid(s.estimates) - centroid(s.stepped)) <= 0.2 * (1 + 1e-9));
    }
}

TEST_CASE("svg plot has one polyline per series") {
    std::ostringstream a, b;
    const std::vector<PlotSeries> series{{"a", {1.0, 0.1, 0.01}}, {"b", {1.0, 0.5, 0.2}}};
    write_log_plot_svg(a, series, "t");
    write_log_plot_svg(b, series, "t");
    CHECK(a.str() == b.str());
    const auto text = a.str();
    std::size_t count = 0;
    for (auto pos = text.find("<polyline"); pos != std::string::npos; pos = text.find("<polyline", pos + 1)) ++count;
    CHECK(count == 2);
}
