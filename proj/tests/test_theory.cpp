#include <doctest.h>

#include "quagd/errors.hpp"
#include "quagd/rng.hpp"
#include "quagd/theory.hpp"

using namespace quagd;

TEST_CASE("step-size interval examples") {
    const auto iv = step_size_interval(Rational(20), Rational(20), Rational(20));
    CHECK(iv.lower == Rational(1, 2));
    CHECK(iv.upper == Rational(1));
    CHECK(iv.nonempty);
    CHECK(iv.sufficient_condition);
    CHECK(iv.midpoint() == Rational(3, 4));

    // μ = L gives (n/(2L), n/L)
    for (std::int64_t L = 1; L <= 30; ++L) {
        for (std::int64_t n = 1; n <= 30; n += 7) {
            const auto v = step_size_interval(Rational(L), Rational(L), Rational(n));
            CHECK(v.lower == Rational(n, 2 * L));
            CHECK(v.upper == Rational(n, L));
        }
    }

    const auto empty = step_size_interval(Rational(6), Rational(1), Rational(1));
    CHECK(empty.lower == Rational(7, 24));
    CHECK(empty.upper == Rational(2, 7));
    CHECK_FALSE(empty.nonempty);
    CHECK_FALSE(empty.sufficient_condition);
    CHECK_THROWS_AS(step_size_interval(0.0, 1.0, 1.0), AssumptionViolation);
}

TEST_CASE("Young parameter upper bound") {
    CHECK(young_delta_upper(Rational(3, 4), Rational(20), Rational(20), Rational(20)) == Rational(80, 3));
    CHECK(young_delta_upper(0.75, 20.0, 20.0, 20.0) == doctest::Approx(26.6667).epsilon(1e-4));
    CHECK_THROWS_AS(young_delta_upper(Rational(1, 2), Rational(20), Rational(20), Rational(20)), AssumptionViolation);
    CHECK_THROWS_AS(young_delta_upper(Rational(1), Rational(20), Rational(20), Rational(20)), AssumptionViolation);
    CHECK(young_delta_upper(1.0 - 1e-9, 20.0, 20.0, 20.0) > 0.0);
    CHECK(young_delta_upper(0.5 + 1e-9, 20.0, 20.0, 20.0) > 0.0);
}

TEST_CASE("contraction factor is exact in rationals") {
    const auto c = compute_theta_and_floor(Rational(3, 4), Rational(1), Rational(20), Rational(20), Rational(20),
                                           Rational(1, 100));
    CHECK(c.theta == Rational(83, 160));
    CHECK(c.alpha_hat == Rational(3, 80));
    // floor = (8 + 32(3/4)² + 32·(3/4)·20/1)Δ² = (8 + 18 + 480)Δ²
    CHECK(c.error_floor == Rational(506) * Rational(1, 10000));
    CHECK(c.asymptotic_bound == c.error_floor / (Rational(1) - Rational(83, 160)));
}

TEST_CASE("floor edge cases") {
    const auto zero = compute_theta_and_floor(0.75, 1.0, 20.0, 20.0, 20.0, 0.0);
    CHECK(zero.error_floor == 0.0);
    CHECK(zero.asymptotic_bound == 0.0);
    const auto tiny = compute_theta_and_floor(0.75, 1e-12, 20.0, 20.0, 20.0, 1.0);
    CHECK(tiny.error_floor > 1e12);
    CHECK_THROWS_AS(compute_theta_and_floor(0.75, 0.0, 20.0, 20.0, 20.0, 0.1), AssumptionViolation);
    CHECK_THROWS_AS(compute_theta_and_floor(0.75, 1.0, 20.0, 20.0, 20.0, -0.1), AssumptionViolation);
    // δ beyond its supremum pushes θ to 1 or above
    CHECK_THROWS_AS(compute_theta_and_floor(0.75, 30.0, 20.0, 20.0, 20.0, 0.1), AssumptionViolation);
}

TEST_CASE("theta stays in (0, 1) for in-interval draws") {
    Rng rng(99);
    int drawn = 0;
    while (drawn < 1000) {
        const double mu = rng.uniform(0.1, 50.0);
        const double L = mu * rng.uniform(1.0, 2.99);
        const double n = static_cast<double>(1 + rng.uniform_index(50));
        const auto iv = step_size_interval(L, mu, n);
        REQUIRE(iv.nonempty);
        const double alpha = iv.lower + (iv.upper - iv.lower) * rng.uniform(0.01, 0.99);
        const double upper = young_delta_upper(alpha, L, mu, n);
        const double delta = upper * rng.uniform(0.01, 0.99);
        const auto c = compute_theta_and_floor(alpha, delta, L, mu, n, rng.uniform(0.0, 1.0));
        CHECK(c.theta > 0.0);
        CHECK(c.theta < 1.0);
        ++drawn;
    }
}

TEST_CASE("L < 3mu implies a nonempty interval") {
    Rng rng(5);
    for (int t = 0; t < 2000; ++t) {
        const std::int64_t mu = 1 + static_cast<std::int64_t>(rng.uniform_index(100));
        const std::int64_t L = mu + static_cast<std::int64_t>(rng.uniform_index(static_cast<std::size_t>(2 * mu)));
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng.uniform_index(40));
        REQUIRE(L < 3 * mu);
        CHECK(step_size_interval(Rational(L), Rational(mu), Rational(n)).nonempty);
    }
    // sufficient, not necessary: L = 3μ still leaves a nonempty interval
    const auto edge = step_size_interval(Rational(3), Rational(1), Rational(1));
    CHECK(edge.nonempty);
    CHECK_FALSE(edge.sufficient_condition);
}

TEST_CASE("asymptotic bound is the fixed point of the recursion") {
    const auto c = default_theory(20.0, 20.0, 20.0, 0.01);
    double e = 100.0;
    for (int k = 0; k < 2000; ++k) e = c.theta * e + c.error_floor;
    CHECK(e == doctest::Approx(c.asymptotic_bound).epsilon(1e-12));
    CHECK(to_double(Rational(83, 160)) == 0.51875);
}
