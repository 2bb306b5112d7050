#include <doctest.h>

#include <cmath>

#include "quagd/errors.hpp"
#include "quagd/quantizer.hpp"
#include "quagd/rng.hpp"

using namespace quagd;

TEST_CASE("floor quantization examples") {
    CHECK(quantize_floor(2.7, QuantizationLevel(0.5)) == 5);
    CHECK(quantize_floor(-1.3, QuantizationLevel(0.5)) == -3);
    CHECK(quantize_floor(3.0, QuantizationLevel(1.0)) == 3);
    CHECK(quantize_floor(0.0, QuantizationLevel(0.1)) == 0);
    CHECK(quantize_floor(0.75, QuantizationLevel(0.25)) == 3);
    // 3 * 0.1 rounds above 0.3 in binary floating point
    CHECK(quantize_floor(0.3, QuantizationLevel(0.1)) == 2);
    CHECK(dequantize(-3, QuantizationLevel(0.5)) == -1.5);
}

TEST_CASE("quantization level validation") {
    CHECK_THROWS_AS(QuantizationLevel(0.0), ConfigError);
    CHECK_THROWS_AS(QuantizationLevel(-1.0), ConfigError);
    CHECK_THROWS_AS(QuantizationLevel(std::nan("")), ConfigError);
    CHECK_THROWS_AS(QuantizationLevel::parse("abc"), ConfigError);
    CHECK(QuantizationLevel::parse("0.01").value() == 0.01);
    CHECK(QuantizationLevel(0.001).to_string() == "0.001");
    CHECK_THROWS(quantize_floor(INFINITY, QuantizationLevel(1.0)));
    CHECK_THROWS(quantize_floor(1e300, QuantizationLevel(1e-10)));
}

TEST_CASE("quantized value brackets the input") {
    Rng rng(17);
    const double levels[] = {1.0, 0.5, 0.1, 0.01, 1e-3, 1e-6, 0.3};
    for (int t = 0; t < 20000; ++t) {
        const QuantizationLevel q(levels[rng.uniform_index(std::size(levels))]);
        const double x = rng.uniform(-1e3, 1e3);
        const auto k = quantize_floor(x, q);
        CHECK(static_cast<double>(k) * q.value() <= x);
        CHECK(x < static_cast<double>(k + 1) * q.value());
    }
}

TEST_CASE("quantization is monotone and idempotent on grid points") {
    Rng rng(3);
    for (int t = 0; t < 5000; ++t) {
        const QuantizationLevel q(rng.uniform(1e-3, 2.0));
        const double a = rng.uniform(-100, 100);
        const double b = a + rng.uniform(0, 5);
        CHECK(quantize_floor(a, q) <= quantize_floor(b, q));
        const auto k = quantize_floor(a, q);
        CHECK(quantize_floor(dequantize(k, q), q) == k);
    }
}

TEST_CASE("integer floor and ceiling division") {
    for (std::int64_t a = -30; a <= 30; ++a) {
        for (std::int64_t b = 1; b <= 7; ++b) {
            const auto ratio = static_cast<long double>(a) / static_cast<long double>(b);
            CHECK(floor_div(a, b) == static_cast<std::int64_t>(std::floor(ratio)));
            CHECK(ceil_div(a, b) == static_cast<std::int64_t>(std::ceil(ratio)));
        }
    }
}
