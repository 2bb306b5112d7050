#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace quagd {

/// Common quantization level Δ > 0.
///
/// Held as a double. When parsed from a decimal string the original text is
/// kept so that configuration echoes reproduce the input exactly; all
/// protocol arithmetic downstream of quantize_floor is integer.
class QuantizationLevel {
public:
    /// Throws ConfigError unless delta is finite and positive.
    explicit QuantizationLevel(double delta);

    /// Parses a decimal literal such as "0.01" or "1e-3".
    static QuantizationLevel parse(std::string_view text);

    double value() const noexcept { return delta_; }

    /// Shortest decimal text that round-trips to value().
    std::string to_string() const;

    friend bool operator==(const QuantizationLevel&, const QuantizationLevel&) = default;

private:
    double delta_;
};

/// ⌊xi / Δ⌋, the number of whole Δ steps below xi (toward −∞).
///
/// The result k satisfies k·Δ <= xi < (k+1)·Δ when the products are
/// evaluated in double precision, which a plain floor(xi / Δ) does not
/// guarantee. Throws std::domain_error for non-finite xi or if the count
/// does not fit in 62 bits.
std::int64_t quantize_floor(double xi, QuantizationLevel q);

inline double dequantize(std::int64_t count, QuantizationLevel q) {
    return static_cast<double>(count) * q.value();
}

/// Floor / ceiling of a / b for b > 0, rounding toward −∞ / +∞.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
    const std::int64_t q = a / b;
    return (a % b != 0 && a < 0) ? q - 1 : q;
}

constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) noexcept {
    const std::int64_t q = a / b;
    return (a % b != 0 && a > 0) ? q + 1 : q;
}

} // namespace quagd
