#include "quagd/quantizer.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

#include "quagd/errors.hpp"

namespace quagd {

QuantizationLevel::QuantizationLevel(double delta) : delta_(delta) {
    if (!std::isfinite(delta) || !(delta > 0.0)) {
        throw ConfigError("quantization level must be a positive finite number");
    }
}

QuantizationLevel QuantizationLevel::parse(std::string_view text) {
    double value = 0.0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("quantization level '" + std::string(text) + "' is not a decimal number");
    }
    return QuantizationLevel(value);
}

std::string QuantizationLevel::to_string() const {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, delta_);
    (void)ec;
    return std::string(buf, ptr);
}

std::int64_t quantize_floor(double xi, QuantizationLevel q) {
    if (!std::isfinite(xi)) throw std::domain_error("cannot quantize a non-finite value");
    const double delta = q.value();
    const double ratio = std::floor(xi / delta);
    if (!(std::abs(ratio) < 0x1.0p62)) throw std::domain_error("quantized count overflows 62 bits");

    auto k = static_cast<std::int64_t>(ratio);
    // xi / Δ is rounded; nudge k so the bracket holds for the products.
    while (static_cast<double>(k) * delta > xi) --k;
    while (static_cast<double>(k + 1) * delta <= xi) ++k;
    return k;
}

} // namespace quagd
