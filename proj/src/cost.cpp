#include "quagd/cost.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "quagd/errors.hpp"

namespace quagd {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
}

// log cosh without overflow for large |t|.
double log_cosh(double t) {
    const double a = std::abs(t);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

class RecordParser {
public:
    explicit RecordParser(std::string_view text) : text_(text) {}

    CostRecord parse() {
        CostRecord record;
        expect('{');
        bool first = true;
        while (true) {
            skip_ws();
            if (peek() == '}') {
                ++pos_;
                break;
            }
            if (!first) {
                expect(',');
                skip_ws();
            }
            first = false;
            const std::string key = identifier();
            expect(':');
            skip_ws();
            if (key == "type") {
                if (!record.type.empty()) fail("duplicate key 'type'");
                record.type = quoted();
            } else {
                if (record.params.contains(key)) fail("duplicate key '" + key + "'");
                record.params[key] = number();
            }
        }
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters");
        if (record.type.empty()) fail("missing 'type'");
        return record;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("cost record '" + std::string(text_) + "': " + what);
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    void expect(char c) {
        skip_ws();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    std::string identifier() {
        const auto start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        if (start == pos_) fail("expected a key");
        return std::string(text_.substr(start, pos_ - start));
    }
    std::string quoted() {
        if (peek() != '"') fail("expected a quoted string");
        const auto end = text_.find('"', pos_ + 1);
        if (end == std::string_view::npos) fail("unterminated string");
        std::string value(text_.substr(pos_ + 1, end - pos_ - 1));
        pos_ = end + 1;
        return value;
    }
    double number() {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (ec != std::errc{}) fail("expected a number");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return value;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

double param(const std::map<std::string, double>& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw ConfigError("cost record missing parameter '" + key + "'");
    return it->second;
}

void check_keys(const std::map<std::string, double>& params, std::initializer_list<const char*> allowed) {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : params) {
        if (!ok.contains(key)) throw ConfigError("cost record has unknown parameter '" + key + "'");
    }
}

} // namespace

QuadraticCost::QuadraticCost(double beta, double center) : beta_(beta), center_(center) {
    require_finite(beta, "beta");
    require_finite(center, "center");
    if (!(beta > 0.0)) throw ConfigError("quadratic cost needs beta > 0");
}

double QuadraticCost::evaluate(double x) const {
    const double d = x - center_;
    return 0.5 * beta_ * d * d;
}

std::map<std::string, double> QuadraticCost::parameters() const {
    return {{"beta", beta_}, {"center", center_}};
}

LogCoshCost::LogCoshCost(double mu, double weight, double center) : mu_(mu), weight_(weight), center_(center) {
    require_finite(mu, "mu");
    require_finite(weight, "weight");
    require_finite(center, "center");
    if (!(mu > 0.0) || weight < 0.0) throw ConfigError("logcosh cost needs mu > 0 and weight >= 0");
}

double LogCoshCost::evaluate(double x) const {
    const double d = x - center_;
    return 0.5 * mu_ * d * d + weight_ * log_cosh(d);
}

double LogCoshCost::gradient(double x) const {
    const double d = x - center_;
    return mu_ * d + weight_ * std::tanh(d);
}

std::map<std::string, double> LogCoshCost::parameters() const {
    return {{"center", center_}, {"mu", mu_}, {"weight", weight_}};
}

CostRecord parse_cost_record(std::string_view text) { return RecordParser(text).parse(); }

std::string format_cost_record(const CostRecord& record) {
    std::string out = "{type: \"" + record.type + "\"";
    for (const auto& [key, value] : record.params) out += ", " + key + ": " + format_double(value);
    return out + "}";
}

CostRecord to_record(const CostFunction& f) { return {f.type_name(), f.parameters()}; }

void CostRegistry::add(std::string name, Factory factory) { factories_[std::move(name)] = std::move(factory); }

bool CostRegistry::contains(std::string_view name) const { return factories_.find(name) != factories_.end(); }

CostPtr CostRegistry::create(const CostRecord& record) const {
    auto it = factories_.find(record.type);
    if (it == factories_.end()) throw ConfigError("unknown cost type '" + record.type + "'");
    return it->second(record.params);
}

CostRegistry CostRegistry::with_builtin_types() {
    CostRegistry registry;
    registry.add("quadratic", [](const auto& p) -> CostPtr {
        check_keys(p, {"beta", "center"});
        return std::make_shared<QuadraticCost>(param(p, "beta"), param(p, "center"));
    });
    registry.add("logcosh", [](const auto& p) -> CostPtr {
        check_keys(p, {"mu", "weight", "center"});
        return std::make_shared<LogCoshCost>(param(p, "mu"), param(p, "weight"), param(p, "center"));
    });
    return registry;
}

std::optional<double> quadratic_minimizer(std::span<const CostPtr> costs) {
    double weighted = 0.0;
    double total = 0.0;
    for (const auto& f : costs) {
        const auto* quad = dynamic_cast<const QuadraticCost*>(f.get());
        if (quad == nullptr) return std::nullopt;
        weighted += quad->beta() * quad->center();
        total += quad->beta();
    }
    if (total <= 0.0) return std::nullopt;
    return weighted / total;
}

SummedConstants summed_constants(std::span<const CostPtr> costs) {
    SummedConstants sum;
    for (const auto& f : costs) {
        sum.lipschitz += f->lipschitz();
        sum.strong_convexity += f->strong_convexity();
    }
    return sum;
}

} // namespace quagd
