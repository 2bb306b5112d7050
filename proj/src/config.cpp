#include "quagd/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "quagd/errors.hpp"
#include "quagd/graph.hpp"
#include "quagd/report.hpp"
#include "quagd/rng.hpp"
#include "quagd/theory.hpp"

namespace quagd {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    if (trim(text).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.emplace_back(trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <typename T>
T parse_value(std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw ConfigError("invalid value '" + std::string(text) + "'");
    return value;
}

std::optional<double> parse_optional(std::string_view text) {
    if (text.empty()) return std::nullopt;
    return parse_value<double>(text);
}

bool parse_bool(std::string_view text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError("invalid boolean '" + std::string(text) + "'");
}

void assign(ExperimentConfig& cfg, const std::string& section, const std::string& key, std::string_view value) {
    auto unknown = [&]() -> ConfigError {
        return ConfigError("unknown key '" + key + "' in [" + section + "]");
    };
    if (section == "graph") {
        if (key == "nodes") cfg.nodes = parse_value<std::size_t>(value);
        else if (key == "edge_prob") cfg.edge_prob = parse_value<double>(value);
        else if (key == "file") cfg.graph_file = std::string(value);
        else if (key == "d_bound") cfg.d_bound = parse_value<std::size_t>(value);
        else throw unknown();
    } else if (section == "quantizer") {
        if (key == "delta") cfg.delta = std::string(value);
        else if (key == "deltas") cfg.deltas = split_list(value);
        else throw unknown();
    } else if (section == "optimizer") {
        if (key == "alpha") cfg.alpha = parse_optional(value);
        else if (key == "max_iters") cfg.max_iters = parse_value<std::size_t>(value);
        else if (key == "seed") cfg.seed = parse_value<std::uint64_t>(value);
        else if (key == "max_rounds") cfg.max_rounds = parse_value<std::int64_t>(value);
        else if (key == "x_star") cfg.x_star = parse_optional(value);
        else if (key == "x0") cfg.x0 = parse_number_list(value);
        else throw unknown();
    } else if (section == "costs") {
        constexpr std::string_view prefix = "node.";
        if (!key.starts_with(prefix)) throw unknown();
        const auto node = parse_value<std::size_t>(std::string_view(key).substr(prefix.size()));
        if (cfg.costs.contains(node)) throw ConfigError("duplicate cost for node " + std::to_string(node));
        cfg.costs[node] = parse_cost_record(value);
    } else if (section == "theory") {
        if (key == "mu") cfg.theory_mu = parse_optional(value);
        else if (key == "lipschitz") cfg.theory_lipschitz = parse_optional(value);
        else if (key == "young_delta") cfg.theory_young_delta = parse_optional(value);
        else throw unknown();
    } else if (section == "output") {
        if (key == "dir") cfg.out_dir = std::string(value);
        else if (key == "trace") cfg.trace = parse_bool(value);
        else throw unknown();
    } else {
        throw ConfigError("unknown section [" + section + "]");
    }
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
    return out;
}

std::string join_numbers(const std::vector<double>& values) {
    std::vector<std::string> items;
    items.reserve(values.size());
    for (double v : values) items.push_back(format_number(v));
    return join(items);
}

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

} // namespace

std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(parse_value<double>(item));
    return out;
}

ExperimentConfig parse_config(std::istream& in, std::string_view source) {
    ExperimentConfig cfg;
    std::string section;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#' || text.front() == ';') continue;
        try {
            if (text.front() == '[') {
                if (text.back() != ']') throw ConfigError("malformed section header");
                section = std::string(trim(text.substr(1, text.size() - 2)));
                continue;
            }
            const auto eq = text.find('=');
            if (eq == std::string_view::npos) throw ConfigError("expected `key = value`");
            if (section.empty()) throw ConfigError("key outside of any section");
            assign(cfg, section, std::string(trim(text.substr(0, eq))), trim(text.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(source) + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

std::string format_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "[graph]\n"
        << "nodes = " << cfg.nodes << '\n'
        << "edge_prob = " << format_number(cfg.edge_prob) << '\n'
        << "file = " << cfg.graph_file << '\n'
        << "d_bound = " << cfg.d_bound << '\n'
        << "\n[quantizer]\n"
        << "delta = " << cfg.delta << '\n'
        << "deltas = " << join(cfg.deltas) << '\n'
        << "\n[optimizer]\n"
        << "alpha = " << optional_number(cfg.alpha) << '\n'
        << "max_iters = " << cfg.max_iters << '\n'
        << "seed = " << cfg.seed << '\n'
        << "max_rounds = " << cfg.max_rounds << '\n'
        << "x_star = " << optional_number(cfg.x_star) << '\n'
        << "x0 = " << join_numbers(cfg.x0) << '\n'
        << "\n[costs]\n";
    for (const auto& [node, record] : cfg.costs) out << "node." << node << " = " << format_cost_record(record) << '\n';
    out << "\n[theory]\n"
        << "mu = " << optional_number(cfg.theory_mu) << '\n'
        << "lipschitz = " << optional_number(cfg.theory_lipschitz) << '\n'
        << "young_delta = " << optional_number(cfg.theory_young_delta) << '\n'
        << "\n[output]\n"
        << "dir = " << cfg.out_dir << '\n'
        << "trace = " << (cfg.trace ? "true" : "false") << '\n';
    return out.str();
}

Digraph load_graph(const ExperimentConfig& cfg) {
    if (!cfg.graph_file.empty()) {
        std::ifstream in(cfg.graph_file);
        if (!in) throw ConfigError("cannot open graph file '" + cfg.graph_file + "'");
        try {
            return read_edge_list(in);
        } catch (const ConfigError& e) {
            throw ConfigError(cfg.graph_file + ": " + e.what());
        }
    }
    if (cfg.nodes < 2) throw ConfigError("nodes must be at least 2");
    if (!(cfg.edge_prob >= 0.0 && cfg.edge_prob <= 1.0)) throw ConfigError("edge_prob must lie in [0, 1]");
    return generate_random_strongly_connected(cfg.nodes, cfg.edge_prob, tagged_seed(cfg.seed, StreamTag::graph));
}

ExperimentConfig resolve(ExperimentConfig cfg) {
    const Digraph g = load_graph(cfg);
    cfg.nodes = g.size();
    const std::size_t n = cfg.nodes;

    if (cfg.costs.empty()) {
        Rng rng(tagged_seed(cfg.seed, StreamTag::costs));
        for (std::size_t i = 0; i < n; ++i) cfg.costs[i] = {"quadratic", {{"beta", 1.0}, {"center", rng.uniform(0.0, 10.0)}}};
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            if (!cfg.costs.contains(i)) throw ConfigError("[costs] has no entry for node." + std::to_string(i));
        }
        if (cfg.costs.size() != n) throw ConfigError("[costs] names nodes outside the graph");
    }

    if (cfg.x0.empty()) {
        Rng rng(tagged_seed(cfg.seed, StreamTag::initial));
        for (std::size_t i = 0; i < n; ++i) cfg.x0.push_back(rng.uniform(0.0, 10.0));
    } else if (cfg.x0.size() != n) {
        throw ConfigError("x0 lists " + std::to_string(cfg.x0.size()) + " values for " + std::to_string(n) + " nodes");
    }

    const auto registry = CostRegistry::with_builtin_types();
    std::vector<CostPtr> costs;
    for (const auto& [node, record] : cfg.costs) costs.push_back(registry.create(record));

    if (!cfg.alpha) {
        const auto sums = summed_constants(costs);
        cfg.alpha = step_size_interval(sums.lipschitz, sums.strong_convexity, static_cast<double>(n)).midpoint();
    }
    if (!cfg.x_star) {
        cfg.x_star = quadratic_minimizer(costs);
        if (!cfg.x_star) throw ConfigError("x_star must be given when costs are not all quadratic");
    }
    return cfg;
}

OptRunConfig to_run_config(const ExperimentConfig& resolved, std::string_view delta) {
    OptRunConfig run;
    run.graph = load_graph(resolved);
    const auto registry = CostRegistry::with_builtin_types();
    for (const auto& [node, record] : resolved.costs) run.costs.push_back(registry.create(record));
    run.alpha = resolved.alpha.value_or(0.0);
    run.delta = QuantizationLevel::parse(delta);
    run.d_bound = resolved.d_bound;
    run.x0 = resolved.x0;
    run.max_iters = resolved.max_iters;
    run.seed = resolved.seed;
    run.max_rounds = resolved.max_rounds;
    run.audit = true;
    return run;
}

} // namespace quagd
