#include "ruinkit/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace ruinkit {

namespace {

[[noreturn]] void fail_at(int line, const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

// Raw section.key store with consumption tracking, so anything left over at the
// end can be reported as unknown with its line number.
class Reader {
  public:
    void insert(const std::string& section, const std::string& key, std::string value, int line) {
        const std::string sk = section + "." + key;
        auto [it, fresh] = entries_.try_emplace(sk, Entry{std::move(value), line});
        if (!fresh)
            fail_at(line, "duplicate key '" + key + "' (first set on line " +
                              std::to_string(it->second.line) + ")");
    }

    const Entry* take(const std::string& section, const std::string& key) {
        const auto it = entries_.find(section + "." + key);
        if (it == entries_.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    std::string str(const std::string& section, const std::string& key,
                    const std::string& fallback) {
        const Entry* e = take(section, key);
        return e ? e->value : fallback;
    }

    double num(const std::string& section, const std::string& key, double fallback) {
        const Entry* e = take(section, key);
        return e ? to_num(*e) : fallback;
    }

    std::vector<double> list(const std::string& section, const std::string& key,
                             std::vector<double> fallback) {
        const Entry* e = take(section, key);
        if (!e) return fallback;
        std::vector<double> out;
        std::string item;
        std::istringstream in(e->value);
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (item.empty()) fail_at(e->line, "empty element in list '" + key + "'");
            out.push_back(to_num(Entry{item, e->line}));
        }
        if (out.empty()) fail_at(e->line, "list '" + key + "' has no elements");
        return out;
    }

    // Unconsumed keys are configuration mistakes; name the first by file order.
    void finish() const {
        const Entry* worst = nullptr;
        std::string worst_key;
        for (const auto& [sk, e] : entries_) {
            if (e.used) continue;
            if (!worst || e.line < worst->line) {
                worst = &e;
                worst_key = sk;
            }
        }
        if (!worst) return;
        const auto dot = worst_key.find('.');
        const std::string section = worst_key.substr(0, dot);
        const std::string key = worst_key.substr(dot + 1);
        if (section == "model")
            fail_at(worst->line, "key '" + key + "' does not apply to this claim kind");
        fail_at(worst->line, "unknown key '" + key + "' in [" + section + "]");
    }

    static double to_num(const Entry& e) {
        char* end = nullptr;
        const double v = std::strtod(e.value.c_str(), &end);
        if (end == e.value.c_str() || *end != '\0' || !std::isfinite(v))
            fail_at(e.line, "'" + e.value + "' is not a finite number");
        return v;
    }

  private:
    std::map<std::string, Entry> entries_;
};

double require_num(Reader& r, const std::string& section, const std::string& key,
                   const std::string& why) {
    const Entry* e = r.take(section, key);
    if (!e)
        throw std::invalid_argument("config: [" + section + "] is missing key '" + key + "'" +
                                    (why.empty() ? "" : " (" + why + ")"));
    return Reader::to_num(*e);
}

std::int64_t to_int(Reader& r, const std::string& section, const std::string& key,
                    std::int64_t fallback) {
    const Entry* e = r.take(section, key);
    if (!e) return fallback;
    const double v = Reader::to_num(*e);
    if (v != std::floor(v) || std::abs(v) > 9e15)
        fail_at(e->line, "'" + key + "' must be an integer");
    return static_cast<std::int64_t>(v);
}

std::uint64_t to_u64(Reader& r, const std::string& section, const std::string& key,
                     std::uint64_t fallback) {
    const Entry* e = r.take(section, key);
    if (!e) return fallback;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(e->value.c_str(), &end, 10);
    if (end == e->value.c_str() || *end != '\0' || e->value.front() == '-')
        fail_at(e->line, "'" + key + "' must be an unsigned integer");
    return static_cast<std::uint64_t>(v);
}

LevyModel build_model(Reader& r) {
    const double c = require_num(r, "model", "c", "premium rate");
    const double sigma = require_num(r, "model", "sigma", "diffusion scale, 0 disables");
    const Entry* kind = r.take("model", "claim");
    if (!kind) throw std::invalid_argument("config: [model] is missing key 'claim'");
    const std::string k = kind->value;
    const double lambda = require_num(r, "model", "lambda", "claim arrival rate");
    std::optional<LevyMeasureSpec> measure;
    if (k == "exponential")
        measure = LevyMeasureSpec::compound_poisson_exponential(
            lambda, require_num(r, "model", "mu", "claim size rate"));
    else if (k == "gamma")
        measure = LevyMeasureSpec::compound_poisson_gamma(
            lambda, require_num(r, "model", "shape", "claim shape"),
            require_num(r, "model", "rate", "claim rate"));
    else if (k == "uniform")
        measure = LevyMeasureSpec::compound_poisson_uniform(
            lambda, require_num(r, "model", "lo", "claim lower end"),
            require_num(r, "model", "hi", "claim upper end"));
    else
        fail_at(kind->line, "unknown claim kind '" + k +
                                "' (choose exponential, gamma, or uniform; tabulated tails are "
                                "a library-only feature)");
    try {
        return LevyModel(c, sigma, std::move(*measure));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config: invalid model: ") + e.what());
    }
}

GridSpec build_grid(Reader& r) {
    const double x_max = r.num("grid", "x_max", 40.0);
    const Entry* de = r.take("grid", "delta");
    const double delta = de ? Reader::to_num(*de) : x_max / 4096.0;
    if (!(delta > 0.0)) throw std::invalid_argument("config: [grid] delta must be positive");
    const double ratio = x_max / delta;
    const double cells = std::round(ratio);
    if (std::abs(ratio - cells) > 1e-6 * ratio || cells < 2.0)
        throw std::invalid_argument(
            "config: [grid] x_max must be an integer multiple (>= 2) of delta");
    return GridSpec(x_max, static_cast<Eigen::Index>(cells));
}

}  // namespace

SimConfig ExperimentConfig::sim(double q, double x) const {
    SimConfig cfg;
    cfg.seed = seed;
    cfg.paths = paths;
    cfg.q = q;
    cfg.x = x;
    cfg.t_max = t_max;
    cfg.scheme = scheme == "substep" ? PathScheme::Substep : PathScheme::Bridge;
    cfg.substep = substep;
    return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
    Reader reader;
    std::string section;
    int version_line = 0;
    std::string version_value;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto cut = raw.find_first_of("#;");
        std::string s = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail_at(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "model" && section != "grid" && section != "query" &&
                section != "output")
                fail_at(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail_at(line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail_at(line, "empty key");
        if (section.empty()) {
            if (key != "config_version")
                fail_at(line, "only config_version may appear before the first section");
            if (version_line) fail_at(line, "duplicate config_version");
            version_line = line;
            version_value = value;
            continue;
        }
        reader.insert(section, key, value, line);
    }
    if (!version_line)
        throw std::invalid_argument(
            "config: missing 'config_version = 1' before the first section");
    if (version_value != "1") fail_at(version_line, "unsupported config_version (expected 1)");

    ExperimentConfig cfg;
    cfg.model = build_model(reader);
    cfg.grid = build_grid(reader);
    cfg.q_values = reader.list("query", "q", cfg.q_values);
    cfg.x_values = reader.list("query", "x", cfg.x_values);
    for (double q : cfg.q_values)
        if (q < 0.0) throw std::invalid_argument("config: [query] q values must be >= 0");
    for (double x : cfg.x_values)
        if (x < 0.0) throw std::invalid_argument("config: [query] x values must be >= 0");
    cfg.penalty = reader.str("query", "penalty", cfg.penalty);
    cfg.subsequent = reader.str("query", "subsequent", cfg.subsequent);
    cfg.target = reader.str("query", "target", cfg.target);
    cfg.n_records = static_cast<int>(to_int(reader, "query", "n", cfg.n_records));
    cfg.paths = to_int(reader, "query", "paths", cfg.paths);
    if (cfg.paths < 1) throw std::invalid_argument("config: [query] paths must be >= 1");
    cfg.seed = to_u64(reader, "query", "seed", cfg.seed);
    cfg.t_max = reader.num("query", "t_max", cfg.t_max);
    if (cfg.t_max < 0.0) throw std::invalid_argument("config: [query] t_max must be >= 0");
    cfg.scheme = reader.str("query", "scheme", cfg.scheme);
    if (cfg.scheme != "bridge" && cfg.scheme != "substep")
        throw std::invalid_argument("config: [query] scheme must be bridge or substep");
    cfg.substep = reader.num("query", "substep", cfg.substep);
    if (!(cfg.substep > 0.0))
        throw std::invalid_argument("config: [query] substep must be positive");
    cfg.format = reader.str("output", "format", cfg.format);
    if (cfg.format != "csv" && cfg.format != "json")
        throw std::invalid_argument("config: [output] format must be csv or json");
    cfg.out_path = reader.str("output", "path", cfg.out_path);
    reader.finish();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

PenaltySpec build_penalty(const std::string& first, const std::string& subsequent, double span) {
    const auto split = [](const std::string& s) -> std::pair<std::string, double> {
        const auto colon = s.find(':');
        if (colon == std::string::npos) return {s, 0.0};
        char* end = nullptr;
        const double v = std::strtod(s.c_str() + colon + 1, &end);
        if (end == s.c_str() + colon + 1 || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("penalty '" + s + "': parameter must be a positive number");
        return {s.substr(0, colon), v};
    };

    PenaltySpec spec;
    double bound = 0.0;
    const auto [name, param] = split(first);
    if (name == "deficit") {
        spec.first = deficit_penalty();
        bound = span;
    } else if (name == "indicator") {
        spec.first = ruin_indicator_penalty();
        bound = 1.0;
    } else if (name == "capped_deficit") {
        if (param <= 0.0) throw std::invalid_argument("penalty capped_deficit needs ':K'");
        spec.first = capped_deficit_penalty(param);
        bound = param;
    } else {
        throw std::invalid_argument("unknown penalty '" + first +
                                    "' (deficit, indicator, capped_deficit:K)");
    }
    if (!subsequent.empty()) {
        const auto [sname, sparam] = split(subsequent);
        if (sname == "increment") {
            spec.subsequent = {increment_penalty()};
            bound = std::max(bound, span);
        } else if (sname == "capped_increment") {
            if (sparam <= 0.0)
                throw std::invalid_argument("penalty capped_increment needs ':K'");
            spec.subsequent = {capped_increment_penalty(sparam)};
            bound = std::max(bound, sparam);
        } else {
            throw std::invalid_argument("unknown follow-up penalty '" + subsequent +
                                        "' (increment, capped_increment:K)");
        }
        spec.tail = PenaltyTail::RepeatLast;
    }
    spec.bound = bound;
    return spec;
}

EstimateTarget parse_target(const std::string& name) {
    if (name == "ruin_probability") return EstimateTarget::RuinProbability;
    if (name == "kappa") return EstimateTarget::Kappa;
    if (name == "varphi") return EstimateTarget::Varphi;
    if (name == "xi") return EstimateTarget::Xi;
    if (name == "delta") return EstimateTarget::Delta;
    if (name == "edvci") return EstimateTarget::Edvci;
    throw std::invalid_argument("unknown target '" + name +
                                "' (ruin_probability, kappa, varphi, xi, delta, edvci, "
                                "n_probability)");
}

}  // namespace ruinkit
