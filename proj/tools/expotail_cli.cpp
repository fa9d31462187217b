// Command-line front end. Talks to the library only through the C API.

#include "expotail/expotail.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace {

enum Exit { kOk = 0, kUsage = 1, kFailures = 2, kNumeric = 3 };

// Carries a C API failure up to main with the status it maps to.
struct ApiError {
    et_status status;
    std::string message;
};

void check(et_status s) {
    if (s != ET_OK) throw ApiError{s, et_last_error()};
}

std::string number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string json_number(double x) { return std::isfinite(x) ? number(x) : "null"; }

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out + "\"";
}

struct CString {
    char* p = nullptr;
    ~CString() { et_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

using Cell = std::variant<double, long long, bool, std::string>;

// Column-ordered rows; the same cells feed both encoders.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::string json() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            os << (i ? ",\n " : "\n ") << "{";
            for (std::size_t j = 0; j < columns.size(); ++j) {
                os << (j ? ", " : "") << json_string(columns[j]) << ": " << encode(rows[i][j], true);
            }
            os << "}";
        }
        os << (rows.empty() ? "]" : "\n]");
        return os.str();
    }

    std::string csv() const {
        std::ostringstream os;
        for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << columns[j];
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << encode(row[j], false);
            os << "\n";
        }
        return os.str();
    }

    static std::string encode(const Cell& c, bool json) {
        if (const auto* d = std::get_if<double>(&c)) return json ? json_number(*d) : number(*d);
        if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
        if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
        const auto& s = std::get<std::string>(c);
        return json ? json_string(s) : s;
    }
};

struct Options {
    std::string dist = "laplace";
    double shape = 1.0;
    std::string weights;
    std::vector<double> t;
    std::vector<double> threshold;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
    std::string method = "tilted";
    std::string format = "json";
    std::string out;
    int instances = 50;
    std::vector<double> p{2, 3, 4, 6, 8};
    std::string mode = "proof_derived";
    unsigned threads = 0;
};

struct Model {
    et_model* handle = nullptr;
    et_law law = ET_LAW_LAPLACE;
    std::vector<double> weights;
    et_stats stats{};

    Model() = default;
    Model(const Model&) = delete;
    Model& operator=(const Model&) = delete;
    ~Model() { et_model_destroy(handle); }

    // Converts a relative t to an absolute threshold.
    double scale() const { return law == ET_LAW_LAPLACE ? stats.sigma : stats.mean_s; }
};

std::vector<double> parse_weights(const std::string& text) {
    double* buf = nullptr;
    size_t n = 0;
    check(et_parse_weights(text.c_str(), &buf, &n));
    std::vector<double> w(buf, buf + n);
    et_doubles_free(buf);
    return w;
}

et_law parse_law(const std::string& name) {
    et_law law;
    check(et_parse_law(name.c_str(), &law));
    return law;
}

void open_model(const Options& o, Model& m) {
    if (o.weights.empty()) throw ApiError{ET_INVALID_INPUT, "--weights is required"};
    m.law = parse_law(o.dist);
    m.weights = parse_weights(o.weights);
    check(et_model_create(m.law, o.shape, m.weights.data(), m.weights.size(), &m.handle));
    check(et_model_stats(m.handle, &m.stats));
}

// (t, threshold) pairs from whichever of --t / --threshold was given.
std::vector<std::pair<double, double>> grid(const Options& o, const Model& m, std::vector<double> fallback_t) {
    std::vector<std::pair<double, double>> g;
    const double s = m.scale();
    if (!o.threshold.empty()) {
        for (double x : o.threshold) g.emplace_back(s > 0 ? x / s : NAN, x);
    } else {
        for (double t : (o.t.empty() ? fallback_t : o.t)) g.emplace_back(t, t * s);
    }
    return g;
}

std::string meta_json(const std::string& command, const Options& o, const std::vector<double>& weights) {
    std::ostringstream os;
    os << "{\"tool\": \"expotail\", \"version\": " << json_string(et_version())
       << ", \"command\": " << json_string(command) << ", \"dist\": " << json_string(o.dist);
    if (o.dist == "gamma") os << ", \"shape\": " << json_number(o.shape);
    if (!weights.empty()) {
        os << ", \"weights\": [";
        for (std::size_t i = 0; i < weights.size(); ++i) os << (i ? ", " : "") << json_number(weights[i]);
        os << "]";
    }
    os << ", \"seed\": " << o.seed << "}";
    return os.str();
}

std::string document(const std::string& meta, const std::string& rows, const std::string& properties = "") {
    std::string doc = "{\"meta\": " + meta + ",\n\"rows\": " + rows;
    if (!properties.empty()) doc += ",\n\"properties\": " + properties;
    return doc + "}\n";
}

std::vector<et_bound_kind> applicable_kinds(et_law law) {
    switch (law) {
    case ET_LAW_LAPLACE: return {ET_BOUND_LAPLACE_LOWER, ET_BOUND_LAPLACE_UPPER};
    case ET_LAW_EXPONENTIAL:
        return {ET_BOUND_JANSON_LOWER,  ET_BOUND_JANSON_UPPER, ET_BOUND_GENERIC_LOWER,       ET_BOUND_GENERIC_UPPER,
                ET_BOUND_GAMMA_LOWER,   ET_BOUND_GAMMA_UPPER,  ET_BOUND_S_INEQUALITY_UPPER};
    case ET_LAW_GAMMA:
        return {ET_BOUND_GAMMA_LOWER, ET_BOUND_GAMMA_UPPER, ET_BOUND_GENERIC_LOWER, ET_BOUND_GENERIC_UPPER,
                ET_BOUND_S_INEQUALITY_UPPER};
    }
    return {};
}

std::string run_bounds(const Options& o) {
    Model m;
    open_model(o, m);
    const auto kinds = applicable_kinds(m.law);
    Table table;
    table.columns = {"t", "threshold", "lower", "upper"};
    for (auto k : kinds) {
        table.columns.push_back(et_bound_kind_name(k));
        table.columns.push_back(std::string(et_bound_kind_name(k)) + "_valid");
    }
    for (const auto& [t, x] : grid(o, m, {1.1, 1.5, 2, 3, 5, 10})) {
        std::vector<Cell> row{t, x, 0.0, 0.0};
        for (auto k : kinds) {
            et_bound b;
            check(et_bound_eval(m.handle, k, t, &b));
            row.emplace_back(b.value);
            row.emplace_back(b.valid != 0);
        }
        // The first two kinds are the law's headline sandwich.
        row[2] = row[4];
        row[3] = row[6];
        table.rows.push_back(std::move(row));
    }
    return o.format == "csv" ? table.csv() : document(meta_json("bounds", o, m.weights), table.json());
}

std::string run_exact(const Options& o) {
    Model m;
    open_model(o, m);
    Table table;
    table.columns = {"t", "threshold", "exact", "source"};
    for (const auto& [t, x] : grid(o, m, {1.1, 1.5, 2, 3, 5, 10})) {
        double p;
        et_source src;
        check(et_exact_tail(m.handle, x, &p, &src));
        table.rows.push_back({t, x, p, std::string(et_source_name(src))});
    }
    return o.format == "csv" ? table.csv() : document(meta_json("exact", o, m.weights), table.json());
}

std::string run_simulate(const Options& o) {
    Model m;
    open_model(o, m);
    const et_method method = o.method == "plain" ? ET_METHOD_PLAIN : ET_METHOD_TILTED;
    Table table;
    table.columns = {"t", "threshold", "p_hat", "std_error", "ci_low", "ci_high", "n", "hits", "method", "tilt_theta"};
    for (const auto& [t, x] : grid(o, m, {2, 3, 5})) {
        et_estimate e;
        check(et_simulate(m.handle, x, o.samples, o.seed, method, o.threads, &e));
        table.rows.push_back({t, x, e.p_hat, e.std_error, e.ci_low, e.ci_high, static_cast<long long>(e.n),
                              static_cast<long long>(e.hits), o.method, e.tilt_theta});
    }
    return o.format == "csv" ? table.csv() : document(meta_json("simulate", o, m.weights), table.json());
}

std::string run_moments(const Options& o) {
    Model m;
    open_model(o, m);
    const et_moment_mode mode = o.mode == "paper" ? ET_MOMENT_PAPER : ET_MOMENT_PROOF_DERIVED;
    Table table;
    table.columns = {"p", "lower", "exact", "upper", "bracketed", "mode"};
    for (double p : o.p) {
        double lo, hi, moment;
        check(et_moment_bounds(m.handle, p, mode, &lo, &hi));
        check(et_abs_moment(m.handle, p, &moment));
        const double norm = std::pow(moment, 1.0 / p);
        table.rows.push_back({p, lo, norm, hi, lo <= norm && norm <= hi, o.mode});
    }
    return o.format == "csv" ? table.csv() : document(meta_json("moments", o, m.weights), table.json());
}

struct ReportHandle {
    et_report* p = nullptr;
    ~ReportHandle() { et_report_destroy(p); }
};

struct PropertiesHandle {
    et_properties* p = nullptr;
    ~PropertiesHandle() { et_properties_destroy(p); }
};

std::string run_verify(const Options& o, bool& failed) {
    et_verify_config cfg;
    et_verify_config_init(&cfg);
    cfg.law = parse_law(o.dist);
    cfg.shape = o.shape;
    cfg.instances = o.instances;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    if (!o.t.empty()) {
        cfg.t_grid = o.t.data();
        cfg.t_count = o.t.size();
    }
    std::vector<double> weights;
    if (!o.weights.empty()) {
        weights = parse_weights(o.weights);
        cfg.weights = weights.data();
        cfg.weight_count = weights.size();
    }
    ReportHandle report;
    check(et_verify(&cfg, &report.p));
    PropertiesHandle props;
    check(et_property_suite(o.seed, &props.p));
    failed = et_report_failures(report.p) > 0 || !et_properties_all_pass(props.p);

    CString rows;
    if (o.format == "csv") {
        check(et_report_csv(report.p, &rows.p));
        return rows.str();
    }
    check(et_report_json(report.p, &rows.p));
    CString properties;
    check(et_properties_json(props.p, &properties.p));
    std::string meta = meta_json("verify", o, weights);
    meta.pop_back();
    meta += ", \"instances\": " + std::to_string(o.instances) +
            ", \"failures\": " + std::to_string(et_report_failures(report.p)) +
            ", \"properties_pass\": " + (et_properties_all_pass(props.p) ? "true" : "false") + "}";
    return document(meta, rows.str(), properties.str());
}

void add_model_flags(CLI::App* sub, Options& o, bool weights_required) {
    sub->add_option("--dist", o.dist, "Summand law")
        ->check(CLI::IsMember({"exponential", "gamma", "laplace"}))
        ->capture_default_str();
    sub->add_option("--shape", o.shape, "Gamma shape")->check(CLI::PositiveNumber)->capture_default_str();
    auto* w = sub->add_option("--weights", o.weights, "Weights, e.g. 2,1,0.5");
    if (weights_required) w->required();
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--out", o.out, "Output file (default: standard output)");
    sub->add_option("--threads", o.threads, "Worker threads, 0 = all cores")->capture_default_str();
}

void add_grid_flags(CLI::App* sub, Options& o) {
    auto* t = sub->add_option("--t", o.t, "Thresholds in units of sigma (Laplace) or E S")->delimiter(',');
    auto* x = sub->add_option("--threshold", o.threshold, "Absolute thresholds")->delimiter(',');
    t->excludes(x);
    x->excludes(t);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified tail bounds for weighted sums of exponential, Laplace and gamma variables"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(et_version()));
    Options o;

    auto* bounds = app.add_subcommand("bounds", "Bound curves over a t grid");
    add_model_flags(bounds, o, true);
    add_grid_flags(bounds, o);

    auto* exact = app.add_subcommand("exact", "Exact tails from the oracles");
    add_model_flags(exact, o, true);
    add_grid_flags(exact, o);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo and importance-sampling estimates");
    add_model_flags(simulate, o, true);
    add_grid_flags(simulate, o);
    simulate->add_option("--samples", o.samples, "Sample count")->capture_default_str();
    simulate->add_option("--seed", o.seed, "Seed")->capture_default_str();
    simulate->add_option("--method", o.method, "plain or tilted")
        ->check(CLI::IsMember({"plain", "tilted"}))
        ->capture_default_str();

    auto* moments = app.add_subcommand("moments", "Moment bounds against exact absolute moments (Laplace)");
    add_model_flags(moments, o, true);
    moments->add_option("--p", o.p, "Moment orders")->delimiter(',')->capture_default_str();
    moments->add_option("--mode", o.mode, "Lower-bound constant")
        ->check(CLI::IsMember({"paper", "proof_derived"}))
        ->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Sandwich campaign plus property suite");
    add_model_flags(verify, o, false);
    verify->add_option("--t", o.t, "t grid, each > 1")->delimiter(',');
    verify->add_option("--instances", o.instances, "Random instances")->check(CLI::NonNegativeNumber)->capture_default_str();
    verify->add_option("--seed", o.seed, "Seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    bool failed = false;
    std::string output;
    try {
        if (*bounds) output = run_bounds(o);
        else if (*exact) output = run_exact(o);
        else if (*simulate) output = run_simulate(o);
        else if (*moments) output = run_moments(o);
        else if (*verify) output = run_verify(o, failed);
    } catch (const ApiError& e) {
        std::cerr << "expotail: " << et_status_string(e.status) << ": " << e.message << "\n";
        return e.status == ET_NUMERIC ? kNumeric : kUsage;
    }

    if (o.out.empty()) {
        std::cout << output;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!(f << output)) {
            std::cerr << "expotail: cannot write " << o.out << "\n";
            return kUsage;
        }
    }
    return failed ? kFailures : kOk;
}
