#include "separatrix/asymptotics.hpp"
#include "separatrix/splitting.hpp"
#include "separatrix/verify.hpp"
#include "separatrix/version.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

using namespace separatrix;
using nlohmann::json;

namespace {

enum Exit : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kValidation = 3,
    kConvergence = 4,
    kPrecision = 5,
};

struct Options {
    std::string map = "builtin:mcmillan";
    int order = 4;
    std::string out;
    // formal-sep
    int laurent_m = 0;
    int laurent_k = 0;
    // splitting
    std::string eps;
    std::string delta;
    std::string digits = "auto";
    bool reversor = false;
    std::string trace;
    int trace_points = 200;
    int samples = 8;
    int nodes = 64;
    // sweep
    std::string grid = "geom:0.25:0.45:8";
    std::string csv;
    std::vector<int> fit_degrees{2, 3};
    int workers = 0;
    // verify
    std::string suite = "all";
    int cases = 1000;
    unsigned seed = 20240611;
};

int env_int(const char* name, int fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    try {
        return std::stoi(v);
    } catch (...) {
        throw ValidationError(std::string(name) + " must be an integer");
    }
}

std::string env_str(const char* name) {
    const char* v = std::getenv(name);
    return v ? v : "";
}

void emit(const json& doc, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << doc.dump(2) << "\n";
}

json envelope(const std::string& command, const json& config) {
    return {{"tool", "separatrix"}, {"version", kVersion}, {"schema_version", 1}, {"command", command},
            {"config", config}};
}

SplittingConfig splitting_config(const Options& o) {
    SplittingConfig cfg;
    cfg.order = o.order;
    if (o.digits != "auto") {
        try {
            cfg.digits = std::stoi(o.digits);
        } catch (...) {
            throw ValidationError("--digits must be 'auto' or an integer");
        }
        if (cfg.digits < 20) throw ValidationError("--digits must be at least 20");
    }
    cfg.samples = o.samples;
    cfg.use_reversor = o.reversor;
    cfg.quadrature_nodes = o.nodes;
    return cfg;
}

json splitting_config_json(const Options& o, const SplittingConfig& c) {
    return {{"map", o.map},
            {"order", o.order},
            {"digits", o.digits},
            {"policy", {{"base_digits", c.policy.base_digits}, {"exponent_margin", std::to_string(c.policy.exponent_margin)},
                        {"guard", c.policy.guard}}},
            {"samples", c.samples},
            {"reversor", c.use_reversor},
            {"quadrature_nodes", c.quadrature_nodes},
            {"s0_fraction", std::to_string(c.s0_fraction)},
            {"j_max", "auto"}};
}

int formal_order_for(int n) { return std::max(1, (n + 1) / 2); }

int cmd_interpolate(const Options& o) {
    if (o.order < 1) throw ValidationError("--order must be >= 1");
    MapFamily raw_map = load_map(o.map);
    auto [map, signs] = normalize_signs(raw_map);
    validate_map(map, std::min(map.truncation(), o.order + 3));
    FormalHamiltonian raw = interpolate(map, o.order);
    FormalHamiltonian mech = simplify(raw, o.order);
    json doc = envelope("interpolate", {{"map", o.map}, {"order", o.order}});
    doc["map"] = map_to_json(map);
    doc["sign_normalization"] = signs.describe();
    doc["raw"] = to_json(raw);
    doc["mechanical"] = to_json(mech);
    emit(doc, o.out);
    return kOk;
}

int cmd_formal(const Options& o) {
    if (o.order < 1) throw ValidationError("--order must be >= 1");
    MapFamily m = load_map(o.map);
    FormalPipeline fp = build_formal_pipeline(m, o.order);
    json doc = envelope("formal-sep", {{"map", o.map}, {"order", o.order}, {"laurent_m", o.laurent_m},
                                       {"laurent_k", o.laurent_k}});
    doc["sign_normalization"] = fp.signs.describe();
    doc["mechanical_separatrix"] = to_json(fp.data);
    doc["separatrix"] = to_json(fp.original);
    if (o.laurent_m > 0) doc["laurent"] = to_json(laurent_reexpand(fp.original, o.laurent_m, o.laurent_k));
    emit(doc, o.out);
    return kOk;
}

double resolve_delta(const Options& o) {
    if (!o.delta.empty() && !o.eps.empty()) throw ValidationError("give either --eps or --delta");
    try {
        if (!o.delta.empty()) return std::stod(o.delta);
        if (!o.eps.empty()) {
            double e = std::stod(o.eps);
            if (!(e > 0)) throw ValidationError("--eps must be positive");
            return std::pow(e, 0.25);
        }
    } catch (const std::invalid_argument&) {
        throw ValidationError("--eps/--delta must be numbers");
    }
    throw ValidationError("splitting needs --eps or --delta");
}

int cmd_splitting(const Options& o) {
    double delta = resolve_delta(o);
    if (!(delta > 0 && delta < 1)) throw ValidationError("delta must lie in (0, 1)");
    SplittingConfig cfg = splitting_config(o);
    FormalPipeline fp = build_formal_pipeline(load_map(o.map), formal_order_for(o.order));
    SplittingRecord rec = compute_splitting(fp, delta, cfg);
    json conf = splitting_config_json(o, cfg);
    conf["delta"] = o.delta.empty() ? nlohmann::json(nullptr) : nlohmann::json(o.delta);
    conf["eps"] = o.eps.empty() ? nlohmann::json(nullptr) : nlohmann::json(o.eps);
    json doc = envelope("splitting", conf);
    doc["sign_normalization"] = fp.signs.describe();
    doc["record"] = to_json(rec);
    emit(doc, o.out);
    if (!o.trace.empty()) {
        std::ofstream csv(o.trace);
        if (!csv) throw ValidationError("cannot write " + o.trace);
        csv << "branch,t,x,y\n";
        for (const auto& r : splitting_trace(fp, delta, cfg, o.trace_points))
            csv << r.branch << "," << decimal(r.t, rec.digits) << "," << decimal(r.x, rec.digits) << ","
                << decimal(r.y, rec.digits) << "\n";
    }
    return kOk;
}

std::string cache_key(const std::string& map_text, const json& conf, double delta) {
    char num[64];
    auto end = std::to_chars(num, num + sizeof num, delta).ptr;
    std::string s = map_text + conf.dump() + std::string(num, end) + kVersion;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016zx", std::hash<std::string>{}(s));
    return buf;
}

int cmd_sweep(const Options& o) {
    std::vector<double> grid;
    try {
        grid = parse_grid(o.grid);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    SplittingConfig cfg = splitting_config(o);
    MapFamily m = load_map(o.map);
    FormalPipeline fp = build_formal_pipeline(m, formal_order_for(o.order));
    json conf = splitting_config_json(o, cfg);
    conf["grid"] = o.grid;
    conf["fit_degrees"] = o.fit_degrees;
    int workers = o.workers > 0 ? o.workers : env_int("SEPARATRIX_WORKERS", 1);
    if (workers < 1) throw ValidationError("worker count must be >= 1");
    conf["workers"] = workers;
    std::string cache = env_str("SEPARATRIX_CACHE_DIR");
    std::string map_text = map_to_json(m).dump();

    std::vector<json> records(grid.size());
    std::vector<std::exception_ptr> errors(grid.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            try {
                std::filesystem::path file;
                if (!cache.empty()) {
                    file = std::filesystem::path(cache) / (cache_key(map_text, conf, grid[i]) + ".json");
                    std::ifstream in(file);
                    if (in) {
                        records[i] = json::parse(in);
                        continue;
                    }
                }
                records[i] = to_json(compute_splitting(fp, grid[i], cfg));
                if (!cache.empty()) {
                    std::filesystem::create_directories(cache);
                    std::ofstream(file) << records[i].dump() << "\n";
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < std::min<int>(workers, static_cast<int>(grid.size())); ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    int digits = 0;
    for (const auto& r : records) digits = std::max(digits, r["digits"].get<int>());
    PrecisionScope scope(digits);
    std::vector<std::pair<Real, Real>> pts;
    for (const auto& r : records)
        pts.emplace_back(Real(r["delta"].get<std::string>()), Real(r["amplitude"].get<std::string>()));
    json fits = json::array();
    for (int K : o.fit_degrees) {
        AsymptoticFit f = fit_even_series(pts, K);
        json coeffs = json::array();
        for (const auto& c : f.coefficients) coeffs.push_back(decimal(c, 30));
        json sub = json::array();
        for (const auto& c : f.a0_subgrids) sub.push_back(decimal(c, 30));
        fits.push_back({{"K", K}, {"coefficients", coeffs}, {"residual_norm", decimal(f.residual_norm, 10)},
                        {"a0_subgrids", sub}, {"a0_spread", decimal(f.a0_spread, 10)}});
    }
    json doc = envelope("sweep", conf);
    doc["sign_normalization"] = fp.signs.describe();
    doc["records"] = records;
    doc["fit"] = fits;
    emit(doc, o.out);
    if (!o.csv.empty()) {
        std::ofstream csv(o.csv);
        if (!csv) throw ValidationError("cannot write " + o.csv);
        csv << "delta,omega,w,lobe,loglambda\n";
        for (const auto& r : records)
            csv << r["delta"].get<std::string>() << "," << r["omega_plus"].get<std::string>() << ","
                << r["amplitude"].get<std::string>() << "," << r["lobe_area"].get<std::string>() << ","
                << r["log_lambda"].get<std::string>() << "\n";
    }
    return kOk;
}

int cmd_verify(const Options& o) {
    std::vector<std::string> suites = o.suite == "all" ? suite_names() : std::vector<std::string>{o.suite};
    json doc = envelope("verify", {{"suite", o.suite}, {"cases", o.cases}, {"seed", o.seed}});
    json reports = json::array();
    bool ok = true;
    for (const auto& s : suites) {
        SuiteReport rep;
        try {
            rep = run_suite(s, o.cases, o.seed);
        } catch (const std::invalid_argument& e) {
            throw ValidationError(e.what());
        }
        json props = json::array();
        for (const auto& p : rep.properties)
            props.push_back({{"name", p.name}, {"cases", p.cases}, {"failures", p.failures},
                             {"first_failure", p.first_failure}});
        reports.push_back({{"suite", s}, {"seed", rep.seed}, {"passed", rep.ok()}, {"properties", props}});
        ok = ok && rep.ok();
    }
    doc["suites"] = reports;
    doc["passed"] = ok;
    emit(doc, o.out);
    return ok ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponentially small separatrix splitting: formal series and multiprecision numerics"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Options o;

    auto* interp = app.add_subcommand("interpolate", "formal interpolating Hamiltonian");
    interp->add_option("--map", o.map, "builtin:<name>, a built-in name, or a JSON file");
    interp->add_option("--order", o.order, "interpolation order n");
    interp->add_option("--out", o.out, "output file (stdout if omitted)");

    auto* formal = app.add_subcommand("formal-sep", "formal separatrix series");
    formal->add_option("--map", o.map);
    formal->add_option("--order", o.order, "formal separatrix order N");
    formal->add_option("--laurent-m", o.laurent_m, "Laurent table rows (0 = skip)");
    formal->add_option("--laurent-k", o.laurent_k, "Laurent table columns");
    formal->add_option("--out", o.out);

    auto* split = app.add_subcommand("splitting", "homoclinic invariant and lobe area at one parameter");
    split->add_option("--map", o.map);
    split->add_option("--eps", o.eps, "parameter eps > 0");
    split->add_option("--delta", o.delta, "delta = eps^(1/4)");
    split->add_option("--order", o.order, "interpolation order n used for phase seeding");
    split->add_option("--digits", o.digits, "auto or a digit count");
    split->add_flag("--reversor", o.reversor, "seed on the symmetry lines of a declared reversor");
    split->add_option("--samples", o.samples, "gap samples per fundamental interval");
    split->add_option("--nodes", o.nodes, "Gauss-Legendre nodes for the lobe area");
    split->add_option("--trace", o.trace, "CSV of lobe boundary points");
    split->add_option("--trace-points", o.trace_points);
    split->add_option("--out", o.out);

    auto* sweep = app.add_subcommand("sweep", "delta sweep with even-series fit");
    sweep->add_option("--map", o.map);
    sweep->add_option("--grid", o.grid, "geom:lo:hi:n, lin:lo:hi:n or list:v1,v2,...");
    sweep->add_option("--order", o.order);
    sweep->add_option("--digits", o.digits);
    sweep->add_flag("--reversor", o.reversor);
    sweep->add_option("--fit-degrees", o.fit_degrees, "fit degrees K")->delimiter(',');
    sweep->add_option("--workers", o.workers, "worker threads (default SEPARATRIX_WORKERS or 1)");
    sweep->add_option("--out", o.out);
    sweep->add_option("--csv", o.csv, "companion CSV: delta, omega, w, lobe, loglambda");

    auto* verify = app.add_subcommand("verify", "randomized exact property suites");
    verify->add_option("--suite", o.suite, "algebra, eta or all");
    verify->add_option("--cases", o.cases);
    verify->add_option("--seed", o.seed);
    verify->add_option("--out", o.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*interp) return cmd_interpolate(o);
        if (*formal) return cmd_formal(o);
        if (*split) return cmd_splitting(o);
        if (*sweep) return cmd_sweep(o);
        if (*verify) return cmd_verify(o);
    } catch (const PrecisionError& e) {
        std::cerr << "precision failure: " << e.what() << "\n";
        return kPrecision;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return kConvergence;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kValidation;
    } catch (const ContextError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}
