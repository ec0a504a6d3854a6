// Command-line front end: every subcommand reads weights and initial data,
// runs one library operation, and emits a deterministic JSON or CSV artifact.
// Exit codes: 0 success, 1 domain errors, 2 configuration errors.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "movavg/io.hpp"
#include "movavg/movavg.hpp"

namespace {

using nlohmann::json;

struct scenario_config {
    std::optional<std::string> alphas_csv;
    std::optional<std::string> weights_file;
    std::string initial_csv;
    std::vector<std::string> initial_files;
    double tol = 1e-10;
    std::size_t max_iter = 100000;
    std::size_t steps = 50;
    std::size_t power = 0;
    bool verify_roots = false;
    std::string generator = "identity";
    double parameter = 2.0;
    std::string kind = "arithmetic";
    std::optional<std::string> out_path;
    std::optional<std::string> csv_path;
    std::optional<std::string> trace_path;
    unsigned long long seed = 0;
    unsigned jobs = 1;

    // files referenced by the config, parsed before any computation starts
    std::optional<json> weights_json;
    std::vector<json> initial_jsons;
};

/// Comma-separated doubles.
std::vector<double> parse_csv_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size()) throw movavg::error("cannot parse number '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw movavg::error("empty number list");
    return out;
}

/// Inline weights are renormalized only when the sum is off by less than
/// 1e-9; larger deviations look like typos and are rejected.
movavg::weights weights_from_csv(const std::string& csv) {
    std::vector<double> alphas = parse_csv_doubles(csv);
    double sum = 0.0;
    for (double a : alphas) sum += a;
    if (std::abs(sum - 1.0) >= 1e-9) throw movavg::sum_not_one_error(sum - 1.0);
    for (double& a : alphas) a /= sum;
    return movavg::weights(std::move(alphas));
}

movavg::weights resolve_weights(const scenario_config& cfg) {
    if (cfg.weights_json) return movavg::weights_from_json(*cfg.weights_json);
    if (cfg.alphas_csv) return weights_from_csv(*cfg.alphas_csv);
    throw movavg::error("no weights given: use --alphas or --weights");
}

void emit(const scenario_config& cfg, const std::string& text) {
    if (cfg.out_path)
        movavg::write_text_file(*cfg.out_path, text);
    else
        std::cout << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json json_number_list(const std::vector<double>& xs) {
    json out = json::array();
    for (double x : xs) out.push_back(x);
    return out;
}

int run_limit(const scenario_config& cfg) {
    const movavg::weights w = resolve_weights(cfg);
    const std::vector<double> y = parse_csv_doubles(cfg.initial_csv);
    const double limit = movavg::limit_functional(w, y);
    emit(cfg, movavg::format_double(limit) + "\n");
    return 0;
}

int run_iterate(const scenario_config& cfg) {
    const movavg::weights w = resolve_weights(cfg);
    const std::vector<double> y = parse_csv_doubles(cfg.initial_csv);
    auto state = movavg::recurrence_state::from_scalars(y);

    std::vector<std::vector<double>> trace;
    if (cfg.trace_path)
        for (const auto& v : state.window()) trace.push_back(v);

    movavg::convergence_result res;
    if (cfg.trace_path) {
        // step manually so every term lands in the trace
        movavg::recurrence_state probe = state;
        res = movavg::iterate_until(probe, w, cfg.tol, cfg.max_iter);
        for (std::size_t i = 0; i < res.iterations; ++i) trace.push_back(state.step(w));
        movavg::write_text_file(*cfg.trace_path, movavg::trace_to_csv(trace));
    } else {
        res = movavg::iterate_until(state, w, cfg.tol, cfg.max_iter);
    }

    json out = {{"diagnosis", movavg::to_string(res.diagnosis)},
                {"iterations", res.iterations},
                {"final_residual", res.final_residual}};
    if (res.limit)
        out["limit"] = res.limit->size() == 1 ? json((*res.limit)[0]) : json_number_list(*res.limit);
    emit(cfg, dump(out));
    return 0;
}

int run_check_hypothesis(const scenario_config& cfg) {
    const movavg::weights w = resolve_weights(cfg);
    const movavg::hypothesis_report rep = movavg::check_basic_hypothesis(w, cfg.verify_roots);
    json conditions = json::array();
    for (auto c : rep.conditions) conditions.push_back(movavg::to_string(c));
    json out = {{"holds", rep.holds}, {"conditions", conditions}};
    if (rep.root_certificate) {
        json cert = json::array();
        for (const auto& e : *rep.root_certificate)
            cert.push_back({{"re", e.root.real()},
                            {"im", e.root.imag()},
                            {"modulus", e.modulus},
                            {"multiplicity", e.multiplicity}});
        out["root_certificate"] = cert;
        out["margin"] = rep.margin;
        out["certificate_contradicts"] = rep.certificate_contradicts;
    }
    emit(cfg, dump(out));
    return 0;
}

int run_companion(const scenario_config& cfg) {
    const movavg::weights w = resolve_weights(cfg);
    const auto A = movavg::build_companion(w);
    const auto resid = movavg::eigenvector_identities(w);
    json out = {{"A", movavg::matrix_to_json(A)},
                {"left_residual", resid.left},
                {"right_residual", resid.right}};
    if (movavg::hypothesis_holds(w)) out["limit"] = movavg::matrix_to_json(movavg::companion_limit(w));
    if (cfg.csv_path) movavg::write_text_file(*cfg.csv_path, movavg::matrix_to_csv(A));
    emit(cfg, dump(out));
    return 0;
}

int run_gauss_seidel(const scenario_config& cfg) {
    const movavg::weights w = resolve_weights(cfg);
    const auto T = movavg::build_T(w);
    json out = {{"T", movavg::matrix_to_json(T)}};
    if (cfg.power > 0) {
        json powers = json::array();
        auto P = T;
        powers.push_back(movavg::matrix_to_json(P));
        for (std::size_t k = 1; k < cfg.power; ++k) {
            P = P * T;
            powers.push_back(movavg::matrix_to_json(P));
        }
        out["powers"] = powers;
    }
    if (movavg::hypothesis_holds(w)) out["limit"] = movavg::matrix_to_json(movavg::t_limit(w));
    if (cfg.csv_path) movavg::write_text_file(*cfg.csv_path, movavg::matrix_to_csv(T));
    emit(cfg, dump(out));
    return 0;
}

int run_circulant(const scenario_config& cfg) {
    const movavg::weights w = resolve_weights(cfg);
    const auto spec = movavg::build_circulant(w);
    const auto limit = movavg::krafft_limit(spec);
    json out = {{"C", movavg::matrix_to_json(spec.C)},
                {"support", spec.support},
                {"gcd_period", spec.gcd_period},
                {"gcd_differences", spec.gcd_differences},
                {"limit_exists", limit.has_value()}};
    if (limit) out["limit"] = movavg::matrix_to_json(*limit);
    emit(cfg, dump(out));
    return 0;
}

int run_kmean(const scenario_config& cfg) {
    const movavg::weights w = resolve_weights(cfg);
    const std::vector<double> y = parse_csv_doubles(cfg.initial_csv);
    const movavg::mean_generator gen = movavg::builtin_generator(cfg.generator, cfg.parameter);

    const double closed = movavg::kolmogorov_limit(gen, w, y);
    std::vector<double> window = y;
    std::size_t iters = 0;
    for (; iters < cfg.max_iter; ++iters) {
        double lo = window[0], hi = window[0];
        for (double v : window) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo < cfg.tol) break;
        const double next = movavg::kolmogorov_step(gen, w, window);
        window.erase(window.begin());
        window.push_back(next);
    }
    json out = {{"limit", closed}, {"iterated", window.back()}, {"iterations", iters}};
    emit(cfg, dump(out));
    return 0;
}

int run_matmean(const scenario_config& cfg) {
    const movavg::weights w = resolve_weights(cfg);
    movavg::matrix_mean_kind kind;
    if (cfg.kind == "arithmetic")
        kind = movavg::matrix_mean_kind::arithmetic;
    else if (cfg.kind == "harmonic")
        kind = movavg::matrix_mean_kind::harmonic;
    else if (cfg.kind == "resolvent")
        kind = movavg::matrix_mean_kind::resolvent;
    else
        throw movavg::bad_parameter_error("unknown mean kind '" + cfg.kind + "'");

    std::vector<movavg::spd_matrix> initial;
    for (const json& j : cfg.initial_jsons) initial.push_back(movavg::spd_from_json(j));

    const auto res = movavg::moving_matrix_mean(kind, w, initial, cfg.tol, cfg.max_iter);
    json out = {{"limit", movavg::spd_to_json(res.limit)},
                {"iterations", res.convergence.iterations},
                {"diagnosis", movavg::to_string(res.convergence.diagnosis)},
                {"iterates_produced", res.iterates.size()}};
    emit(cfg, dump(out));
    return 0;
}

std::string residuals_to_csv(const std::vector<double>& residuals) {
    std::ostringstream os;
    os << "step,residual\n";
    for (std::size_t i = 0; i < residuals.size(); ++i)
        os << i << ',' << movavg::format_double(residuals[i]) << '\n';
    return os.str();
}

int run_proxavg(const scenario_config& cfg) {
    const movavg::weights w = resolve_weights(cfg);
    std::vector<movavg::grid_function> initial;
    for (const json& j : cfg.initial_jsons) initial.push_back(movavg::grid_function_from_json(j));

    movavg::prox_avg_state state(initial, w);
    const auto run = movavg::moving_proximal_average(state, cfg.steps);
    if (cfg.csv_path) movavg::write_text_file(*cfg.csv_path, residuals_to_csv(run.envelope_residuals));

    const auto cw = movavg::cumulative(w);
    const movavg::grid_function limit = movavg::proximal_average(cw.lambda, initial);
    json out = {{"steps", run.iterates.size()},
                {"max_envelope_residual",
                 run.envelope_residuals.empty()
                     ? 0.0
                     : *std::max_element(run.envelope_residuals.begin(), run.envelope_residuals.end())},
                {"limit", movavg::grid_function_to_json(limit)},
                {"final", movavg::grid_function_to_json(run.iterates.back())}};
    emit(cfg, dump(out));
    return 0;
}

int run_epiavg(const scenario_config& cfg) {
    const movavg::weights w = resolve_weights(cfg);
    std::vector<movavg::grid_function> initial;
    for (const json& j : cfg.initial_jsons) initial.push_back(movavg::grid_function_from_json(j));

    const auto res = movavg::moving_epi_average(w, initial, cfg.steps);

    // per-step certificate: envelope distance from the mapped-back iterate to
    // the epi-limit
    const movavg::grid_function limit_env = movavg::moreau_envelope(res.limit);
    std::vector<double> residuals;
    residuals.reserve(res.conjugate_iterates.size());
    for (const auto& conj_iter : res.conjugate_iterates) {
        const movavg::grid_function primal = movavg::fenchel_conjugate(conj_iter);
        const movavg::grid_function env = movavg::moreau_envelope(primal);
        double sup = 0.0;
        for (std::size_t i = 0; i < env.size(); ++i)
            sup = std::max(sup, std::abs(env.value(i) - limit_env.value(i)));
        residuals.push_back(sup);
    }
    if (cfg.csv_path) movavg::write_text_file(*cfg.csv_path, residuals_to_csv(residuals));

    json out = {{"steps", res.conjugate_iterates.size()},
                {"limit_conjugate", movavg::grid_function_to_json(res.limit_conjugate)},
                {"limit", movavg::grid_function_to_json(res.limit)}};
    if (!residuals.empty()) out["final_envelope_distance"] = residuals.back();
    emit(cfg, dump(out));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"moving averages, means, and proximal/epi-averages"};
    app.require_subcommand(1);

    scenario_config cfg;

    auto add_weight_opts = [&](CLI::App* sub) {
        sub->add_option("--alphas", cfg.alphas_csv, "weights as comma-separated floats");
        sub->add_option("--weights", cfg.weights_file, "weights JSON file");
        sub->add_option("--out", cfg.out_path, "write the artifact here instead of stdout");
        sub->add_option("--seed", cfg.seed, "seed for randomized suites");
        sub->add_option("--jobs", cfg.jobs, "parallel workers for randomized suites");
    };

    CLI::App* limit = app.add_subcommand("limit", "closed-form limit of the moving average");
    add_weight_opts(limit);
    limit->add_option("--initial", cfg.initial_csv, "initial terms, comma separated")->required();

    CLI::App* iterate = app.add_subcommand("iterate", "run the recurrence to convergence");
    add_weight_opts(iterate);
    iterate->add_option("--initial", cfg.initial_csv)->required();
    iterate->add_option("--tol", cfg.tol);
    iterate->add_option("--max-iter", cfg.max_iter);
    iterate->add_option("--trace", cfg.trace_path, "CSV trace of iterates");

    CLI::App* hypo = app.add_subcommand("check-hypothesis", "gcd criterion and certificates");
    add_weight_opts(hypo);
    hypo->add_flag("--verify-roots", cfg.verify_roots, "cross-check with the root finder");

    CLI::App* comp = app.add_subcommand("companion", "companion matrix and its power limit");
    add_weight_opts(comp);
    comp->add_option("--csv", cfg.csv_path, "write the matrix as CSV");

    CLI::App* gs = app.add_subcommand("gauss-seidel", "sweep matrix, traces, and limit");
    add_weight_opts(gs);
    gs->add_option("--power", cfg.power, "emit the first N powers of the sweep");
    gs->add_option("--csv", cfg.csv_path, "write the sweep matrix as CSV");

    CLI::App* circ = app.add_subcommand("circulant", "circulant support, gcds, verdict, limit");
    add_weight_opts(circ);

    CLI::App* kmean = app.add_subcommand("kmean", "moving f-mean limit");
    add_weight_opts(kmean);
    kmean->add_option("--generator", cfg.generator, "identity, log, power, reciprocal");
    kmean->add_option("--parameter", cfg.parameter, "exponent for the power generator");
    kmean->add_option("--initial", cfg.initial_csv)->required();
    kmean->add_option("--tol", cfg.tol);
    kmean->add_option("--max-iter", cfg.max_iter);

    CLI::App* matmean = app.add_subcommand("matmean", "moving SPD-matrix mean");
    add_weight_opts(matmean);
    matmean->add_option("--kind", cfg.kind, "arithmetic, harmonic, resolvent");
    matmean->add_option("--initial", cfg.initial_files, "matrix JSON files")
        ->required()
        ->delimiter(',');
    matmean->add_option("--tol", cfg.tol);
    matmean->add_option("--max-iter", cfg.max_iter);

    CLI::App* proxavg = app.add_subcommand("proxavg", "moving proximal average");
    add_weight_opts(proxavg);
    proxavg->add_option("--initial", cfg.initial_files, "grid-function JSON files")
        ->required()
        ->delimiter(',');
    proxavg->add_option("--steps", cfg.steps);
    proxavg->add_option("--residuals-csv", cfg.csv_path, "per-step envelope residuals");

    CLI::App* epiavg = app.add_subcommand("epiavg", "moving epi-average via conjugates");
    add_weight_opts(epiavg);
    epiavg->add_option("--initial", cfg.initial_files, "grid-function JSON files")
        ->required()
        ->delimiter(',');
    epiavg->add_option("--steps", cfg.steps);
    epiavg->add_option("--residuals-csv", cfg.csv_path, "per-step envelope distances to the limit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (const char* env_seed = std::getenv("MOVINGMEANS_SEED")) {
        try {
            cfg.seed = std::stoull(env_seed);
        } catch (...) {
            std::cerr << "config error: MOVINGMEANS_SEED is not a number\n";
            return 2;
        }
    }

    // resolve referenced files before any computation starts
    try {
        if (cfg.weights_file) cfg.weights_json = movavg::load_json_file(*cfg.weights_file);
        for (const std::string& path : cfg.initial_files)
            cfg.initial_jsons.push_back(movavg::load_json_file(path));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (limit->parsed()) return run_limit(cfg);
        if (iterate->parsed()) return run_iterate(cfg);
        if (hypo->parsed()) return run_check_hypothesis(cfg);
        if (comp->parsed()) return run_companion(cfg);
        if (gs->parsed()) return run_gauss_seidel(cfg);
        if (circ->parsed()) return run_circulant(cfg);
        if (kmean->parsed()) return run_kmean(cfg);
        if (matmean->parsed()) return run_matmean(cfg);
        if (proxavg->parsed()) return run_proxavg(cfg);
        if (epiavg->parsed()) return run_epiavg(cfg);
    } catch (const movavg::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
