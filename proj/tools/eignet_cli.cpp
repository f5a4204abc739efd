// Command-line driver: quadrature construction, eignet approximation, and
// the theorem experiments. Configuration is a single JSON file; flags cover
// only paths, seed, and verbosity. Exit codes: 0 pass, 1 assertion failure,
// 2 usage/config error.

#include "eignets/eignet.hpp"
#include "eignets/harness.hpp"
#include "eignets/io.hpp"
#include "eignets/quadrature.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eignets;

namespace {

json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config: " + path);
    json cfg;
    try {
        is >> cfg;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse failure: " + std::string(e.what()));
    }
    return cfg;
}

double parse_p(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
        return std::stod(s);
    }
    return j.get<double>();
}

experiment_config parse_experiment_config(const json& j, std::uint64_t seed) {
    experiment_config cfg;
    cfg.manifold = j.value("manifold", cfg.manifold);
    cfg.target = j.value("target", cfg.target);
    if (j.contains("p")) cfg.p = parse_p(j["p"]);
    cfg.beta = j.value("beta", cfg.beta);
    cfg.r = j.value("r", cfg.r);
    cfg.gamma = j.value("gamma", cfg.gamma);
    if (j.contains("sweep")) cfg.sweep = j["sweep"].get<std::vector<int>>();
    cfg.trials = j.value("trials", cfg.trials);
    cfg.kernel_trunc = j.value("kernel_trunc", cfg.kernel_trunc);
    cfg.slack = j.value("slack", cfg.slack);
    cfg.saturate_budget = j.value("saturate_budget", cfg.saturate_budget);
    cfg.discrete_variant = j.value("discrete_variant", cfg.discrete_variant);
    cfg.cutoff_smoothness = j.value("cutoff_smoothness", cfg.cutoff_smoothness);
    cfg.kstar = j.value("kstar", cfg.kstar);
    cfg.slope_lo = j.value("slope_lo", cfg.slope_lo);
    cfg.slope_hi = j.value("slope_hi", cfg.slope_hi);
    cfg.seed = j.value("seed", seed);
    return cfg;
}

quadrature_rule rule_from_config(const json& j, const std::shared_ptr<const manifold>& m) {
    const json& rj = j.at("rule");
    const std::string type = rj.value("type", "equispaced");
    if (type == "equispaced") {
        const auto n = rj.at("n").get<std::size_t>();
        const double order = rj.value("order", static_cast<double>(n - 1));
        point_set c = equispaced_circle(m, n);
        if (rj.value("solve", false)) return solve_weights(c, order);
        return uniform_circle_rule(c, order);
    }
    if (type == "reference") return reference_rule(m, rj.at("order").get<double>());
    if (type == "csv") {
        quadrature_rule r = io::read_rule(rj.at("path").get<std::string>(), m);
        r.certify(rj.value("order", 32.0));
        return r;
    }
    throw std::runtime_error("unknown rule type: " + type);
}

void write_manifest(const fs::path& dir, const json& config_echo, std::uint64_t seed,
                    const json& certificates, const std::vector<std::string>& outputs) {
    json man;
    man["config"] = config_echo;
    man["seed"] = seed;
    man["certificates"] = certificates;
    man["outputs"] = outputs;
    std::ofstream os(dir / "manifest.json", std::ios::binary);
    os << man.dump(2) << "\n";
}

int cmd_quadrature(const json& cfg, const fs::path& out, std::uint64_t seed, bool verbose) {
    const auto m = make_manifold(cfg.value("manifold", "circle"));
    const double L = cfg.at("L").get<double>();

    point_set centers;
    if (cfg.contains("points_csv")) {
        centers = io::read_point_set(cfg.at("points_csv").get<std::string>(), m);
    } else if (cfg.contains("n")) {
        centers = equispaced_circle(m, cfg.at("n").get<std::size_t>());
    } else {
        throw std::runtime_error("quadrature config needs points_csv or n");
    }
    json certs;
    std::vector<std::string> outputs = {"rule.csv", "rule_cert.json"};
    if (cfg.contains("thin_eps")) {
        thinning_certificate tc;
        centers = greedy_separate(centers, cfg.at("thin_eps").get<double>(), &tc);
        json tj = {{"eps", tc.eps},
                   {"separation", tc.separation},
                   {"covering", tc.covering},
                   {"ok", tc.ok}};
        std::ofstream os(out / "thinning_cert.json", std::ios::binary);
        os << tj.dump(2) << "\n";
        certs["thinning"] = tj;
        outputs.push_back("thinning_cert.json");
        if (verbose)
            std::cerr << "thinned to " << centers.size() << " points, q=" << tc.separation << "\n";
    }

    quadrature_rule rule = solve_weights(centers, L);
    io::write_rule(out / "rule.csv", out / "rule_cert.json", rule);

    certs["rule"] = {{"certified_order", rule.certified_order()},
                     {"residual", rule.residual()},
                     {"method", rule.method_name()}};
    write_manifest(out, cfg, seed, certs, outputs);

    const bool ok = rule.residual() <= 1e-9;
    if (verbose || !ok)
        std::cerr << "residual " << rule.residual() << " at order " << L << " ("
                  << rule.method_name() << ")\n";
    return ok ? 0 : 1;
}

int cmd_approximate(const json& cfg, const fs::path& out, std::uint64_t seed, bool verbose) {
    const auto m = make_manifold(cfg.value("manifold", "circle"));
    const double L = cfg.at("L").get<double>();
    const double beta = cfg.value("beta", 4.0);
    const cutoff_function cf(cfg.value("cutoff_smoothness", 4), cfg.value("kstar", 2));

    const int ng = cfg.value("kernel_trunc", 0) > 0
                       ? cfg.at("kernel_trunc").get<int>()
                       : kernel_g::level_for_tail(*m, mask(beta), cfg.value("tail_tol", 1e-8));
    const kernel_g kern(m, mask(beta), ng);

    quadrature_rule rule_star = rule_from_config(cfg, m);

    eignet net = [&] {
        if (cfg.contains("samples_csv")) {
            auto [pts, vals] = io::read_samples(cfg.at("samples_csv").get<std::string>(), m);
            quadrature_rule data_rule = solve_weights(pts, 2.0 * m->product_factor() * L);
            return g_operator_discrete(vals, L, data_rule, rule_star, kern, cf,
                                       cfg.value("allow_undercertified", false));
        }
        spectral_vector f;
        if (cfg.contains("spectral_csv"))
            f = io::read_spectral(cfg.at("spectral_csv").get<std::string>(), m);
        else
            f = make_target(m, cfg.value("target", "abs_sin"), ng, seed).coeffs;
        return g_operator(f, L, rule_star, kern, cf, cfg.value("allow_undercertified", false));
    }();

    io::write_eignet(out / "eignet.csv", out / "eignet_header.json", net);

    // probe-grid error report against the synthesized target
    json report;
    report["kernel_trunc"] = ng;
    report["tail_bound"] = kern.tail_bound();
    report["synth_level"] = net.synth_level();
    double err = -1.0;
    if (!cfg.contains("samples_csv")) {
        spectral_vector f;
        if (cfg.contains("spectral_csv"))
            f = io::read_spectral(cfg.at("spectral_csv").get<std::string>(), m);
        else
            f = make_target(m, cfg.value("target", "abs_sin"), ng, seed).coeffs;
        spectral_vector diff = f;
        spectral_vector ps = net.to_spectral();
        ps *= -1.0;
        diff += ps;
        err = lp_norm(diff, std::numeric_limits<double>::infinity());
        report["sup_error_vs_truncated_target"] = err;
    }
    std::ofstream os(out / "error_report.json", std::ios::binary);
    os << report.dump(2) << "\n";

    json certs;
    certs["rule_star"] = {{"certified_order", rule_star.certified_order()},
                          {"residual", rule_star.residual()}};
    certs["kernel"] = {{"trunc", ng}, {"tail_bound", kern.tail_bound()}};
    certs["cutoff"] = {{"kstar", cf.kstar()}, {"smoothness", cf.smoothness()}};
    write_manifest(out, cfg, seed, certs, {"eignet.csv", "eignet_header.json", "error_report.json"});
    const double tol = cfg.value("error_tol", -1.0);
    if (verbose) std::cerr << "sup error " << err << "\n";
    return (tol > 0.0 && err > tol) ? 1 : 0;
}

int cmd_experiment(const std::string& name, const json& jcfg, const fs::path& out,
                   std::uint64_t seed, bool verbose) {
    experiment_config cfg = parse_experiment_config(jcfg, seed);
    if (cfg.sweep.empty()) throw std::runtime_error("experiment config needs a sweep");

    json certs;
    bool pass = false;
    if (name == "rates" || name == "coeff-bound" || name == "bernstein" || name == "simultaneous") {
        rate_report rep;
        if (name == "rates") rep = rate_experiment(cfg);
        else if (name == "coeff-bound") rep = coeff_bound_experiment(cfg);
        else if (name == "bernstein") rep = bernstein_experiment(cfg);
        else rep = simultaneous_experiment(cfg);
        io::write_rate_report(out / (name + ".csv"), out / (name + "_summary.json"), rep, cfg);
        certs["fit"] = {{"slope", rep.fit.slope}, {"residual", rep.fit.residual}};
        certs["cutoff"] = {{"kstar", cfg.kstar}, {"smoothness", cfg.cutoff_smoothness}};
        certs["note"] = rep.note;
        pass = rep.pass;
        if (verbose) std::cerr << name << " slope " << rep.fit.slope << " pass=" << pass << "\n";
        write_manifest(out, jcfg, cfg.seed, certs, {name + ".csv", name + "_summary.json"});
        return pass ? 0 : 1;
    }
    if (name == "localization") {
        localization_report rep = localization_experiment(cfg);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < rep.levels.size(); ++i)
            rows.push_back({io::format_double(rep.levels[i]), io::format_double(rep.fitted_c[i]), ""});
        io::write_csv(out / "localization.csv", {"scale", "error", "constant"}, rows);
        json sum = {{"experiment", "localization"}, {"spread", rep.spread}, {"pass", rep.pass}};
        std::ofstream os(out / "localization_summary.json", std::ios::binary);
        os << sum.dump(2) << "\n";
        write_manifest(out, jcfg, cfg.seed, json::object(),
                       {"localization.csv", "localization_summary.json"});
        if (verbose) std::cerr << "localization spread " << rep.spread << "\n";
        return rep.pass ? 0 : 1;
    }
    if (name == "mz-check") {
        mz_sweep_report rep = mz_experiment(cfg);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < rep.scales.size(); ++i)
            rows.push_back({io::format_double(rep.scales[i]),
                            io::format_double(rep.reports[i].ratio_min),
                            io::format_double(rep.reports[i].ratio_max)});
        io::write_csv(out / "mz.csv", {"scale", "error", "constant"}, rows);
        json sum = {{"experiment", "mz-check"}, {"pass", rep.pass}};
        std::ofstream os(out / "mz_summary.json", std::ios::binary);
        os << sum.dump(2) << "\n";
        write_manifest(out, jcfg, cfg.seed, json::object(), {"mz.csv", "mz_summary.json"});
        return rep.pass ? 0 : 1;
    }
    throw CLI::ValidationError("experiment",
                               "unknown experiment (rates | coeff-bound | bernstein | "
                               "simultaneous | localization | mz-check): " + name);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"eignet construction and theorem experiments on compact manifolds"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir = "out";
    std::uint64_t seed = 0;
    bool verbose = false;
    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed (config may override)");
    app.add_flag("--verbose", verbose, "diagnostic chatter on stderr");

    auto* q = app.add_subcommand("quadrature", "solve and certify quadrature weights");
    auto* a = app.add_subcommand("approximate", "build an eignet for a target");
    auto* e = app.add_subcommand("experiment", "run a named theorem experiment");
    std::string experiment_name;
    e->add_option("name", experiment_name, "experiment name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return err.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        const json cfg = load_config(config_path);
        fs::path out(out_dir);
        fs::create_directories(out);
        if (q->parsed()) return cmd_quadrature(cfg, out, seed, verbose);
        if (a->parsed()) return cmd_approximate(cfg, out, seed, verbose);
        return cmd_experiment(experiment_name, cfg, out, seed, verbose);
    } catch (const CLI::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
