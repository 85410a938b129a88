#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "polyrep/experiments.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::string phi, n_grid, sieve_cache, out_dir;
    int j = 0, threads = 0;
    double epsilon = 0, theta = 0, trunc_tol = 0, quad_tol = 0;
    bool json = false;
};

void attach_experiment_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "experiment config file")->required();
    cmd->add_option("--phi", o.phi, "polynomial a1,a2,...,ak (low degree first)");
    cmd->add_option("--j", o.j, "number of summands");
    cmd->add_option("--epsilon", o.epsilon, "window epsilon");
    cmd->add_option("--theta", o.theta, "H exponent (H = round(N^theta))");
    cmd->add_option("--n-grid", o.n_grid, "comma-separated N values");
    cmd->add_option("--truncation-tol", o.trunc_tol, "series truncation tolerance");
    cmd->add_option("--quadrature-tol", o.quad_tol, "quadrature abs tolerance");
    cmd->add_option("--sieve-cache", o.sieve_cache, "Mangoldt cache path");
    cmd->add_option("--out-dir", o.out_dir, "output directory");
    cmd->add_option("--threads", o.threads, "thread count");
    cmd->add_flag("--json", o.json, "also write a JSON mirror of the report");
}

polyrep::ExperimentConfig load_with_overrides(CLI::App* cmd, const Overrides& o) {
    using polyrep::config_error;
    polyrep::ExperimentConfig cfg = polyrep::parse_config_file(o.config_path);
    if (cmd->count("--phi")) cfg.phi = polyrep::IntPolynomial::parse(o.phi);
    if (cmd->count("--j")) cfg.j = o.j;
    if (cmd->count("--epsilon")) cfg.epsilon = o.epsilon;
    if (cmd->count("--theta")) cfg.h_exponent = o.theta;
    if (cmd->count("--truncation-tol")) cfg.truncation_tol = o.trunc_tol;
    if (cmd->count("--quadrature-tol")) cfg.quadrature_tol = o.quad_tol;
    if (cmd->count("--sieve-cache")) cfg.sieve_cache = o.sieve_cache;
    if (cmd->count("--out-dir")) cfg.out_dir = o.out_dir;
    if (cmd->count("--threads")) cfg.threads = o.threads;
    if (cmd->count("--n-grid")) {
        cfg.n_grid.clear();
        std::size_t pos = 0;
        const std::string& v = o.n_grid;
        while (pos <= v.size() && !v.empty()) {
            const std::size_t comma = v.find(',', pos);
            const std::string tok =
                v.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (!tok.empty()) cfg.n_grid.push_back(polyrep::detail::parse_int(tok, "n-grid"));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    if (const char* env = std::getenv("POLYREP_THREADS")) {
        const long t = std::strtol(env, nullptr, 10);
        if (t < 1) throw config_error("POLYREP_THREADS must be a positive integer");
        cfg.threads = int(t);
    }
    polyrep::validate_config(cfg);
    return cfg;
}

int run(int argc, char** argv) {
    CLI::App app{"circle-method experiment lab for polynomial representation counts"};
    app.require_subcommand(1);

    auto* sieve = app.add_subcommand("sieve", "build and save a Mangoldt table cache");
    long long sieve_limit = 0;
    std::string sieve_out;
    sieve->add_option("--limit", sieve_limit, "table limit")->required();
    sieve->add_option("--out", sieve_out, "cache file path")->required();

    Overrides o;
    auto* avg = app.add_subcommand("avg", "short-interval average vs predicted main term");
    auto* decomp = app.add_subcommand("decomp", "arc decomposition audit at one N");
    auto* l2 = app.add_subcommand("l2", "major-arc L2 error scaling");
    auto* tolev = app.add_subcommand("tolev", "mean-square mass scaling near 0");
    auto* kernel = app.add_subcommand("kernel", "smoothing-kernel lemma sweep");
    for (CLI::App* cmd : {avg, decomp, l2, tolev, kernel}) attach_experiment_options(cmd, o);
    long long decomp_n = 0;
    decomp->add_option("--n", decomp_n, "the N to decompose at")->required();

    auto* plot = app.add_subcommand("plot", "render SVG charts from a report CSV");
    std::string report_path, plot_out;
    plot->add_option("--report", report_path, "report CSV path")->required();
    plot->add_option("--out", plot_out, "chart output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int r = app.exit(e);
        return r == 0 ? 0 : 2; // bad invocation is a config error
    }

    if (sieve->parsed()) {
        if (sieve_limit < 1) throw polyrep::config_error("sieve: --limit must be >= 1");
        const polyrep::MangoldtTable t = polyrep::build_mangoldt(sieve_limit);
        polyrep::save_cache(t, sieve_out);
        std::cout << "wrote " << sieve_out << " (limit " << sieve_limit << ", psi(limit) "
                  << polyrep::format_cell(t.psi[std::size_t(t.limit)]) << ")\n";
        return 0;
    }
    if (plot->parsed()) {
        const polyrep::Report r = polyrep::read_csv_file(report_path);
        const auto files = polyrep::emit_plots(r, plot_out);
        std::cout << "wrote " << files.size() << " chart(s) to " << plot_out << "\n";
        return 0;
    }

    CLI::App* active = nullptr;
    std::string stem;
    const std::pair<CLI::App*, const char*> experiments[] = {
        {avg, "avg"}, {decomp, "decomp"}, {l2, "l2"}, {tolev, "tolev"}, {kernel, "kernel"}};
    for (const auto& [cmd, name] : experiments) {
        if (cmd->parsed()) {
            active = cmd;
            stem = name;
        }
    }
    const polyrep::ExperimentConfig cfg = load_with_overrides(active, o);

    polyrep::RunResult rr;
    if (active == avg) rr = polyrep::run_average(cfg);
    else if (active == decomp) rr = polyrep::run_decomposition(cfg, decomp_n);
    else if (active == l2) rr = polyrep::run_l2_scaling(cfg);
    else if (active == tolev) rr = polyrep::run_tolev_scaling(cfg);
    else rr = polyrep::run_kernel_check(cfg);

    std::filesystem::create_directories(cfg.out_dir);
    const std::string csv = (std::filesystem::path(cfg.out_dir) / (stem + ".csv")).string();
    polyrep::write_csv_file(rr.report, csv);
    std::cout << "wrote " << csv << " (" << rr.report.rows.size() << " rows)\n";
    if (o.json) {
        const std::string js = (std::filesystem::path(cfg.out_dir) / (stem + ".json")).string();
        polyrep::write_json_file(rr.report, js);
        std::cout << "wrote " << js << "\n";
    }
    if (!rr.verdict.empty()) std::cout << "verdict: " << rr.verdict << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const polyrep::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const polyrep::cache_error& e) {
        std::cerr << "cache error: " << e.what() << "\n";
        return 2;
    } catch (const polyrep::tolerance_error& e) {
        std::cerr << "tolerance failure: " << e.what() << "\n";
        return 4;
    } catch (const polyrep::precondition_error& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return 3;
    } catch (const std::overflow_error& e) {
        std::cerr << "overflow: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
