// Command-line front end: dataset generation, discovery runs, the benchmark
// harness, noise/subsampling studies and plot-data emission.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <thread>

#include "pbed/density_io.hpp"
#include "pbed/pipeline.hpp"

namespace {

using namespace pbed;

int default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(8u, hw == 0 ? 1u : hw));
}

struct DiscoverFlags {
    std::string config_path, case_id, csv_path, output_dir, catalog_path;
    double noise_level = -1.0;
    std::uint64_t noise_seed = 0;
    bool noise_seed_set = false;
    std::string noise_mode;
    int smooth = -1;  // tri-state: unset/-1, off/0, on/1
    int savgol_window = 0, savgol_polyorder = 0;
    std::string derivative_scheme;
    int polyfit_degree = 0, polyfit_halfwidth = 0;
    double fraction = -1.0;
    std::uint64_t fraction_seed = 0;
    bool fraction_seed_set = false;
    double lambda_min = 0.0, lambda_max = 0.0;
    int lambda_count = 0;
    std::vector<double> weights;
    double unit_penalty = -1.0;
    std::string convention;
    bool no_timing = false;
};

void add_discover_flags(CLI::App* cmd, DiscoverFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON run configuration file");
    cmd->add_option("--case", f.case_id, "benchmark case id (a..p)");
    cmd->add_option("--csv", f.csv_path, "density CSV input");
    cmd->add_option("-o,--out", f.output_dir, "output directory");
    cmd->add_option("--catalog", f.catalog_path, "custom basis catalog (JSON)");
    cmd->add_option("--noise-level", f.noise_level, "white noise level, e.g. 0.01 for 1%");
    cmd->add_option("--noise-seed", f.noise_seed, "noise RNG seed")
        ->each([&](const std::string&) { f.noise_seed_set = true; });
    cmd->add_option("--noise-mode", f.noise_mode, "global-std | multiplicative");
    cmd->add_flag("--smooth{1},--no-smooth{0}", f.smooth, "Savitzky-Golay smoothing");
    cmd->add_option("--savgol-window", f.savgol_window, "smoothing window (odd)");
    cmd->add_option("--savgol-polyorder", f.savgol_polyorder, "smoothing polynomial order");
    cmd->add_option("--derivative", f.derivative_scheme, "central | polyfit");
    cmd->add_option("--polyfit-degree", f.polyfit_degree, "polyfit derivative degree");
    cmd->add_option("--polyfit-halfwidth", f.polyfit_halfwidth, "polyfit window halfwidth");
    cmd->add_option("--fraction", f.fraction, "random row fraction in (0,1]");
    cmd->add_option("--fraction-seed", f.fraction_seed, "row subsample seed")
        ->each([&](const std::string&) { f.fraction_seed_set = true; });
    cmd->add_option("--lambda-min", f.lambda_min, "sparsity sweep lower bound");
    cmd->add_option("--lambda-max", f.lambda_max, "sparsity sweep upper bound");
    cmd->add_option("--lambda-count", f.lambda_count, "sparsity sweep size");
    cmd->add_option("--weights", f.weights, "selection weights l1 l2 l3")->expected(3);
    cmd->add_option("--unit-penalty", f.unit_penalty, "score per pairing violation");
    cmd->add_option("--residual-convention", f.convention, "mean-square | raw | relative");
    cmd->add_flag("--no-timing", f.no_timing, "omit runtime stats from the report");
}

RunConfig build_config(const DiscoverFlags& f) {
    RunConfig c;
    if (!f.config_path.empty()) c = load_run_config(f.config_path);
    if (!f.case_id.empty()) {
        c.case_id = f.case_id;
        c.csv_path.clear();
    }
    if (!f.csv_path.empty()) {
        c.csv_path = f.csv_path;
        c.case_id.clear();
    }
    if (!f.output_dir.empty()) c.output_dir = f.output_dir;
    if (!f.catalog_path.empty()) c.catalog_path = f.catalog_path;
    if (f.noise_level >= 0.0) c.pre.noise_level = f.noise_level;
    if (f.noise_seed_set) c.pre.noise_seed = f.noise_seed;
    if (!f.noise_mode.empty())
        c.pre.noise_mode = f.noise_mode == "multiplicative" ? NoiseMode::Multiplicative
                                                            : NoiseMode::GlobalStd;
    if (f.smooth >= 0) c.pre.smooth = f.smooth == 1;
    if (f.savgol_window > 0) c.pre.savgol_window = f.savgol_window;
    if (f.savgol_polyorder > 0) c.pre.savgol_polyorder = f.savgol_polyorder;
    if (!f.derivative_scheme.empty())
        c.pre.derivative = f.derivative_scheme == "polyfit"
                               ? PreprocessConfig::Derivative::Polyfit
                               : PreprocessConfig::Derivative::Central;
    if (f.polyfit_degree > 0) c.pre.polyfit_degree = f.polyfit_degree;
    if (f.polyfit_halfwidth > 0) c.pre.polyfit_halfwidth = f.polyfit_halfwidth;
    if (f.fraction > 0.0) c.pre.subsample_fraction = f.fraction;
    if (f.fraction_seed_set) c.pre.subsample_seed = f.fraction_seed;
    if (f.lambda_min > 0.0) c.sweep.lambda_min = f.lambda_min;
    if (f.lambda_max > 0.0) c.sweep.lambda_max = f.lambda_max;
    if (f.lambda_count > 0) c.sweep.lambda_count = f.lambda_count;
    if (!f.weights.empty()) {
        c.weights.residual = f.weights[0];
        c.weights.term_count = f.weights[1];
        c.weights.penalty = f.weights[2];
        c.weights_set = true;
    }
    if (f.unit_penalty >= 0.0) {
        c.weights.unit_penalty = f.unit_penalty;
        c.weights_set = true;
    }
    if (!f.convention.empty()) {
        if (f.convention == "raw") c.weights.convention = ResidualConvention::RawSumSquares;
        else if (f.convention == "relative")
            c.weights.convention = ResidualConvention::RelativeSumSquares;
        else c.weights.convention = ResidualConvention::MeanSquare;
        c.weights_set = true;
    }
    if (f.no_timing) c.include_timing = false;
    return c;
}

int cmd_generate(const std::string& case_id, bool all, const std::string& out_dir,
                 bool catalog_only) {
    std::filesystem::create_directories(out_dir);
    nlohmann::json catalog = nlohmann::json::array();
    std::vector<std::string> ids;
    if (all || catalog_only)
        for (const auto& bc : benchmark_cases()) ids.push_back(bc.spec.id);
    else ids.push_back(case_id);

    for (const auto& id : ids) {
        const BenchmarkCase& bc = find_case(id);
        catalog.push_back({{"id", bc.spec.id},
                           {"name", bc.spec.name},
                           {"model", bc.reference.render()},
                           {"x0", bc.spec.x0},
                           {"x1", bc.spec.x1},
                           {"dx", bc.spec.dx},
                           {"t0", bc.spec.t0},
                           {"t1", bc.spec.t1},
                           {"dt", bc.spec.dt},
                           {"weights",
                            {bc.spec.weights.residual, bc.spec.weights.term_count,
                             bc.spec.weights.penalty}}});
        if (catalog_only) continue;
        auto [field, spec] = generate_case(id);
        const auto csv = std::filesystem::path(out_dir) / ("case_" + id + ".csv");
        save_density(field, csv);
        save_density_sidecar(field, csv, "pbed generate " + id + " (" + spec.name + ")");
        std::cout << "wrote " << csv.string() << " (" << field.rows() << "x" << field.cols()
                  << ")\n";
    }
    std::ofstream(std::filesystem::path(out_dir) / "cases.json") << catalog.dump(2) << '\n';
    return 0;
}

int cmd_discover(const RunConfig& config) {
    DiscoveryReport report = run_discovery(config);
    std::cout << report.model.render() << "\n";
    if (report.stoichiometry.applicable) {
        std::cout << "breakage rate Gamma(x) = " << report.stoichiometry.gamma.render()
                  << ", stoichiometry beta(x,y) = " << report.stoichiometry.beta_text;
        if (report.stoichiometry.daughter_count_constant)
            std::cout << " (mean daughter count " << report.stoichiometry.daughter_count
                      << ")";
        std::cout << "\n";
    }
    if (report.vs_reference) {
        std::cout << (report.vs_reference->matched ? "matched reference, avg coefficient error "
                                                   : "did NOT match reference, error ")
                  << report.vs_reference->avg_error_pct << "%\n";
        for (const auto& m : report.vs_reference->missing)
            std::cout << "  missing: " << m << "\n";
        for (const auto& e : report.vs_reference->extra) std::cout << "  extra: " << e << "\n";
    }
    if (!config.output_dir.empty())
        std::cout << "report written to " << config.output_dir << "/report.json\n";
    return static_cast<int>(report.status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Population balance equation discovery from transient number-density data"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "simulate a benchmark case to CSV");
    std::string gen_case, gen_out = ".";
    bool gen_all = false, gen_catalog = false;
    gen->add_option("case", gen_case, "case id (a..p)");
    gen->add_flag("--all", gen_all, "generate every benchmark case");
    gen->add_flag("--catalog-only", gen_catalog, "write cases.json without simulating");
    gen->add_option("-o,--out", gen_out, "output directory");

    // discover
    auto* disc = app.add_subcommand("discover", "identify the governing equation");
    DiscoverFlags disc_flags;
    add_discover_flags(disc, disc_flags);

    // benchmark
    auto* bench = app.add_subcommand("benchmark", "run the clean-data benchmark suite");
    std::vector<std::string> bench_cases;
    std::string bench_out;
    int bench_workers = default_workers();
    bench->add_option("--cases", bench_cases, "subset of case ids (default: all)");
    bench->add_option("-o,--out", bench_out, "output directory");
    bench->add_option("--workers", bench_workers, "worker threads");

    // study
    auto* study = app.add_subcommand("study", "noise/data-sampling success-rate study");
    StudyConfig study_config;
    std::string study_out;
    study->add_option("--case", study_config.case_id, "case id")->required();
    study->add_option("--noise-levels", study_config.noise_levels, "noise level grid");
    study->add_option("--fractions", study_config.data_fractions, "data fraction grid");
    study->add_option("--samples", study_config.samples, "samples per cell");
    study->add_option("--seed", study_config.master_seed, "master seed");
    study->add_option("--workers", study_config.workers, "worker threads")
        ->default_val(default_workers());
    study->add_option("-o,--out", study_out, "output directory");

    // plotdata
    auto* plot = app.add_subcommand("plotdata", "emit plot-ready CSV files");
    DiscoverFlags plot_flags;
    std::string plot_study, plot_benchmark, plot_out = "plot";
    add_discover_flags(plot, plot_flags);
    plot->add_option("--study-json", plot_study, "convert a stored study.json");
    plot->add_option("--benchmark-json", plot_benchmark, "convert a stored benchmark.json");
    plot->add_option("--plot-out", plot_out, "plot data directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (!gen_all && !gen_catalog && gen_case.empty()) {
                std::cerr << "generate: give a case id or --all\n";
                return 4;
            }
            return cmd_generate(gen_case, gen_all, gen_out, gen_catalog);
        }
        if (disc->parsed()) return cmd_discover(build_config(disc_flags));
        if (bench->parsed()) {
            if (bench_cases.empty())
                for (const auto& bc : pbed::benchmark_cases()) bench_cases.push_back(bc.spec.id);
            pbed::BenchmarkTable table = pbed::run_benchmark(bench_cases, bench_workers);
            std::cout << table.to_markdown();
            if (!bench_out.empty()) pbed::write_benchmark(table, bench_out);
            bool all_pass = true;
            for (const auto& r : table.rows) all_pass = all_pass && r.pass;
            return all_pass ? 0 : 1;
        }
        if (study->parsed()) {
            pbed::StudyResult result = pbed::run_noise_study(study_config);
            std::cout << result.to_csv();
            if (!study_out.empty()) pbed::write_study(result, study_out);
            return 0;
        }
        if (plot->parsed()) {
            if (!plot_study.empty()) {
                std::ifstream in(plot_study);
                if (!in) throw pbed::ConfigError("cannot open " + plot_study);
                nlohmann::json j;
                in >> j;
                pbed::StudyResult r;
                r.config.case_id = j.value("case", "");
                for (const auto& cj : j.at("cells")) {
                    pbed::StudyCell cell;
                    cell.noise_level = cj.at("noise_level");
                    cell.data_fraction = cj.at("data_fraction");
                    cell.samples = cj.at("samples");
                    cell.successes = cj.at("successes");
                    if (cj.contains("mean_error_pct")) {
                        cell.mean_error_pct = cj.at("mean_error_pct");
                        cell.std_error_pct = cj.at("std_error_pct");
                        cell.has_error_stats = true;
                    }
                    r.cells.push_back(cell);
                }
                pbed::emit_plot_data(r, plot_out);
            } else if (!plot_benchmark.empty()) {
                std::ifstream in(plot_benchmark);
                if (!in) throw pbed::ConfigError("cannot open " + plot_benchmark);
                nlohmann::json j;
                in >> j;
                pbed::BenchmarkTable t;
                for (const auto& rj : j.at("rows")) {
                    pbed::BenchmarkRow row;
                    row.id = rj.at("id");
                    row.name = rj.at("name");
                    row.expectation = rj.at("expectation");
                    row.identified = rj.at("identified");
                    row.expected = rj.at("expected");
                    row.matched = rj.at("matched");
                    row.pass = rj.at("pass");
                    t.rows.push_back(row);
                }
                pbed::emit_plot_data(t, plot_out);
            } else {
                pbed::DiscoveryReport report = pbed::run_discovery(build_config(plot_flags));
                pbed::emit_plot_data(report, plot_out);
            }
            std::cout << "plot data written to " << plot_out << "\n";
            return 0;
        }
    } catch (const pbed::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 4;
    } catch (const pbed::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
