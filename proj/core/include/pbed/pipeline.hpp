#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pbed/cases.hpp"
#include "pbed/density_io.hpp"
#include "pbed/model.hpp"
#include "pbed/selector.hpp"

namespace pbed {

struct PreprocessConfig {
    double noise_level = 0.0;
    std::uint64_t noise_seed = 0;
    NoiseMode noise_mode = NoiseMode::GlobalStd;

    bool smooth = false;  // Savitzky-Golay along x before differentiation
    int savgol_window = 11;
    int savgol_polyorder = 3;
    bool smooth_for_integrals = false;  // library columns default to the raw field

    enum class Derivative { Central, Polyfit };
    Derivative derivative = Derivative::Central;
    int polyfit_degree = 3;
    int polyfit_halfwidth = 5;

    double subsample_fraction = 1.0;
    std::uint64_t subsample_seed = 0;

    /// The treatment applied to noisy benchmark data: smooth, then local
    /// polynomial derivatives; integrals stay on the raw noisy field.
    static PreprocessConfig noisy_defaults();
};

struct SweepConfig {
    double lambda_min = 1e-3;
    double lambda_max = 10.0;
    int lambda_count = 60;

    std::vector<double> grid() const;
};

struct RunConfig {
    std::string case_id;   // exactly one of case_id / csv_path must be set
    std::string csv_path;

    PreprocessConfig pre;
    SweepConfig sweep;
    SelectWeights weights;     // ignored for benchmark cases unless weights_set
    bool weights_set = false;  // explicit weights override the case catalog
    std::string catalog_path;  // optional custom basis catalog (JSON)
    std::string output_dir;    // empty: nothing written
    bool include_timing = true;

    void validate() const;
};

/// Schema-checked JSON round trip for RunConfig; every key has a mirroring
/// CLI flag in the pbed tool.
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& config);

BasisCatalog load_catalog(const std::filesystem::path& path);

enum class DiscoveryStatus { ModelFound = 0, NullModel = 2, NoRealizableModel = 3 };

struct DiscoveryReport {
    DiscoveryStatus status = DiscoveryStatus::NullModel;
    PBEModel model;      // after OR resolution
    PBEModel raw_model;  // as formulated from the winning solution
    Stoichiometry stoichiometry;
    SparseSolution selected;
    SolutionPool pool;   // full audit trail of the sweep
    std::optional<CoefficientError> vs_reference;
    RunConfig config;
    double runtime_seconds = 0.0;
    std::optional<DensityField> input_field;  // the preprocessed field (not serialized)

    std::string to_json(int indent = 2) const;
};

/// End-to-end discovery: load or generate, preprocess, differentiate, sweep,
/// select, formulate, resolve, deduce kernels.
DiscoveryReport run_discovery(const RunConfig& config);

/// Write report.json (and the pool audit) under dir.
void write_report(const DiscoveryReport& report, const std::filesystem::path& dir);

struct BenchmarkRow {
    std::string id;
    std::string name;
    std::string expectation;  // match | match-large-error | unmatched-missing-Dagg(y)
    std::string identified;
    std::string expected;
    bool matched = false;
    double avg_error_pct = 0.0;
    bool pass = false;  // row behaves as the expectation ledger demands
    std::vector<std::string> missing, extra;
    double runtime_seconds = 0.0;
};

struct BenchmarkTable {
    std::vector<BenchmarkRow> rows;
    std::string to_json(int indent = 2) const;
    std::string to_csv() const;       // stable columns only (no timing)
    std::string to_markdown() const;
};

/// Clean-data identification across benchmark cases with catalog weights.
BenchmarkTable run_benchmark(const std::vector<std::string>& ids, int workers = 1);

struct StudyConfig {
    std::string case_id;
    std::vector<double> noise_levels = {0.0, 0.0025, 0.005, 0.0075, 0.01};
    std::vector<double> data_fractions = {0.2, 0.4, 0.6, 0.8, 1.0};
    int samples = 100;
    std::uint64_t master_seed = 1;
    int workers = 1;
};

struct StudyCell {
    double noise_level = 0.0;
    double data_fraction = 1.0;
    int samples = 0;
    int successes = 0;
    double mean_error_pct = 0.0;  // among successes; meaningless when none
    double std_error_pct = 0.0;
    bool has_error_stats = false;
    std::vector<std::uint64_t> seeds;
};

struct StudyResult {
    StudyConfig config;
    std::vector<StudyCell> cells;
    std::string to_json(int indent = 2) const;
    std::string to_csv() const;  // long format, one row per cell
};

/// Success-rate matrix over (noise level x data fraction), `samples` seeded
/// runs per cell; success means exact term-set identification.
StudyResult run_noise_study(const StudyConfig& config);

void write_study(const StudyResult& result, const std::filesystem::path& dir);
void write_benchmark(const BenchmarkTable& table, const std::filesystem::path& dir);

/// Plot-ready CSV emission (no rendering): density snapshots for a report,
/// the long-format matrix for a study, the Table-shaped CSV for a benchmark.
void emit_plot_data(const DiscoveryReport& report, const std::filesystem::path& dir);
void emit_plot_data(const StudyResult& study, const std::filesystem::path& dir);
void emit_plot_data(const BenchmarkTable& table, const std::filesystem::path& dir);

}  // namespace pbed
