#include "pbed/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "pbed/parallel.hpp"
#include "pbed/random.hpp"

namespace pbed {

using nlohmann::json;

PreprocessConfig PreprocessConfig::noisy_defaults() {
    PreprocessConfig pre;
    pre.smooth = true;
    pre.derivative = Derivative::Polyfit;
    return pre;
}

std::vector<double> SweepConfig::grid() const {
    if (lambda_count < 1 || lambda_min <= 0.0 || lambda_max < lambda_min)
        throw ConfigError("invalid sparsity sweep grid");
    std::vector<double> g(static_cast<std::size_t>(lambda_count));
    if (lambda_count == 1) {
        g[0] = lambda_min;
        return g;
    }
    for (int i = 0; i < lambda_count; ++i)
        g[static_cast<std::size_t>(i)] =
            lambda_min * std::pow(lambda_max / lambda_min,
                                  static_cast<double>(i) / (lambda_count - 1));
    return g;
}

void RunConfig::validate() const {
    if (case_id.empty() == csv_path.empty())
        throw ConfigError("exactly one input source (case id or density CSV) is required");
    if (pre.noise_level < 0.0) throw ConfigError("noise level must be non-negative");
    if (pre.subsample_fraction <= 0.0 || pre.subsample_fraction > 1.0)
        throw ConfigError("subsample fraction must lie in (0, 1]");
    (void)sweep.grid();
    weights.validate();
}

namespace {

const char* to_string(DiscoveryStatus s) {
    switch (s) {
        case DiscoveryStatus::ModelFound: return "model-found";
        case DiscoveryStatus::NullModel: return "null-model";
        case DiscoveryStatus::NoRealizableModel: return "no-realizable-model";
    }
    return "unknown";
}

const char* to_string(ResidualConvention c) {
    switch (c) {
        case ResidualConvention::MeanSquare: return "mean-square";
        case ResidualConvention::RawSumSquares: return "raw";
        case ResidualConvention::RelativeSumSquares: return "relative";
    }
    return "unknown";
}

ResidualConvention convention_from(const std::string& s) {
    if (s == "mean-square") return ResidualConvention::MeanSquare;
    if (s == "raw") return ResidualConvention::RawSumSquares;
    if (s == "relative") return ResidualConvention::RelativeSumSquares;
    throw ConfigError("unknown residual convention '" + s + "'");
}

json weights_to_json(const SelectWeights& w) {
    return {{"residual", w.residual},
            {"terms", w.term_count},
            {"penalty", w.penalty},
            {"unit_penalty", w.unit_penalty},
            {"convention", to_string(w.convention)}};
}

SelectWeights weights_from_json(const json& j) {
    SelectWeights w;
    w.residual = j.value("residual", 1.0);
    w.term_count = j.value("terms", 1.0);
    w.penalty = j.value("penalty", 1.0);
    w.unit_penalty = j.value("unit_penalty", 1.0);
    if (j.contains("convention")) w.convention = convention_from(j.at("convention"));
    return w;
}

json model_to_json(const PBEModel& model) {
    json terms = json::array();
    for (const auto& t : model.terms) {
        json columns = json::array();
        for (const auto& col : t.columns) {
            json alts = json::array();
            for (const auto& alt : col.alternates)
                alts.push_back({{"name", alt.alternate.name()}, {"scale", alt.scale}});
            columns.push_back({{"name", col.descriptor.name()},
                               {"coefficient", col.coefficient},
                               {"alternates", alts}});
        }
        json kt = json::array();
        for (const auto& k : t.kernel.terms)
            kt.push_back({{"coeff", k.coeff}, {"a", k.mono.a}, {"b", k.mono.b}});
        terms.push_back({{"process", pbed::to_string(t.process)},
                         {"coefficient", t.coefficient},
                         {"kernel", t.kernel.render()},
                         {"kernel_terms", kt},
                         {"columns", columns}});
    }
    return {{"text", model.render()},
            {"terms", terms},
            {"realizable", model.realizable()},
            {"combination", model.combination},
            {"lambda", model.lambda}};
}

json solution_to_json(const SparseSolution& s, const SymbolicVector* symbols) {
    json names = json::array();
    json coeffs = json::array();
    for (std::size_t idx : s.support) {
        if (symbols && idx < symbols->size()) names.push_back((*symbols)[idx].primary.name());
        else names.push_back(idx);
        coeffs.push_back(s.coefficients(static_cast<Eigen::Index>(idx)));
    }
    return {{"combination", s.combination}, {"lambda", s.lambda},
            {"support", names},             {"coefficients", coeffs},
            {"residual_sq", s.residual_sq}, {"residual_rel", s.residual_rel},
            {"terms", s.term_count},        {"penalty", s.penalty},
            {"cost", s.cost}};
}

json config_to_json_impl(const RunConfig& c) {
    json input;
    if (!c.case_id.empty()) input["case"] = c.case_id;
    else input["csv"] = c.csv_path;

    json j{{"input", input},
           {"noise",
            {{"level", c.pre.noise_level},
             {"seed", c.pre.noise_seed},
             {"mode", c.pre.noise_mode == NoiseMode::GlobalStd ? "global-std"
                                                               : "multiplicative"}}},
           {"smoothing",
            {{"enabled", c.pre.smooth},
             {"window", c.pre.savgol_window},
             {"polyorder", c.pre.savgol_polyorder},
             {"use_for_integrals", c.pre.smooth_for_integrals}}},
           {"derivative",
            {{"scheme",
              c.pre.derivative == PreprocessConfig::Derivative::Central ? "central"
                                                                        : "polyfit"},
             {"degree", c.pre.polyfit_degree},
             {"halfwidth", c.pre.polyfit_halfwidth}}},
           {"subsample",
            {{"fraction", c.pre.subsample_fraction}, {"seed", c.pre.subsample_seed}}},
           {"sweep",
            {{"lambda_min", c.sweep.lambda_min},
             {"lambda_max", c.sweep.lambda_max},
             {"count", c.sweep.lambda_count}}},
           {"output_dir", c.output_dir},
           {"timing", c.include_timing}};
    if (c.weights_set) j["weights"] = weights_to_json(c.weights);
    if (!c.catalog_path.empty()) j["catalog"] = c.catalog_path;
    return j;
}

}  // namespace

std::string run_config_to_json(const RunConfig& config) {
    return config_to_json_impl(config).dump(2);
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }

    static const std::set<std::string> known = {"input",      "noise",  "smoothing",
                                                "derivative", "subsample", "sweep",
                                                "weights",    "catalog",   "output_dir",
                                                "timing"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    }

    RunConfig c;
    if (!j.contains("input")) throw ConfigError("config needs an input section");
    const auto& input = j.at("input");
    if (input.contains("case")) c.case_id = input.at("case").get<std::string>();
    if (input.contains("csv")) c.csv_path = input.at("csv").get<std::string>();

    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        c.pre.noise_level = n.value("level", 0.0);
        c.pre.noise_seed = n.value("seed", std::uint64_t{0});
        const std::string mode = n.value("mode", "global-std");
        if (mode == "global-std") c.pre.noise_mode = NoiseMode::GlobalStd;
        else if (mode == "multiplicative") c.pre.noise_mode = NoiseMode::Multiplicative;
        else throw ConfigError("unknown noise mode '" + mode + "'");
    }
    if (j.contains("smoothing")) {
        const auto& s = j.at("smoothing");
        c.pre.smooth = s.value("enabled", false);
        c.pre.savgol_window = s.value("window", 11);
        c.pre.savgol_polyorder = s.value("polyorder", 3);
        c.pre.smooth_for_integrals = s.value("use_for_integrals", false);
    }
    if (j.contains("derivative")) {
        const auto& d = j.at("derivative");
        const std::string scheme = d.value("scheme", "central");
        if (scheme == "central") c.pre.derivative = PreprocessConfig::Derivative::Central;
        else if (scheme == "polyfit") c.pre.derivative = PreprocessConfig::Derivative::Polyfit;
        else throw ConfigError("unknown derivative scheme '" + scheme + "'");
        c.pre.polyfit_degree = d.value("degree", 3);
        c.pre.polyfit_halfwidth = d.value("halfwidth", 5);
    }
    if (j.contains("subsample")) {
        const auto& s = j.at("subsample");
        c.pre.subsample_fraction = s.value("fraction", 1.0);
        c.pre.subsample_seed = s.value("seed", std::uint64_t{0});
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        c.sweep.lambda_min = s.value("lambda_min", 1e-3);
        c.sweep.lambda_max = s.value("lambda_max", 10.0);
        c.sweep.lambda_count = s.value("count", 60);
    }
    if (j.contains("weights")) {
        c.weights = weights_from_json(j.at("weights"));
        c.weights_set = true;
    }
    if (j.contains("catalog")) c.catalog_path = j.at("catalog").get<std::string>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("timing")) c.include_timing = j.at("timing").get<bool>();
    c.validate();
    return c;
}

BasisCatalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open catalog file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("catalog file is not valid JSON: " + std::string(e.what()));
    }
    const auto parse_list = [&](const char* key) {
        std::vector<BasisFunction> out;
        if (!j.contains(key)) return out;
        for (const auto& item : j.at(key))
            out.push_back({item.value("a", 0), item.value("b", 0), item.value("multiplier", 1.0)});
        return out;
    };
    BasisCatalog c;
    c.agg = parse_list("agg");
    c.bkg_birth = parse_list("bkg_birth");
    c.bkg_death = parse_list("bkg_death");
    c.growth = parse_list("growth");
    return c;
}

namespace {

struct PreparedInput {
    DensityField field_for_library;     // raw (or noisy) field the integrals see
    DerivativeVector ndot;
    RowMask mask;
    const BenchmarkCase* benchmark = nullptr;  // when the input is a case id
};

PreparedInput prepare_input(const RunConfig& config, const DensityField* pregenerated) {
    DensityField clean;
    const BenchmarkCase* bc = nullptr;
    if (!config.case_id.empty()) {
        bc = &find_case(config.case_id);
        clean = pregenerated ? *pregenerated : simulate(bc->spec);
    } else {
        clean = load_density(config.csv_path);
    }

    const PreprocessConfig& pre = config.pre;
    DensityField working = pre.noise_level > 0.0
                               ? add_white_noise(clean, pre.noise_level, pre.noise_seed,
                                                 pre.noise_mode)
                               : std::move(clean);

    std::optional<DensityField> smoothed;
    if (pre.smooth)
        smoothed = smooth_savgol(working, pre.savgol_window, pre.savgol_polyorder);
    const DensityField& deriv_source = smoothed ? *smoothed : working;

    DerivativeVector ndot =
        pre.derivative == PreprocessConfig::Derivative::Central
            ? time_derivative(deriv_source)
            : polyfit_derivative(deriv_source, pre.polyfit_degree, pre.polyfit_halfwidth);

    RowMask mask = subsample_rows(working.flat_size(), pre.subsample_fraction,
                                  pre.subsample_seed);

    PreparedInput out{pre.smooth_for_integrals && smoothed ? std::move(*smoothed)
                                                           : std::move(working),
                      std::move(ndot), std::move(mask), bc};
    return out;
}

}  // namespace

DiscoveryReport run_discovery(const RunConfig& config) {
    config.validate();
    const auto t_start = std::chrono::steady_clock::now();

    PreparedInput input = prepare_input(config, nullptr);

    BasisCatalog catalog = config.catalog_path.empty() ? BasisCatalog::standard()
                                                       : load_catalog(config.catalog_path);
    CombinationPlan plan = CombinationPlan::standard();
    for (auto& combo : plan.combos) combo.lambdas = config.sweep.grid();

    SelectWeights weights = config.weights;
    if (input.benchmark && !config.weights_set) weights = input.benchmark->spec.weights;

    DiscoveryReport report;
    report.config = config;

    const double ndot_norm = input.ndot.entries.norm();
    if (ndot_norm == 0.0) {
        // Degenerate data carries no dynamics; report the null model cleanly.
        report.status = DiscoveryStatus::NullModel;
        report.input_field = std::move(input.field_for_library);
        report.runtime_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        if (!config.output_dir.empty()) write_report(report, config.output_dir);
        return report;
    }

    report.pool =
        sweep_solutions(input.field_for_library, input.ndot, plan, catalog, input.mask);
    report.selected = select_optimal(report.pool, weights);

    if (report.selected.empty()) {
        report.status = DiscoveryStatus::NullModel;
    } else {
        report.raw_model = formulate_pbe(report.selected,
                                         report.pool.symbols_for(report.selected.combination));
        report.raw_model.source_case = config.case_id;
        report.model = resolve_dependent_terms(report.raw_model);
        report.model.source_case = config.case_id;
        report.status = report.model.realizable() ? DiscoveryStatus::ModelFound
                                                  : DiscoveryStatus::NoRealizableModel;
        if (report.model.realizable())
            report.stoichiometry = deduce_breakage_stoichiometry(report.model);
        if (input.benchmark)
            report.vs_reference = coefficient_error(report.model, input.benchmark->reference);
    }

    report.input_field = std::move(input.field_for_library);
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    if (!config.output_dir.empty()) write_report(report, config.output_dir);
    return report;
}

std::string DiscoveryReport::to_json(int indent) const {
    json j;
    j["config"] = config_to_json_impl(config);
    j["status"] = to_string(status);
    j["model"] = model_to_json(model);
    j["raw_model"] = model_to_json(raw_model);

    json st{{"applicable", stoichiometry.applicable}};
    if (stoichiometry.applicable) {
        st["gamma"] = stoichiometry.gamma.render();
        st["beta"] = stoichiometry.beta_text;
        st["daughter_count_constant"] = stoichiometry.daughter_count_constant;
        if (stoichiometry.daughter_count_constant)
            st["daughter_count"] = stoichiometry.daughter_count;
    }
    j["stoichiometry"] = st;

    const SymbolicVector* sel_symbols = nullptr;
    if (!selected.combination.empty() && pool.symbols.count(selected.combination))
        sel_symbols = &pool.symbols.at(selected.combination);
    j["selected"] = solution_to_json(selected, sel_symbols);

    json audit = json::array();
    for (const auto& s : pool.solutions) {
        const SymbolicVector* sym =
            pool.symbols.count(s.combination) ? &pool.symbols.at(s.combination) : nullptr;
        audit.push_back(solution_to_json(s, sym));
    }
    j["pool"] = audit;

    json equivalences;
    for (const auto& [combo, symbols] : pool.symbols) {
        json entries = json::array();
        for (const auto& entry : symbols) {
            if (entry.equivalences.empty()) continue;
            json alts = json::array();
            for (const auto& alt : entry.equivalences)
                alts.push_back({{"name", alt.alternate.name()}, {"scale", alt.scale}});
            entries.push_back({{"primary", entry.primary.name()}, {"alternates", alts}});
        }
        if (!entries.empty()) equivalences[combo] = entries;
    }
    j["equivalences"] = equivalences;

    json groups;
    for (const auto& [combo, glist] : pool.groups) {
        if (glist.empty()) continue;
        json arr = json::array();
        for (const auto& g : glist) {
            json members = json::array();
            json nullvec = json::array();
            for (std::size_t m = 0; m < g.members.size(); ++m) {
                members.push_back(g.members[m]);
                nullvec.push_back(g.null_vector(static_cast<Eigen::Index>(m)));
            }
            arr.push_back({{"members", members},
                           {"null_vector", nullvec},
                           {"weak", g.weak},
                           {"strong", g.strong},
                           {"removed", g.removed}});
        }
        groups[combo] = arr;
    }
    j["dependency_groups"] = groups;

    if (vs_reference) {
        j["vs_reference"] = {{"matched", vs_reference->matched},
                             {"avg_error_pct", vs_reference->avg_error_pct},
                             {"missing", vs_reference->missing},
                             {"extra", vs_reference->extra}};
    }
    if (config.include_timing) j["timing"] = {{"seconds", runtime_seconds}};
    return j.dump(indent);
}

void write_report(const DiscoveryReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / "report.json");
    if (!out) throw Error("cannot write report under " + dir.string());
    out << report.to_json() << '\n';
}

namespace {

std::string signed_term_names(const PBEModel& model) {
    std::string out;
    for (const auto& t : model.terms) {
        const KernelExpression poly = t.polynomial();
        for (const auto& k : poly.terms) {
            if (!out.empty()) out += ",";
            out += (k.coeff < 0 ? "-" : "+");
            out += std::string(operator_label(t.process)) + "(" + k.mono.name() + ")";
        }
    }
    return out.empty() ? "none" : out;
}

const char* to_string(ExpectedOutcome e) {
    switch (e) {
        case ExpectedOutcome::Match: return "match";
        case ExpectedOutcome::MatchLargeError: return "match-large-error";
        case ExpectedOutcome::UnmatchedMissingAggDeathY: return "unmatched-missing-Dagg(y)";
    }
    return "unknown";
}

}  // namespace

BenchmarkTable run_benchmark(const std::vector<std::string>& ids, int workers) {
    BenchmarkTable table;
    table.rows.resize(ids.size());
    parallel_for(ids.size(), workers, [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        BenchmarkRow& row = table.rows[i];
        row.id = ids[i];
        try {
            const BenchmarkCase& bc = find_case(ids[i]);
            row.name = bc.spec.name;
            row.expectation = to_string(bc.expectation);
            row.expected = signed_term_names(bc.reference);

            RunConfig config;
            config.case_id = ids[i];
            config.include_timing = false;
            DiscoveryReport report = run_discovery(config);

            row.identified = signed_term_names(report.model);
            if (report.vs_reference) {
                row.matched = report.vs_reference->matched;
                row.avg_error_pct = report.vs_reference->avg_error_pct;
                row.missing = report.vs_reference->missing;
                row.extra = report.vs_reference->extra;
            }
            switch (bc.expectation) {
                case ExpectedOutcome::Match:
                    row.pass = row.matched && row.avg_error_pct <= 2.0 * bc.clean_error_pct;
                    break;
                case ExpectedOutcome::MatchLargeError:
                    row.pass = row.matched && row.avg_error_pct <= 2.0 * bc.clean_error_pct;
                    break;
                case ExpectedOutcome::UnmatchedMissingAggDeathY:
                    row.pass = !row.matched && row.missing.size() == 1 &&
                               row.missing.front() == "D_agg(y)" && row.extra.empty();
                    break;
            }
        } catch (const std::exception& e) {
            row.identified = std::string("error: ") + e.what();
            row.pass = false;
        }
        row.runtime_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });
    return table;
}

std::string BenchmarkTable::to_json(int indent) const {
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"id", r.id},
                       {"name", r.name},
                       {"expectation", r.expectation},
                       {"identified", r.identified},
                       {"expected", r.expected},
                       {"matched", r.matched},
                       {"avg_error_pct", r.avg_error_pct},
                       {"missing", r.missing},
                       {"extra", r.extra},
                       {"pass", r.pass},
                       {"runtime_seconds", r.runtime_seconds}});
    return json{{"rows", arr}}.dump(indent);
}

std::string BenchmarkTable::to_csv() const {
    std::string out = "id,name,expectation,identified_terms,expected_terms,matched,pass\n";
    for (const auto& r : rows) {
        out += r.id + "," + r.name + "," + r.expectation + "," + r.identified + "," +
               r.expected + "," + (r.matched ? "yes" : "no") + "," +
               (r.pass ? "yes" : "no") + "\n";
    }
    return out;
}

std::string BenchmarkTable::to_markdown() const {
    std::string out =
        "| case | system | expectation | identified | matched | avg error % | pass |\n"
        "|------|--------|-------------|------------|---------|-------------|------|\n";
    char buf[32];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.3g", r.avg_error_pct);
        out += "| " + r.id + " | " + r.name + " | " + r.expectation + " | `" + r.identified +
               "` | " + (r.matched ? "yes" : "no") + " | " + buf + " | " +
               (r.pass ? "yes" : "no") + " |\n";
    }
    return out;
}

void write_benchmark(const BenchmarkTable& table, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "benchmark.json") << table.to_json() << '\n';
    std::ofstream(dir / "benchmark.csv") << table.to_csv();
    std::ofstream(dir / "benchmark.md") << table.to_markdown();
}

StudyResult run_noise_study(const StudyConfig& config) {
    const BenchmarkCase& bc = find_case(config.case_id);
    if (config.samples < 1) throw ConfigError("study needs at least one sample per cell");

    const DensityField clean = simulate(bc.spec);

    StudyResult result;
    result.config = config;
    const std::size_t n_cells = config.noise_levels.size() * config.data_fractions.size();
    result.cells.resize(n_cells);

    struct Sample {
        bool success = false;
        double error_pct = 0.0;
        bool failed_run = false;
    };
    std::vector<std::vector<Sample>> samples(n_cells);

    std::vector<std::pair<std::size_t, int>> tasks;  // (cell, sample)
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        const double level = config.noise_levels[cell / config.data_fractions.size()];
        const double fraction = config.data_fractions[cell % config.data_fractions.size()];
        auto& c = result.cells[cell];
        c.noise_level = level;
        c.data_fraction = fraction;
        // A cell with no randomness (clean data, full rows) is deterministic;
        // one run stands for all samples.
        const bool deterministic = level == 0.0 && fraction >= 1.0;
        c.samples = config.samples;
        const int distinct = deterministic ? 1 : config.samples;
        samples[cell].resize(static_cast<std::size_t>(distinct));
        for (int s = 0; s < distinct; ++s) {
            c.seeds.push_back(derive_seed(config.master_seed, cell, static_cast<std::uint64_t>(s)));
            tasks.emplace_back(cell, s);
        }
    }

    parallel_for(tasks.size(), config.workers, [&](std::size_t task_idx) {
        const auto [cell, s] = tasks[task_idx];
        const auto& c = result.cells[cell];
        const std::uint64_t seed = c.seeds[static_cast<std::size_t>(s)];

        RunConfig run;
        run.case_id = config.case_id;
        run.pre = c.noise_level > 0.0 ? PreprocessConfig::noisy_defaults() : PreprocessConfig{};
        run.pre.noise_level = c.noise_level;
        run.pre.noise_seed = seed;
        run.pre.subsample_fraction = c.data_fraction;
        run.pre.subsample_seed = splitmix64(seed ^ 0x5555555555555555ull);
        run.include_timing = false;
        Sample& out = samples[cell][static_cast<std::size_t>(s)];
        try {
            PreparedInput input = prepare_input(run, &clean);
            CombinationPlan plan = CombinationPlan::standard();
            for (auto& combo : plan.combos) combo.lambdas = run.sweep.grid();
            if (input.ndot.entries.norm() == 0.0) return;

            SolutionPool pool = sweep_solutions(input.field_for_library, input.ndot, plan,
                                                BasisCatalog::standard(), input.mask);
            SparseSolution winner = select_optimal(pool, bc.spec.weights);
            if (winner.empty()) return;
            PBEModel model = resolve_dependent_terms(
                formulate_pbe(winner, pool.symbols_for(winner.combination)));
            const CoefficientError err = coefficient_error(model, bc.reference);
            out.success = err.matched;
            out.error_pct = err.avg_error_pct;
        } catch (const std::exception&) {
            out.failed_run = true;
        }
    });

    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        auto& c = result.cells[cell];
        const auto& cell_samples = samples[cell];
        const bool replicated = cell_samples.size() == 1 && config.samples > 1;
        double sum = 0.0, sum_sq = 0.0;
        int successes = 0;
        for (const auto& s : cell_samples) {
            if (!s.success) continue;
            ++successes;
            sum += s.error_pct;
            sum_sq += s.error_pct * s.error_pct;
        }
        if (replicated && successes > 0) successes = config.samples;
        c.successes = successes;
        if (successes > 0) {
            const int n_err = replicated ? 1 : successes;
            c.mean_error_pct = sum / n_err;
            const double var = n_err > 1 ? (sum_sq - sum * sum / n_err) / (n_err - 1) : 0.0;
            c.std_error_pct = std::sqrt(std::max(0.0, var));
            c.has_error_stats = true;
        }
    }
    return result;
}

std::string StudyResult::to_json(int indent) const {
    json cells_json = json::array();
    for (const auto& c : cells) {
        json cell{{"noise_level", c.noise_level},
                  {"data_fraction", c.data_fraction},
                  {"samples", c.samples},
                  {"successes", c.successes},
                  {"success_rate", static_cast<double>(c.successes) / c.samples},
                  {"seeds", c.seeds}};
        if (c.has_error_stats) {
            cell["mean_error_pct"] = c.mean_error_pct;
            cell["std_error_pct"] = c.std_error_pct;
        }
        cells_json.push_back(cell);
    }
    json j{{"case", config.case_id},
           {"master_seed", config.master_seed},
           {"samples_per_cell", config.samples},
           {"cells", cells_json}};
    return j.dump(indent);
}

std::string StudyResult::to_csv() const {
    std::string out =
        "noise_level,data_fraction,samples,successes,success_rate,mean_error_pct,std_error_pct\n";
    char buf[160];
    for (const auto& c : cells) {
        std::snprintf(buf, sizeof buf, "%g,%g,%d,%d,%.6g,", c.noise_level, c.data_fraction,
                      c.samples, c.successes, static_cast<double>(c.successes) / c.samples);
        out += buf;
        if (c.has_error_stats) {
            std::snprintf(buf, sizeof buf, "%.6g,%.6g\n", c.mean_error_pct, c.std_error_pct);
            out += buf;
        } else {
            out += ",\n";  // absent, not zero
        }
    }
    return out;
}

void write_study(const StudyResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "study.json") << result.to_json() << '\n';
    std::ofstream(dir / "study.csv") << result.to_csv();
}

void emit_plot_data(const DiscoveryReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    if (report.input_field) {
        const DensityField& f = *report.input_field;
        std::ofstream out(dir / "density_snapshots.csv");
        out << "t,x,n\n";
        const std::size_t k = f.cols();
        const std::size_t picks[] = {0, k / 4, k / 2, (3 * k) / 4, k - 1};
        char buf[96];
        std::size_t last = static_cast<std::size_t>(-1);
        for (std::size_t m : picks) {
            if (m == last) continue;
            last = m;
            for (std::size_t i = 0; i < f.rows(); ++i) {
                std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.17g\n", f.tgrid()[m],
                              f.xgrid()[i], f(i, m));
                out << buf;
            }
        }
    }
    std::ofstream audit(dir / "pool_audit.csv");
    audit << "combination,lambda,terms,residual_rel,penalty,cost,support\n";
    char buf[128];
    for (const auto& s : report.pool.solutions) {
        std::snprintf(buf, sizeof buf, ",%.6g,%zu,%.9g,%d,%.9g,", s.lambda, s.term_count,
                      s.residual_rel, s.penalty, s.cost);
        std::string names;
        if (report.pool.symbols.count(s.combination)) {
            const auto& sym = report.pool.symbols.at(s.combination);
            for (std::size_t idx : s.support) {
                if (!names.empty()) names += "+";
                names += sym[idx].primary.name();
            }
        }
        audit << s.combination << buf << names << "\n";
    }
}

void emit_plot_data(const StudyResult& study, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "study_long.csv") << study.to_csv();
}

void emit_plot_data(const BenchmarkTable& table, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "benchmark_table.csv") << table.to_csv();
}

}  // namespace pbed
