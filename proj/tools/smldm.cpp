#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "smldm/config.hpp"
#include "smldm/csv.hpp"
#include "smldm/experiments.hpp"
#include "smldm/selftest.hpp"

namespace {

using namespace smldm;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

const char* const kSnrNote = "snr_db = 10 log10(power / sigma^2), sigma^2 per receive antenna";

struct ParamFlag {
    std::string key;
    std::string value;
    CLI::Option* option = nullptr;
};

struct Common {
    std::string config;
    std::string output;
    std::string format = "table";
    unsigned jobs = 0;
};

class ParamFlags {
public:
    void add(CLI::App* app, const std::string& key, const std::string& help)
    {
        auto& flag = flags_.emplace_back(std::make_unique<ParamFlag>());
        flag->key = key;
        flag->option = app->add_option("--" + key, flag->value, help);
    }

    ParamMap given() const
    {
        ParamMap out;
        for (const auto& f : flags_) {
            if (f->option->count() > 0) out[f->key] = f->value;
        }
        return out;
    }

private:
    std::vector<std::unique_ptr<ParamFlag>> flags_;
};

void add_system_flags(CLI::App* app, ParamFlags& flags)
{
    flags.add(app, "nt", "transmit antennas N_t");
    flags.add(app, "nrm", "mobile-layer receive antennas N_rm");
    flags.add(app, "nrf", "fixed-layer receive antennas N_rf");
    flags.add(app, "il-db", "injection level in dB (> 0)");
    flags.add(app, "snr-ml-db", "mobile-layer SNR in dB");
    flags.add(app, "snr-fl-db", "fixed-layer SNR in dB");
    flags.add(app, "power", "total transmit power P_u");
    flags.add(app, "share-ml", "TDM/FDM resource share of the mobile layer");
    flags.add(app, "share-fl", "TDM/FDM resource share of the fixed layer");
}

void add_simulation_flags(CLI::App* app, ParamFlags& flags)
{
    flags.add(app, "sinr-source", "closed-form or empirical");
    flags.add(app, "trials", "channel trials for empirical moments");
    flags.add(app, "mi-samples", "samples for the spatial MI estimate");
    flags.add(app, "seed", "RNG seed");
    flags.add(app, "stream", "RNG stream id");
}

void add_sweep_flags(CLI::App* app, ParamFlags& flags)
{
    flags.add(app, "schemes", "comma-separated schemes");
    flags.add(app, "layers", "comma-separated layers (ML, FL)");
    flags.add(app, "sweep", "swept parameter");
    flags.add(app, "values", "swept values: a,b,c or start:step:stop");
    flags.add(app, "series", "series parameter (one curve per value)");
    flags.add(app, "series-values", "series values");
    flags.add(app, "mode", "bound, simulate or both");
    flags.add(app, "nt-values", "compare: transmit antenna counts");
    flags.add(app, "il-values", "compare: injection levels in dB");
    flags.add(app, "share-values", "compare: mobile-layer share grid in [0, 1]");
}

ParamMap point_defaults()
{
    const SystemConfig cfg;
    return {{"scheme", "sm-ldm"},
            {"nt", std::to_string(cfg.n_t)},
            {"nrm", std::to_string(cfg.n_rm)},
            {"nrf", std::to_string(cfg.n_rf)},
            {"il-db", format_double(cfg.injection_level_db)},
            {"snr-ml-db", format_double(cfg.snr_ml_db)},
            {"snr-fl-db", format_double(cfg.snr_fl_db)},
            {"power", format_double(cfg.total_power)},
            {"share-ml", "1"},
            {"share-fl", "1"}};
}

ParamMap simulation_defaults()
{
    return {{"sinr-source", "closed-form"},
            {"trials", std::to_string(kDefaultMomentTrials)},
            {"mi-samples", std::to_string(kDefaultMiSamples)},
            {"seed", "0"},
            {"stream", "0"}};
}

ParamMap resolve(ParamMap defaults, const Common& common, const ParamMap& flags)
{
    if (!common.config.empty()) overlay(defaults, load_key_values(common.config));
    overlay(defaults, flags);
    return defaults;
}

void emit(const Common& common, const std::string& default_name, const OutputHeader& header, const ResultTable& table)
{
    const CsvFormat format = parse_csv_format(common.format);
    std::filesystem::path target = common.output;
    if (target.empty()) {
        if (const char* dir = std::getenv("SMLDM_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
            target = std::filesystem::path(dir) / (default_name + ".csv");
        }
    }
    if (target.empty()) {
        write_csv(std::cout, header, table, format);
        return;
    }
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::ofstream out(target, std::ios::binary);
    if (!out) throw ValidationError("cannot write output file '" + target.string() + "'");
    write_csv(out, header, table, format);
    std::cerr << "wrote " << target.string() << '\n';
}

ResultTable point_table(const ParamMap& p, bool simulate, unsigned jobs)
{
    const SchemeId scheme = parse_scheme(p.at("scheme"));
    const SystemConfig cfg = system_config_from(p);
    const TdmFdmShare share = share_from(p);
    const std::string name = "injection_level_db";
    const double x = cfg.injection_level_db;

    ResultTable table;
    const LayerSe bound = evaluate_bound(scheme, cfg, share, &table.clamp_events, &table.zero_sinr_events);
    table.rows.push_back({scheme, "ML", name, x, "bound", bound.ml, {}});
    table.rows.push_back({scheme, "FL", name, x, "bound", bound.fl, {}});
    if (!simulate) {
        const SeBreakdown sum =
            SeBreakdown::from_parts(bound.ml.constellation_mi + bound.fl.constellation_mi,
                                    bound.ml.spatial_mi + bound.fl.spatial_mi);
        table.rows.push_back({scheme, "ML+FL", name, x, "bound", sum, {}});
        return table;
    }

    const SimulationBudget budget{parse_count(p.at("trials"), "trials"), parse_count(p.at("mi-samples"), "mi-samples")};
    const SinrSource source = parse_sinr_source(p.at("sinr-source"));
    if (budget.mi_samples < kMinMiSamples) throw ValidationError("mi-samples: must be at least 10000");
    if (source == SinrSource::Empirical && budget.moment_trials < kMinMomentTrials) {
        throw ValidationError("trials: must be at least 1000");
    }
    const RngSpec base{parse_u64(p.at("seed"), "seed"), parse_u64(p.at("stream"), "stream")};
    for (Layer layer : {Layer::Ml, Layer::Fl}) {
        const RngSpec rng{base.seed, derive_stream(base.stream_id, static_cast<std::uint64_t>(layer))};
        const SeBreakdown sim = simulated_se(layer, scheme, cfg, share, source, budget, rng, Parallelism{jobs});
        const SeBreakdown& b = layer == Layer::Ml ? bound.ml : bound.fl;
        table.rows.push_back({scheme, std::string(to_string(layer)), name, x, "simulate", sim, sim.total_se - b.total_se});
    }
    return table;
}

void run_configured(const ParamMap& p, const Common& common, const std::string& name)
{
    const std::string command = p.count("command") ? p.at("command") : "sweep";
    OutputHeader header{command, p, {kSnrNote}};
    if (command == "compare") {
        const CompareSpec spec = compare_spec_from(p);
        emit(common, name, header, compare_ldm_vs_tdmfdm(spec, Parallelism{common.jobs}));
        return;
    }
    if (command != "sweep") throw ValidationError("command: '" + command + "' (expected sweep or compare)");
    const SweepSpec spec = sweep_spec_from(p);
    // Echo the resolved values, not only those given explicitly.
    header.params["nt"] = std::to_string(spec.fixed.n_t);
    header.params["nrm"] = std::to_string(spec.fixed.n_rm);
    header.params["nrf"] = std::to_string(spec.fixed.n_rf);
    header.params["il-db"] = format_double(spec.fixed.injection_level_db);
    header.params["snr-ml-db"] = format_double(spec.fixed.snr_ml_db);
    header.params["snr-fl-db"] = format_double(spec.fixed.snr_fl_db);
    header.params["power"] = format_double(spec.fixed.total_power);
    header.params["mode"] = std::string(to_string(spec.mode));
    if (spec.mode != RunMode::Bound) {
        header.params["sinr-source"] = std::string(to_string(spec.sinr_source));
        header.params["trials"] = std::to_string(spec.budget.moment_trials);
        header.params["mi-samples"] = std::to_string(spec.budget.mi_samples);
        header.params["seed"] = std::to_string(spec.rng.seed);
        header.params["stream"] = std::to_string(spec.rng.stream_id);
    }
    emit(common, name, header, run_sweep(spec, Parallelism{common.jobs}));
}

void add_common(CLI::App* app, Common& common)
{
    app->add_option("--config", common.config, "key = value configuration file (flags override it)");
    app->add_option("-o,--output", common.output, "output CSV path (default: stdout or $SMLDM_OUTPUT_DIR)");
    app->add_option("--format", common.format, "table or long")->check(CLI::IsMember({"table", "long"}));
    app->add_option("-j,--jobs", common.jobs, "worker threads, 0 = all cores (results do not depend on it)");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectral-efficiency bounds and simulation for SM-LDM broadcast systems"};
    app.set_version_flag("--version", std::string("smldm ") + kToolVersion);
    app.require_subcommand(1);

    Common common;

    ParamFlags bound_flags;
    auto* bound = app.add_subcommand("bound", "closed-form SE lower bound at one operating point");
    bound_flags.add(bound, "scheme", "sm-ldm, single-ta, smx-ldm or sm-tdm-fdm");
    add_system_flags(bound, bound_flags);
    add_common(bound, common);

    ParamFlags sim_flags;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo SE next to the bound at one operating point");
    sim_flags.add(simulate, "scheme", "sm-ldm, single-ta, smx-ldm or sm-tdm-fdm");
    add_system_flags(simulate, sim_flags);
    add_simulation_flags(simulate, sim_flags);
    add_common(simulate, common);

    ParamFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "parameter sweep or scheme comparison from flags or --config");
    sweep_flags.add(sweep, "scheme", "single scheme (alternative to --schemes)");
    add_system_flags(sweep, sweep_flags);
    add_simulation_flags(sweep, sweep_flags);
    add_sweep_flags(sweep, sweep_flags);
    add_common(sweep, common);

    ParamFlags preset_flags;
    std::string preset_name;
    bool list_presets = false;
    auto* preset = app.add_subcommand("preset", "run a shipped figure preset; flags override its values");
    preset->add_option("name", preset_name, "preset name");
    preset->add_flag("--list", list_presets, "list available presets");
    preset_flags.add(preset, "scheme", "single scheme (alternative to --schemes)");
    add_system_flags(preset, preset_flags);
    add_simulation_flags(preset, preset_flags);
    add_sweep_flags(preset, preset_flags);
    add_common(preset, common);

    bool quick = false;
    std::string mutation;
    std::uint64_t selftest_seed = SelfTestOptions{}.rng.seed;
    auto* selftest = app.add_subcommand("selftest", "fast invariant checks; exit 0 iff all pass");
    selftest->add_flag("--quick", quick, "reduced Monte Carlo budgets");
    selftest->add_option("--seed", selftest_seed, "RNG seed");
    selftest->add_option("--mutate", mutation, "run against a deliberately broken closed form")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (bound->parsed()) {
            const ParamMap p = resolve(point_defaults(), common, bound_flags.given());
            emit(common, "bound", {"bound", p, {kSnrNote}}, point_table(p, false, common.jobs));
        } else if (simulate->parsed()) {
            ParamMap defaults = point_defaults();
            overlay(defaults, simulation_defaults());
            const ParamMap p = resolve(defaults, common, sim_flags.given());
            emit(common, "simulate", {"simulate", p, {kSnrNote}}, point_table(p, true, common.jobs));
        } else if (sweep->parsed()) {
            run_configured(resolve({}, common, sweep_flags.given()), common, "sweep");
        } else if (preset->parsed()) {
            if (list_presets || preset_name.empty()) {
                for (const auto& n : preset_names()) std::cout << n << '\n';
                return preset_name.empty() && !list_presets ? kExitValidation : kExitOk;
            }
            ParamMap p = resolve(load_preset(preset_name), common, preset_flags.given());
            p["preset"] = preset_name;
            run_configured(p, common, preset_name);
        } else if (selftest->parsed()) {
            SelfTestOptions options;
            options.quick = quick;
            options.rng.seed = selftest_seed;
            if (!mutation.empty()) options.hooks = ClosedFormHooks::mutated(mutation);
            const auto checks = run_selftest(options);
            std::size_t passed = 0;
            for (const auto& c : checks) {
                std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
                if (!c.detail.empty()) std::cout << "  " << c.detail;
                std::cout << '\n';
                passed += c.passed ? 1 : 0;
            }
            std::cout << passed << "/" << checks.size() << " checks passed\n";
            return passed == checks.size() ? kExitOk : kExitCheckFailed;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
    return kExitOk;
}
