#include "smldm/experiments.hpp"

#include <algorithm>
#include <cmath>

namespace smldm {

namespace {

void check_axis(const SweepAxis& axis, const char* field)
{
    if (!is_sweepable(axis.name)) {
        throw ValidationError(std::string(field) + ": '" + axis.name +
                              "' is not a sweepable parameter (n_rm, n_rf, snr_ml_db, snr_fl_db, "
                              "injection_level_db, n_t)");
    }
    if (axis.values.empty()) {
        throw ValidationError(std::string(field) + ": value list must not be empty");
    }
    const bool increasing = std::adjacent_find(axis.values.begin(), axis.values.end(),
                                               std::greater_equal<>()) == axis.values.end();
    const bool decreasing = std::adjacent_find(axis.values.begin(), axis.values.end(),
                                               std::less_equal<>()) == axis.values.end();
    if (!increasing && !decreasing) {
        throw ValidationError(std::string(field) + ": values must be strictly monotone");
    }
}

bool uses_sm_bound(SchemeId scheme)
{
    return scheme == SchemeId::SmLdm || scheme == SchemeId::SmTdmFdm;
}

std::string qualified_name(const std::string& name, const std::string& qualifier_name, double qualifier)
{
    return name + "@" + qualifier_name + "=" + format_double(qualifier);
}

}  // namespace

RunMode parse_run_mode(std::string_view text)
{
    if (text == "bound") return RunMode::Bound;
    if (text == "simulate") return RunMode::Simulate;
    if (text == "both") return RunMode::Both;
    throw ValidationError("mode: '" + std::string(text) + "' (expected bound, simulate or both)");
}

std::string_view to_string(RunMode mode)
{
    switch (mode) {
    case RunMode::Bound: return "bound";
    case RunMode::Simulate: return "simulate";
    case RunMode::Both: return "both";
    }
    return "bound";
}

void SweepSpec::validate() const
{
    if (schemes.empty()) throw ValidationError("schemes: scheme set must not be empty");
    if (layers.empty()) throw ValidationError("layers: layer set must not be empty");
    check_axis(sweep, "sweep");
    if (series) {
        check_axis(*series, "series");
        if (series->name == sweep.name) {
            throw ValidationError("series: must differ from the swept parameter");
        }
    }
    fixed.validate();
    share.validate();
    if (mode != RunMode::Bound) {
        if (budget.mi_samples < kMinMiSamples) throw ValidationError("mi-samples: must be at least 10000");
        if (sinr_source == SinrSource::Empirical && budget.moment_trials < kMinMomentTrials) {
            throw ValidationError("trials: must be at least 1000");
        }
    }
    const std::vector<double> single{0.0};
    for (double sv : series ? series->values : single) {
        for (double xv : sweep.values) {
            SystemConfig cfg = fixed;
            if (series) set_parameter(cfg, series->name, sv);
            set_parameter(cfg, sweep.name, xv);
            try {
                cfg.validate();
            } catch (const ValidationError& e) {
                throw ValidationError(std::string("values: ") + e.what());
            }
        }
    }
}

const ResultRow* ResultTable::find(SchemeId scheme, std::string_view layer, std::string_view param_name,
                                   double param_value, std::string_view mode) const
{
    for (const auto& row : rows) {
        if (row.scheme == scheme && row.layer == layer && row.param_name == param_name &&
            row.param_value == param_value && row.mode == mode) {
            return &row;
        }
    }
    return nullptr;
}

LayerSe evaluate_bound(SchemeId scheme, const SystemConfig& cfg, const TdmFdmShare& share,
                       std::size_t* clamp_events, std::size_t* zero_sinr_events)
{
    if (uses_sm_bound(scheme)) {
        const LayerSinr sinr = closed_form_sinr(scheme, cfg);
        for (const SinrVector* s : {&sinr.ml, &sinr.fl}) {
            const SpatialBound detail = spatial_mi_bound_detail(*s);
            if (clamp_events != nullptr && detail.clamped) ++*clamp_events;
            if (zero_sinr_events != nullptr && detail.zero_sinr) ++*zero_sinr_events;
        }
    }
    return closed_form_se(scheme, cfg, share);
}

ResultTable run_sweep(const SweepSpec& spec, Parallelism par)
{
    spec.validate();

    const std::vector<double> single{0.0};
    const std::vector<double>& series_values = spec.series ? spec.series->values : single;
    const std::size_t n_series = series_values.size();
    const std::size_t n_x = spec.sweep.values.size();
    const std::size_t n_schemes = spec.schemes.size();
    const std::size_t points = n_series * n_x * n_schemes;

    struct PointResult {
        std::vector<ResultRow> rows;
        std::size_t clamp_events = 0;
        std::size_t zero_sinr_events = 0;
    };
    std::vector<PointResult> results(points);

    const bool want_bound = spec.mode != RunMode::Simulate;
    const bool want_sim = spec.mode != RunMode::Bound;

    parallel_for(points, par, [&](std::size_t p) {
        const std::size_t si = p / (n_x * n_schemes);
        const std::size_t xi = (p / n_schemes) % n_x;
        const std::size_t ki = p % n_schemes;
        const SchemeId scheme = spec.schemes[ki];

        SystemConfig cfg = spec.fixed;
        std::string param_name = spec.sweep.name;
        if (spec.series) {
            set_parameter(cfg, spec.series->name, series_values[si]);
            param_name = qualified_name(param_name, spec.series->name, series_values[si]);
        }
        const double x = spec.sweep.values[xi];
        set_parameter(cfg, spec.sweep.name, x);

        PointResult& out = results[p];
        const LayerSe bound = evaluate_bound(scheme, cfg, spec.share, &out.clamp_events, &out.zero_sinr_events);
        for (Layer layer : spec.layers) {
            const SeBreakdown& layer_bound = layer == Layer::Ml ? bound.ml : bound.fl;
            if (want_bound) {
                out.rows.push_back({scheme, std::string(to_string(layer)), param_name, x, "bound", layer_bound, {}});
            }
            if (want_sim) {
                const std::uint64_t tag =
                    ((static_cast<std::uint64_t>(si) << 24 | xi) << 8 | static_cast<std::uint64_t>(scheme)) << 2 |
                    static_cast<std::uint64_t>(layer);
                const RngSpec rng{spec.rng.seed, derive_stream(spec.rng.stream_id, tag)};
                const SeBreakdown sim =
                    simulated_se(layer, scheme, cfg, spec.share, spec.sinr_source, spec.budget, rng, Parallelism{1});
                out.rows.push_back({scheme, std::string(to_string(layer)), param_name, x, "simulate", sim,
                                    sim.total_se - layer_bound.total_se});
            }
        }
    });

    ResultTable table;
    for (auto& r : results) {
        table.clamp_events += r.clamp_events;
        table.zero_sinr_events += r.zero_sinr_events;
        for (auto& row : r.rows) {
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

void CompareSpec::validate() const
{
    base.validate();
    if (nt_values.empty()) throw ValidationError("nt-values: must not be empty");
    for (std::size_t nt : nt_values) {
        if (nt < 1 || nt > kMaxTransmitAntennas) throw ValidationError("nt-values: entries must be in [1, 64]");
    }
    if (il_values_db.empty()) throw ValidationError("il-values: must not be empty");
    for (double il : il_values_db) {
        if (!(il > 0.0)) throw ValidationError("il-values: IL must exceed 0 dB");
    }
    if (share_ml_values.empty()) throw ValidationError("share-values: must not be empty");
    for (double f : share_ml_values) {
        if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("share-values: fractions must lie in [0, 1]");
    }
}

CompareSpec CompareSpec::defaults()
{
    CompareSpec spec;
    spec.base.n_rm = 2;
    spec.base.n_rf = 2;
    spec.base.snr_ml_db = 0.0;
    spec.base.snr_fl_db = 20.0;
    for (int il = 1; il <= 30; ++il) spec.il_values_db.push_back(il);
    for (int k = 0; k <= 10; ++k) spec.share_ml_values.push_back(k / 10.0);
    return spec;
}

ResultTable compare_ldm_vs_tdmfdm(const CompareSpec& spec, Parallelism par)
{
    spec.validate();
    const std::size_t n_il = spec.il_values_db.size();
    const std::size_t n_share = spec.share_ml_values.size();
    const std::size_t per_nt = n_il + n_share;
    const std::size_t points = spec.nt_values.size() * per_nt;

    struct PointResult {
        std::vector<ResultRow> rows;
        std::size_t clamp_events = 0;
        std::size_t zero_sinr_events = 0;
    };
    std::vector<PointResult> results(points);

    parallel_for(points, par, [&](std::size_t p) {
        const std::size_t nt = spec.nt_values[p / per_nt];
        const std::size_t j = p % per_nt;
        SystemConfig cfg = spec.base;
        cfg.n_t = nt;
        PointResult& out = results[p];
        const double nt_label = static_cast<double>(nt);
        if (j < n_il) {
            const double il = spec.il_values_db[j];
            cfg.injection_level_db = il;
            const LayerSe se = evaluate_bound(SchemeId::SmLdm, cfg, {}, &out.clamp_events, &out.zero_sinr_events);
            const std::string name = qualified_name("injection_level_db", "n_t", nt_label);
            out.rows.push_back({SchemeId::SmLdm, "ML", name, il, "bound", se.ml, {}});
            out.rows.push_back({SchemeId::SmLdm, "FL", name, il, "bound", se.fl, {}});
        } else {
            const double f = spec.share_ml_values[j - n_il];
            const TdmFdmShare share{f, 1.0 - f};
            const LayerSe se = evaluate_bound(SchemeId::SmTdmFdm, cfg, share, &out.clamp_events, &out.zero_sinr_events);
            const std::string name = qualified_name("share_ml", "n_t", nt_label);
            out.rows.push_back({SchemeId::SmTdmFdm, "ML", name, f, "bound", se.ml, {}});
            out.rows.push_back({SchemeId::SmTdmFdm, "FL", name, f, "bound", se.fl, {}});
        }
    });

    ResultTable table;
    for (auto& r : results) {
        table.clamp_events += r.clamp_events;
        table.zero_sinr_events += r.zero_sinr_events;
        for (auto& row : r.rows) table.rows.push_back(std::move(row));
    }
    return table;
}

SweepSpec sweep_spec_from(const ParamMap& params)
{
    SweepSpec spec;
    auto get = [&](const char* key) -> const std::string* {
        const auto it = params.find(key);
        return it == params.end() ? nullptr : &it->second;
    };
    if (auto v = get("schemes")) {
        for (const auto& s : split_list(*v)) spec.schemes.push_back(parse_scheme(s));
    } else if (auto v1 = get("scheme")) {
        spec.schemes.push_back(parse_scheme(*v1));
    } else {
        spec.schemes.push_back(SchemeId::SmLdm);
    }
    if (auto v = get("layers")) {
        spec.layers.clear();
        for (const auto& s : split_list(*v)) spec.layers.push_back(parse_layer(s));
    }
    const std::string* sweep = get("sweep");
    const std::string* values = get("values");
    if (sweep == nullptr || values == nullptr) {
        throw ValidationError("sweep: a swept parameter and its values are required");
    }
    spec.sweep = {*sweep, parse_value_list(*values)};
    if (auto s = get("series")) {
        const std::string* sv = get("series-values");
        if (sv == nullptr) throw ValidationError("series-values: required when series is set");
        spec.series = SweepAxis{*s, parse_value_list(*sv)};
    }
    spec.fixed = system_config_from(params);
    spec.share = share_from(params);
    if (auto v = get("mode")) spec.mode = parse_run_mode(*v);
    if (auto v = get("sinr-source")) spec.sinr_source = parse_sinr_source(*v);
    if (auto v = get("trials")) spec.budget.moment_trials = parse_count(*v, "trials");
    if (auto v = get("mi-samples")) spec.budget.mi_samples = parse_count(*v, "mi-samples");
    if (auto v = get("seed")) spec.rng.seed = parse_u64(*v, "seed");
    if (auto v = get("stream")) spec.rng.stream_id = parse_u64(*v, "stream");
    spec.validate();
    return spec;
}

CompareSpec compare_spec_from(const ParamMap& params)
{
    CompareSpec spec = CompareSpec::defaults();
    ParamMap base_params = params;
    base_params.erase("nt");
    base_params.erase("il-db");
    if (!base_params.count("snr-ml-db")) base_params["snr-ml-db"] = "0";
    if (!base_params.count("snr-fl-db")) base_params["snr-fl-db"] = "20";
    spec.base = system_config_from(base_params);
    if (auto it = params.find("nt-values"); it != params.end()) {
        spec.nt_values.clear();
        for (double v : parse_value_list(it->second)) {
            if (!(v >= 1.0) || v != std::floor(v)) throw ValidationError("nt-values: entries must be positive integers");
            spec.nt_values.push_back(static_cast<std::size_t>(v));
        }
    }
    if (auto it = params.find("il-values"); it != params.end()) spec.il_values_db = parse_value_list(it->second);
    if (auto it = params.find("share-values"); it != params.end()) spec.share_ml_values = parse_value_list(it->second);
    spec.validate();
    return spec;
}

}  // namespace smldm
