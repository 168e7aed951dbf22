// Acceptance gate. Run without arguments for every criterion, or name
// criteria (AC1 ... AC10) to run a subset. One verdict line per criterion;
// exit status is nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "smldm/config.hpp"
#include "smldm/csv.hpp"
#include "smldm/experiments.hpp"
#include "smldm/montecarlo.hpp"

using namespace smldm;

namespace {

struct Verdict {
    bool passed = false;
    std::string detail;
};

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* pattern, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

double relative_error(double got, double want)
{
    return std::abs(got - want) / std::abs(want);
}

// Every operating point of a preset, with the layers it reports.
struct GridPoint {
    SystemConfig cfg;
    std::vector<Layer> layers;
};

std::vector<GridPoint> preset_grid(const std::string& name)
{
    const SweepSpec spec = sweep_spec_from(load_preset(name));
    std::vector<GridPoint> out;
    const std::vector<double> none{0.0};
    for (double sv : spec.series ? spec.series->values : none) {
        for (double xv : spec.sweep.values) {
            SystemConfig cfg = spec.fixed;
            if (spec.series) set_parameter(cfg, spec.series->name, sv);
            set_parameter(cfg, spec.sweep.name, xv);
            out.push_back({cfg, spec.layers});
        }
    }
    return out;
}

SystemConfig row_config(const SweepSpec& spec, const ResultRow& row)
{
    SystemConfig cfg = spec.fixed;
    if (spec.series) {
        const auto eq = row.param_name.find('=');
        set_parameter(cfg, spec.series->name, std::stod(row.param_name.substr(eq + 1)));
    }
    set_parameter(cfg, spec.sweep.name, row.param_value);
    return cfg;
}

const SeBreakdown& layer_of(const LayerSe& se, Layer layer)
{
    return layer == Layer::Ml ? se.ml : se.fl;
}

Verdict ac1_moment_identities()
{
    const Stopwatch clock;
    double worst = 0.0;
    std::string worst_at;
    for (std::size_t n_r : {1, 2, 4, 8}) {
        SystemConfig cfg;
        cfg.n_t = 2;
        cfg.n_rm = n_r;
        const MomentEstimates m = estimate_moments(Layer::Ml, cfg, 1000000, {101, n_r});
        const double nr = static_cast<double>(n_r);
        const std::vector<std::pair<std::string, double>> errors{
            {"E||g||^2", relative_error(m.combiner_norm[0], nr)},
            {"E|g^H h'|^2", relative_error(m.self_isi(0, 1), nr)},
            {"E||h||^4", relative_error(m.self_isi(0, 0), nr * (nr + 1.0))},
        };
        for (const auto& [what, err] : errors) {
            if (err > worst) {
                worst = err;
                worst_at = what + " at N_r=" + std::to_string(n_r);
            }
        }
    }
    const double t = clock.seconds();
    return {worst <= 0.01 && t < 30.0,
            fmt("max relative error %.3f%% (%s), limit 1%%; %.1f s, limit 30 s", 100.0 * worst, worst_at.c_str(), t)};
}

Verdict ac2_empirical_sinr()
{
    const Stopwatch clock;
    std::map<std::tuple<int, std::size_t, std::size_t>, MomentEstimates> cache;
    double worst = 0.0;
    std::size_t compared = 0;
    for (const char* preset : {"fig2a", "fig2b", "fig3a", "fig3b"}) {
        for (const GridPoint& point : preset_grid(preset)) {
            const SystemConfig& cfg = point.cfg;
            const PowerSplit split = power_split(cfg);
            const LayerSinr ref = closed_form_sinr(SchemeId::SmLdm, cfg);
            for (Layer layer : point.layers) {
                const std::size_t n_r = cfg.n_r(layer);
                const auto key = std::make_tuple(static_cast<int>(layer), cfg.n_t, n_r);
                auto it = cache.find(key);
                if (it == cache.end()) {
                    const RngSpec rng{202, derive_stream(0, static_cast<std::uint64_t>(layer) << 16 | n_r << 8 | cfg.n_t)};
                    it = cache.emplace(key, estimate_moments(layer, cfg, 1000000, rng)).first;
                }
                const SinrVector got = layer == Layer::Ml
                                           ? sinr_from_moments_ml(it->second, split, cfg.n_t, cfg.sigma2_ml())
                                           : sinr_from_moments_fl(it->second, split, cfg.n_t, cfg.sigma2_fl());
                const SinrVector& want = layer == Layer::Ml ? ref.ml : ref.fl;
                for (std::size_t n = 0; n < got.size(); ++n) {
                    worst = std::max(worst, relative_error(got[n], want[n]));
                    ++compared;
                }
            }
        }
    }
    return {worst <= 0.01, fmt("%zu SINR entries over the fig2/fig3 grids, max relative error %.3f%%, limit 1%%; %.1f s",
                               compared, 100.0 * worst, clock.seconds())};
}

Verdict ac3_asymptotes()
{
    double worst_high = 0.0, worst_low = 0.0;
    for (std::size_t nt : {2, 4, 8}) {
        const double cap = std::log2(static_cast<double>(nt));
        worst_high = std::max(worst_high, std::abs(spatial_mi_lower_bound(SinrVector::uniform(Layer::Ml, nt, 1e8)) - cap));
        worst_low = std::max(worst_low, std::abs(spatial_mi_lower_bound(SinrVector::uniform(Layer::Ml, nt, 1e-8))));
    }
    return {worst_high <= 1e-3 && worst_low <= 1e-3,
            fmt("|bound - log2 N_t| at SINR 1e8: %.2e, |bound| at SINR 1e-8: %.2e, limit 1e-3", worst_high, worst_low)};
}

Verdict ac4_reductions()
{
    double worst = 0.0;
    std::size_t cases = 0;
    std::mt19937_64 gen(404);
    std::uniform_real_distribution<double> il(0.5, 30.0), snr(-10.0, 40.0);
    std::uniform_int_distribution<std::size_t> nr(1, 8), nt(1, 8);
    for (int i = 0; i < 500; ++i) {
        SystemConfig cfg;
        cfg.n_rm = nr(gen);
        cfg.n_rf = nr(gen);
        cfg.injection_level_db = il(gen);
        cfg.snr_ml_db = snr(gen);
        cfg.snr_fl_db = snr(gen);

        cfg.n_t = 1;
        const LayerSinr s = closed_form_sinr(SchemeId::SmLdm, cfg);
        const LayerSe sm = closed_form_se(SchemeId::SmLdm, cfg);
        const LayerSe st = closed_form_se(SchemeId::SingleTaLdm, cfg);
        const LayerSe smx = closed_form_se(SchemeId::SmxLdm, cfg);
        for (Layer layer : {Layer::Ml, Layer::Fl}) {
            const double single = std::log2(1.0 + (layer == Layer::Ml ? s.ml : s.fl)[0]);
            worst = std::max({worst, std::abs(layer_of(sm, layer).total_se - single),
                              std::abs(layer_of(smx, layer).total_se - layer_of(st, layer).total_se)});
        }

        cfg.n_t = nt(gen);
        const LayerSinr tdm_sinr = tdmfdm_sinr(cfg);
        const LayerSe tdm = closed_form_se(SchemeId::SmTdmFdm, cfg, {1, 1});
        worst = std::max({worst, std::abs(tdm.ml.total_se - 0.5 * sm_se_lower_bound(tdm_sinr.ml).total_se),
                          std::abs(tdm.fl.total_se - 0.5 * sm_se_lower_bound(tdm_sinr.fl).total_se)});
        cases += 3;
    }
    return {worst <= 1e-12, fmt("%zu identity groups, max abs deviation %.2e, limit 1e-12", cases, worst)};
}

Verdict ac5_bound_tightness()
{
    const Stopwatch clock;
    std::size_t points = 0, below = 0, eligible = 0, low_capture = 0;
    double min_capture = INFINITY;
    std::string min_at;
    for (const char* preset : {"fig2a", "fig2b"}) {
        const SweepSpec spec = sweep_spec_from(load_preset(preset));
        const ResultTable table = run_sweep(spec, Parallelism{0});
        for (const ResultRow& sim : table.rows) {
            if (sim.mode != "simulate") continue;
            const ResultRow* bound = table.find(sim.scheme, sim.layer, sim.param_name, sim.param_value, "bound");
            ++points;
            if (sim.se.total_se < bound->se.total_se - 3.0 * *sim.se.stderr_bits) ++below;

            const Layer layer = parse_layer(sim.layer);
            const LayerSinr s = closed_form_sinr(SchemeId::SmLdm, row_config(spec, sim));
            const auto& v = (layer == Layer::Ml ? s.ml : s.fl).values();
            if (*std::min_element(v.begin(), v.end()) < 0.3) continue;
            ++eligible;
            const double capture = bound->se.spatial_mi / sim.se.spatial_mi;
            if (capture < 0.8) ++low_capture;
            if (capture < min_capture) {
                min_capture = capture;
                min_at = std::string(preset) + " " + sim.layer + " " + sim.param_name + "=" + format_double(sim.param_value);
            }
        }
    }
    const double t = clock.seconds();
    return {points == 32 && below == 0 && low_capture == 0 && t < 300.0,
            fmt("%zu points, %zu below bound - 3 stderr; spatial-MI capture < 80%% at %zu of %zu points with SINR >= 0.3 "
                "(min %.1f%% at %s); %.1f s, limit 300 s",
                points, below, low_capture, eligible, 100.0 * min_capture, min_at.c_str(), t)};
}

Verdict ac6_saturation()
{
    std::string detail;
    bool ok = true;
    for (double il : {5.0, 20.0}) {
        SystemConfig cfg;
        cfg.n_t = 2;
        cfg.n_rm = 2;
        cfg.n_rf = 2;
        cfg.injection_level_db = il;
        cfg.snr_fl_db = 30.0;
        const double at30 = closed_form_se(SchemeId::SmLdm, cfg).fl.total_se;
        cfg.snr_fl_db = 40.0;
        const double at40 = closed_form_se(SchemeId::SmLdm, cfg).fl.total_se;
        const double growth = (at40 - at30) / at30;
        ok = ok && growth < 0.02;
        detail += fmt("%sIL %g dB: +%.2f%%", detail.empty() ? "" : ", ", il, 100.0 * growth);
    }
    return {ok, "FL SE growth from SNR_fl 30 to 40 dB: " + detail + ", limit 2%"};
}

Verdict ac7_orderings()
{
    std::size_t fail_a = 0, fail_b = 0, fail_c = 0, n_a = 0, n_b = 0, n_c = 0;
    std::string first_c;
    for (const char* preset : {"fig4a", "fig4b"}) {
        for (const GridPoint& p : preset_grid(preset)) {
            const double sm = closed_form_se(SchemeId::SmLdm, p.cfg).ml.total_se;
            const double st = closed_form_se(SchemeId::SingleTaLdm, p.cfg).ml.total_se;
            const double smx = closed_form_se(SchemeId::SmxLdm, p.cfg).ml.total_se;
            ++n_a;
            if (!(sm > st)) ++fail_a;
            if (p.cfg.snr_ml_db <= 0.0) {
                ++n_b;
                if (!(sm > smx)) ++fail_b;
            }
        }
    }
    for (const GridPoint& p : preset_grid("fig5a")) {
        if (p.cfg.snr_fl_db < 25.0) continue;
        ++n_c;
        const double sm = closed_form_se(SchemeId::SmLdm, p.cfg).fl.total_se;
        const double smx = closed_form_se(SchemeId::SmxLdm, p.cfg).fl.total_se;
        if (!(smx > sm)) {
            if (fail_c++ == 0) {
                first_c = fmt("first at IL %g dB, SNR_fl %g dB: SMX %.4f vs SM %.4f", p.cfg.injection_level_db,
                              p.cfg.snr_fl_db, smx, sm);
            }
        }
    }
    return {fail_a + fail_b + fail_c == 0,
            fmt("(a) SM > single-TA ML: %zu/%zu hold; (b) SM > SMX ML at SNR_ml <= 0: %zu/%zu hold; "
                "(c) SMX > SM FL at SNR_fl >= 25: %zu/%zu hold%s%s",
                n_a - fail_a, n_a, n_b - fail_b, n_b, n_c - fail_c, n_c, first_c.empty() ? "" : "; ", first_c.c_str())};
}

Verdict ac8_dominance()
{
    SystemConfig cfg;
    cfg.n_t = 2;
    cfg.n_rm = 2;
    cfg.n_rf = 2;
    cfg.snr_ml_db = 0.0;
    cfg.snr_fl_db = 20.0;
    std::vector<std::pair<double, LayerSe>> ldm;
    for (int k = 1; k <= 600; ++k) {
        cfg.injection_level_db = 0.1 * k;
        ldm.emplace_back(cfg.injection_level_db, closed_form_se(SchemeId::SmLdm, cfg));
    }
    std::string failed;
    std::size_t held = 0, total = 0;
    for (double f : parse_value_list("0:0.1:1")) {
        ++total;
        const LayerSe tdm = closed_form_se(SchemeId::SmTdmFdm, cfg, {f, 1.0 - f});
        const bool dominated = std::any_of(ldm.begin(), ldm.end(), [&](const auto& entry) {
            return entry.second.ml.total_se >= tdm.ml.total_se && entry.second.fl.total_se >= tdm.fl.total_se;
        });
        if (dominated) {
            ++held;
        } else {
            failed += (failed.empty() ? "" : ",") + format_double(f);
        }
    }
    return {held == total, fmt("%zu/%zu share points weakly dominated by SM-LDM for some IL in 0.1..60 dB%s%s", held, total,
                               failed.empty() ? "" : "; not dominated at share_ml = ", failed.c_str())};
}

Verdict ac9_determinism()
{
    std::vector<std::string> outputs;
    for (unsigned jobs : {1u, 2u, 3u, 8u}) {
        std::string text;
        for (const char* preset : {"fig2a", "fig4b"}) {
            ParamMap params = load_preset(preset);
            params["mi-samples"] = "20000";
            params["trials"] = "2000";
            params["sinr-source"] = "empirical";
            params["seed"] = "42";
            text += to_csv({"sweep", params, {}}, run_sweep(sweep_spec_from(params), Parallelism{jobs}));
        }
        text += to_csv({"compare", {}, {}}, compare_ldm_vs_tdmfdm(CompareSpec::defaults(), Parallelism{jobs}));
        outputs.push_back(std::move(text));
    }
    const bool same = std::all_of(outputs.begin(), outputs.end(), [&](const std::string& s) { return s == outputs[0]; });
    return {same, fmt("CSV for worker counts 1, 2, 3, 8 %s (%zu bytes each)", same ? "byte-identical" : "DIFFER",
                      outputs[0].size())};
}

Verdict ac10_jensen_direction()
{
    std::mt19937_64 gen(1010);
    std::uniform_real_distribution<double> e(-1.5, 2.0);
    std::size_t held = 0, total = 0;
    double worst_margin = -INFINITY;
    for (std::size_t nt : {2, 4}) {
        for (int i = 0; i < 50; ++i) {
            std::vector<double> v(nt);
            for (auto& x : v) x = std::pow(10.0, e(gen));
            const SinrVector s(Layer::Ml, v);
            const McEstimate t2 = sampled_t2(s, 100000, {1010, derive_stream(nt, static_cast<std::uint64_t>(i))});
            const double margin = t2.mean - t2_jensen_upper_bound(s) - 3.0 * t2.stderr_value;
            worst_margin = std::max(worst_margin, margin);
            ++total;
            if (margin <= 0.0) ++held;
        }
    }
    return {held == total, fmt("%zu/%zu vectors with sampled T2 <= analytic bound + 3 stderr (largest excess %.3g bits)",
                               held, total, worst_margin)};
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::pair<std::string, std::function<Verdict()>>>> criteria{
        {"AC1", {"moment identities", ac1_moment_identities}},
        {"AC2", {"closed-form vs empirical SINR", ac2_empirical_sinr}},
        {"AC3", {"spatial MI asymptotes", ac3_asymptotes}},
        {"AC4", {"reduction identities", ac4_reductions}},
        {"AC5", {"bound tightness", ac5_bound_tightness}},
        {"AC6", {"FL saturation", ac6_saturation}},
        {"AC7", {"scheme orderings", ac7_orderings}},
        {"AC8", {"rate-region dominance", ac8_dominance}},
        {"AC9", {"determinism", ac9_determinism}},
        {"AC10", {"Jensen direction", ac10_jensen_direction}},
    };
    std::vector<std::string> selected(argv + 1, argv + argc);
    for (const auto& id : selected) {
        if (std::none_of(criteria.begin(), criteria.end(), [&](const auto& c) { return c.first == id; })) {
            std::fprintf(stderr, "unknown criterion '%s'\n", id.c_str());
            return 2;
        }
    }
    int failures = 0;
    for (const auto& [id, entry] : criteria) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), id) == selected.end()) continue;
        Verdict v;
        try {
            v = entry.second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%-4s %s  %s: %s\n", id.c_str(), v.passed ? "PASS" : "FAIL", entry.first.c_str(), v.detail.c_str());
        std::fflush(stdout);
        failures += v.passed ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
