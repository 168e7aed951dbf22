#include "smldm/selftest.hpp"

#include <algorithm>
#include <cmath>

#include "smldm/capacity.hpp"
#include "smldm/config.hpp"
#include "smldm/montecarlo.hpp"

namespace smldm {

namespace {

bool close_rel(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

std::vector<SystemConfig> config_grid()
{
    std::vector<SystemConfig> grid;
    for (std::size_t nt : {1, 2, 4}) {
        for (std::size_t nr : {1, 2, 8}) {
            for (double il : {1.0, 5.0, 20.0}) {
                for (double snr : {-10.0, 0.0, 20.0}) {
                    SystemConfig cfg;
                    cfg.n_t = nt;
                    cfg.n_rm = nr;
                    cfg.n_rf = nr;
                    cfg.injection_level_db = il;
                    cfg.snr_ml_db = snr;
                    cfg.snr_fl_db = snr + 10.0;
                    grid.push_back(cfg);
                }
            }
        }
    }
    return grid;
}

std::string fmt(double v) { return format_double(v); }

using CheckFn = std::function<std::string()>;  // empty string == pass

}  // namespace

ClosedFormHooks ClosedFormHooks::mutated(std::string_view mutation)
{
    ClosedFormHooks hooks;
    if (mutation == "ml-denominator-sign") {
        hooks.mrc_ml = [](const SystemConfig& cfg, const PowerSplit& split) {
            const double nt = static_cast<double>(cfg.n_t);
            const double nr = static_cast<double>(cfg.n_rm);
            const double v = split.rho_ml * nr /
                             (split.rho_ml * nt - split.rho_fl * (nt + nr) + nt * cfg.sigma2_ml());
            return SinrVector::uniform(Layer::Ml, cfg.n_t, v);
        };
    } else if (mutation == "fl-noise-scale") {
        hooks.mrc_fl = [](const SystemConfig& cfg, const PowerSplit& split) {
            const double nt = static_cast<double>(cfg.n_t);
            const double nr = static_cast<double>(cfg.n_rf);
            const double v = split.rho_fl * nr / (split.rho_fl * nt + cfg.sigma2_fl());
            return SinrVector::uniform(Layer::Fl, cfg.n_t, v);
        };
    } else {
        throw ValidationError("unknown mutation '" + std::string(mutation) +
                              "' (expected ml-denominator-sign or fl-noise-scale)");
    }
    return hooks;
}

std::vector<SelfTestCheck> run_selftest(const SelfTestOptions& options)
{
    const ClosedFormHooks& hooks = options.hooks;
    const std::size_t moment_trials = options.quick ? 20000 : 100000;
    const std::size_t mi_samples = options.quick ? 50000 : 400000;
    const auto grid = config_grid();
    auto rng_for = [&](std::uint64_t tag) { return RngSpec{options.rng.seed, derive_stream(options.rng.stream_id, tag)}; };

    std::vector<std::pair<std::string, CheckFn>> checks;

    checks.emplace_back("power-split-invariants", [] {
        for (double p : {0.5, 1.0, 3.0}) {
            for (double il : {0.1, 5.0, 20.0, 60.0}) {
                const PowerSplit s = power_split(p, il);
                if (!close_rel(s.rho_ml + s.rho_fl, p, 1e-12) || !close_rel(s.rho_ml / s.rho_fl, db_to_linear(il), 1e-12)) {
                    return "P=" + fmt(p) + " IL=" + fmt(il);
                }
            }
        }
        return std::string{};
    });

    checks.emplace_back("power-split-homogeneity", [] {
        for (double c : {0.25, 2.0, 10.0}) {
            const PowerSplit a = power_split(c * 1.5, 7.0);
            const PowerSplit b = power_split(1.5, 7.0);
            if (!close_rel(a.rho_ml, c * b.rho_ml, 1e-12) || !close_rel(a.rho_fl, c * b.rho_fl, 1e-12)) {
                return "c=" + fmt(c);
            }
        }
        return std::string{};
    });

    checks.emplace_back("ml-sinr-moment-consistency", [&] {
        for (const auto& cfg : grid) {
            const PowerSplit split = power_split(cfg);
            const SinrVector a = sinr_from_moments_ml(analytic_mrc_moments(cfg.n_t, cfg.n_rm, true), split, cfg.n_t, cfg.sigma2_ml());
            const SinrVector b = hooks.mrc_ml(cfg, split);
            for (std::size_t n = 0; n < cfg.n_t; ++n) {
                if (!close_rel(a[n], b[n], 1e-12)) return "moments " + fmt(a[n]) + " vs closed form " + fmt(b[n]);
            }
        }
        return std::string{};
    });

    checks.emplace_back("fl-sinr-moment-consistency", [&] {
        for (const auto& cfg : grid) {
            const PowerSplit split = power_split(cfg);
            const SinrVector a = sinr_from_moments_fl(analytic_mrc_moments(cfg.n_t, cfg.n_rf, false), split, cfg.n_t, cfg.sigma2_fl());
            const SinrVector b = hooks.mrc_fl(cfg, split);
            for (std::size_t n = 0; n < cfg.n_t; ++n) {
                if (!close_rel(a[n], b[n], 1e-12)) return "moments " + fmt(a[n]) + " vs closed form " + fmt(b[n]);
            }
        }
        return std::string{};
    });

    checks.emplace_back("single-ta-reduction", [&] {
        for (auto cfg : grid) {
            cfg.n_t = 1;
            const PowerSplit split = power_split(cfg);
            const LayerSinr st = single_ta_sinr(cfg, split);
            if (!close_rel(st.ml[0], hooks.mrc_ml(cfg, split)[0], 1e-12) ||
                !close_rel(st.fl[0], hooks.mrc_fl(cfg, split)[0], 1e-12)) {
                return std::string("single-TA differs from N_t = 1 MRC");
            }
        }
        return std::string{};
    });

    checks.emplace_back("smx-nt1-equals-single-ta", [&] {
        for (auto cfg : grid) {
            cfg.n_t = 1;
            const PowerSplit split = power_split(cfg);
            const LayerSinr a = smx_sinr(cfg, split);
            const LayerSinr b = single_ta_sinr(cfg, split);
            if (!close_rel(a.ml[0], b.ml[0], 1e-12) || !close_rel(a.fl[0], b.fl[0], 1e-12)) {
                return std::string("SMX at N_t = 1 differs from single-TA");
            }
        }
        return std::string{};
    });

    checks.emplace_back("smx-below-sm", [&] {
        for (const auto& cfg : grid) {
            if (cfg.n_t < 2) continue;
            const PowerSplit split = power_split(cfg);
            const LayerSinr smx = smx_sinr(cfg, split);
            if (!(smx.ml[0] < hooks.mrc_ml(cfg, split)[0]) || !(smx.fl[0] < hooks.mrc_fl(cfg, split)[0])) {
                return "N_t=" + std::to_string(cfg.n_t) + " IL=" + fmt(cfg.injection_level_db);
            }
        }
        return std::string{};
    });

    checks.emplace_back("ml-sinr-increases-with-nrm", [&] {
        for (auto cfg : grid) {
            const PowerSplit split = power_split(cfg);
            const double base = hooks.mrc_ml(cfg, split)[0];
            cfg.n_rm *= 2;
            if (!(hooks.mrc_ml(cfg, split)[0] > base)) return "N_rm=" + std::to_string(cfg.n_rm / 2);
        }
        return std::string{};
    });

    checks.emplace_back("spatial-bound-high-sinr", [] {
        for (std::size_t nt : {2, 4, 8}) {
            const double v = spatial_mi_lower_bound(SinrVector::uniform(Layer::Ml, nt, 1e8));
            if (std::abs(v - std::log2(static_cast<double>(nt))) > 1e-3) return "N_t=" + std::to_string(nt) + " gives " + fmt(v);
        }
        return std::string{};
    });

    checks.emplace_back("spatial-bound-low-sinr", [] {
        for (std::size_t nt : {2, 4, 8}) {
            const double v = spatial_mi_lower_bound(SinrVector::uniform(Layer::Ml, nt, 1e-8));
            if (std::abs(v) > 1e-3) return "N_t=" + std::to_string(nt) + " gives " + fmt(v);
        }
        return std::string{};
    });

    checks.emplace_back("spatial-bound-shift-identity", [] {
        const std::vector<std::vector<double>> cases = {{0.3, 2.0}, {1.0, 1.0, 5.0, 0.2}, {10.0, 0.5, 3.0}};
        for (const auto& c : cases) {
            const SinrVector s(Layer::Ml, c);
            const double nt = static_cast<double>(c.size());
            const double shifted = spatial_mi_bound_detail(s).unclamped;
            const double jensen = spatial_mi_jensen_bound(s);
            if (std::abs(shifted - (jensen + nt * std::log2(std::exp(1.0)) - nt)) > 1e-12) return std::string("shift mismatch");
        }
        return std::string{};
    });

    checks.emplace_back("nt1-se-reduction", [] {
        for (double v : {0.0, 1e-6, 0.5, 1.0, 30.0}) {
            const SinrVector s = SinrVector::uniform(Layer::Fl, 1, v);
            const SeBreakdown sm = sm_se_lower_bound(s);
            const LayerSe st = single_ta_se(s, s);
            if (std::abs(sm.total_se - st.fl.total_se) > 1e-12 || sm.spatial_mi != 0.0) return "SINR=" + fmt(v);
        }
        return std::string{};
    });

    checks.emplace_back("tdmfdm-half-share", [&] {
        for (const auto& cfg : grid) {
            const LayerSinr tf = tdmfdm_sinr(cfg);
            const LayerSe se = tdmfdm_se(tf.ml, tf.fl, {1.0, 1.0});
            if (std::abs(se.ml.total_se - 0.5 * sm_se_lower_bound(tf.ml).total_se) > 1e-12 ||
                std::abs(se.fl.total_se - 0.5 * sm_se_lower_bound(tf.fl).total_se) > 1e-12) {
                return std::string("share (1,1) is not half the SM bound");
            }
        }
        return std::string{};
    });

    checks.emplace_back("moment-identities", [&] {
        for (std::size_t nr : {1, 4}) {
            SystemConfig cfg;
            cfg.n_t = 2;
            cfg.n_rm = nr;
            const MomentEstimates m = estimate_moments(Layer::Ml, cfg, moment_trials, rng_for(100 + nr));
            const double n = static_cast<double>(nr);
            const auto off = [](double est, double se, double target) { return std::abs(est - target) > 5.0 * se; };
            if (off(m.combiner_norm[0], m.combiner_norm_stderr[0], n) ||
                off(m.self_isi(0, 1), m.self_isi_stderr(0, 1), n) ||
                off(m.self_isi(0, 0), m.self_isi_stderr(0, 0), n * (n + 1.0))) {
                return "N_r=" + std::to_string(nr);
            }
        }
        return std::string{};
    });

    checks.emplace_back("empirical-sinr-matches-closed-form", [&] {
        SystemConfig cfg;
        cfg.n_t = 2;
        cfg.n_rm = 2;
        cfg.n_rf = 2;
        cfg.injection_level_db = 5.0;
        cfg.snr_ml_db = 0.0;
        cfg.snr_fl_db = 20.0;
        const PowerSplit split = power_split(cfg);
        const SinrVector ml = empirical_sinr(Layer::Ml, cfg, split, moment_trials, rng_for(200));
        const SinrVector fl = empirical_sinr(Layer::Fl, cfg, split, moment_trials, rng_for(201));
        const double ml_ref = hooks.mrc_ml(cfg, split)[0];
        const double fl_ref = hooks.mrc_fl(cfg, split)[0];
        if (!close_rel(ml[0], ml_ref, 0.05)) return "ML " + fmt(ml[0]) + " vs " + fmt(ml_ref);
        if (!close_rel(fl[0], fl_ref, 0.05)) return "FL " + fmt(fl[0]) + " vs " + fmt(fl_ref);
        return std::string{};
    });

    checks.emplace_back("sampled-spatial-mi-dominates-bound", [&] {
        const SinrVector s = SinrVector::uniform(Layer::Ml, 2, 1.0);
        const McEstimate e = spatial_mi_exact(s, mi_samples, rng_for(300));
        const double bound = spatial_mi_lower_bound(s);
        if (!(e.mean + 3.0 * e.stderr_value >= bound) || !(e.mean <= 1.0 + 3.0 * e.stderr_value)) {
            return "sampled " + fmt(e.mean) + " bound " + fmt(bound);
        }
        return std::string{};
    });

    checks.emplace_back("jensen-direction", [&] {
        for (const auto& c : std::vector<std::vector<double>>{{0.5, 2.0}, {1.0, 3.0, 0.2, 8.0}}) {
            const SinrVector s(Layer::Ml, c);
            const McEstimate t2 = sampled_t2(s, mi_samples, rng_for(400 + c.size()));
            const double bound = t2_jensen_upper_bound(s);
            if (!(t2.mean <= bound + 3.0 * t2.stderr_value)) return "T2 " + fmt(t2.mean) + " > " + fmt(bound);
        }
        return std::string{};
    });

    std::vector<SelfTestCheck> out;
    out.reserve(checks.size());
    for (auto& [name, fn] : checks) {
        SelfTestCheck result{name, false, {}};
        try {
            result.detail = fn();
            result.passed = result.detail.empty();
        } catch (const std::exception& e) {
            result.detail = std::string("exception: ") + e.what();
        }
        out.push_back(std::move(result));
    }
    return out;
}

}  // namespace smldm
