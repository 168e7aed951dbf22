#include "smldm/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace smldm {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Per-block accumulators for the moment terms of one layer.
struct MomentBlock {
    explicit MomentBlock(std::size_t n_t)
        : gain_re(n_t), gain_im(n_t), norm(n_t), isi(n_t * n_t)
    {
    }

    void merge(const MomentBlock& other)
    {
        for (std::size_t i = 0; i < gain_re.size(); ++i) {
            gain_re[i].merge(other.gain_re[i]);
            gain_im[i].merge(other.gain_im[i]);
            norm[i].merge(other.norm[i]);
        }
        for (std::size_t i = 0; i < isi.size(); ++i) {
            isi[i].merge(other.isi[i]);
        }
    }

    std::vector<RunningStat> gain_re;
    std::vector<RunningStat> gain_im;
    std::vector<RunningStat> norm;
    std::vector<RunningStat> isi;  // row-major (n, n')
};

std::complex<double> inner(std::span<const std::complex<double>> g, std::span<const std::complex<double>> h)
{
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t r = 0; r < g.size(); ++r) {
        acc += std::conj(g[r]) * h[r];
    }
    return acc;
}

double squared_norm(std::span<const std::complex<double>> v)
{
    double acc = 0.0;
    for (const auto& x : v) {
        acc += std::norm(x);
    }
    return acc;
}

// Draws per-sample statistics in fixed blocks and merges them in block order,
// so the result is independent of the worker count.
template <typename SampleFn>
RunningStat blocked_mean(std::size_t samples, const RngSpec& rng, Parallelism par, SampleFn&& sample)
{
    const std::size_t blocks = block_count(samples);
    std::vector<RunningStat> partial(blocks);
    parallel_for(blocks, par, [&](std::size_t b) {
        const std::size_t begin = b * kTrialBlock;
        const std::size_t end = std::min(samples, begin + kTrialBlock);
        RunningStat stat;
        for (std::size_t i = begin; i < end; ++i) {
            PhiloxStream stream(rng.trial(i));
            stat.add(sample(stream));
        }
        partial[b] = stat;
    });
    RunningStat total;
    for (const auto& p : partial) {
        total.merge(p);
    }
    return total;
}

double log_sum_exp(std::span<const double> terms)
{
    double peak = -std::numeric_limits<double>::infinity();
    for (double t : terms) {
        peak = std::max(peak, t);
    }
    double acc = 0.0;
    for (double t : terms) {
        acc += std::exp(t - peak);
    }
    return peak + std::log(acc);
}

void check_mi_inputs(const SinrVector& s, std::size_t samples)
{
    if (samples < kMinMiSamples) {
        throw ValidationError("MI estimation needs at least 10000 samples");
    }
    for (double v : s.values()) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ValidationError("sampled spatial MI requires all SINR > 0 and finite");
        }
    }
}

std::size_t draw_active(PhiloxStream& stream, std::size_t n_t)
{
    const auto n = static_cast<std::size_t>(stream.uniform() * static_cast<double>(n_t));
    return std::min(n, n_t - 1);
}

// Fills `power` with |y_k|^2 for y ~ CN(0, diag(base) + n_t e_active e_active^T).
void draw_equivalent_output(PhiloxStream& stream, const std::vector<double>& base, std::size_t active,
                            std::vector<double>& power)
{
    const double nt = static_cast<double>(base.size());
    for (std::size_t k = 0; k < base.size(); ++k) {
        const double variance = k == active ? base[k] + nt : base[k];
        power[k] = variance * std::norm(stream.complex_normal());
    }
}

std::vector<double> inverse_sinr(const SinrVector& s)
{
    std::vector<double> base;
    base.reserve(s.size());
    for (double v : s.values()) {
        base.push_back(1.0 / v);
    }
    return base;
}

}  // namespace

void RunningStat::add(double x)
{
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void RunningStat::merge(const RunningStat& other)
{
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double total = static_cast<double>(n_ + other.n_);
    const double delta = other.mean_ - mean_;
    mean_ += delta * static_cast<double>(other.n_) / total;
    m2_ += other.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) / total;
    n_ += other.n_;
}

double RunningStat::variance() const
{
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double RunningStat::stderr_of_mean() const
{
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

ChannelMatrix draw_channel(std::size_t n_r, std::size_t n_t, const RngSpec& rng)
{
    if (n_r < 1 || n_t < 1) {
        throw ValidationError("channel dimensions must be at least 1");
    }
    ChannelMatrix h(n_r, n_t);
    PhiloxStream stream(rng);
    for (std::size_t t = 0; t < n_t; ++t) {
        for (std::size_t r = 0; r < n_r; ++r) {
            h(r, t) = stream.complex_normal();
        }
    }
    return h;
}

CombinerSet mrc_combiners(const ChannelMatrix& channel)
{
    CombinerSet set;
    set.vectors.reserve(channel.n_t());
    for (std::size_t t = 0; t < channel.n_t(); ++t) {
        const auto col = channel.column(t);
        set.vectors.emplace_back(col.begin(), col.end());
    }
    return set;
}

MomentEstimates estimate_moments(Layer layer, const SystemConfig& cfg, std::size_t trials,
                                 const RngSpec& rng, Parallelism par)
{
    cfg.validate();
    if (trials < kMinMomentTrials) {
        throw ValidationError("moment estimation needs at least 1000 trials");
    }
    const std::size_t n_t = cfg.n_t;
    const std::size_t n_r = cfg.n_r(layer);
    const std::size_t blocks = block_count(trials);
    std::vector<MomentBlock> partial(blocks, MomentBlock(n_t));

    parallel_for(blocks, par, [&](std::size_t b) {
        MomentBlock acc(n_t);
        const std::size_t begin = b * kTrialBlock;
        const std::size_t end = std::min(trials, begin + kTrialBlock);
        for (std::size_t i = begin; i < end; ++i) {
            const ChannelMatrix h = draw_channel(n_r, n_t, rng.trial(i));
            const CombinerSet g = mrc_combiners(h);
            for (std::size_t n = 0; n < n_t; ++n) {
                const std::span<const std::complex<double>> gn(g.vectors[n]);
                const std::complex<double> gain = inner(gn, h.column(n));
                acc.gain_re[n].add(gain.real());
                acc.gain_im[n].add(gain.imag());
                acc.norm[n].add(squared_norm(gn));
                for (std::size_t k = 0; k < n_t; ++k) {
                    acc.isi[n * n_t + k].add(std::norm(inner(gn, h.column(k))));
                }
            }
        }
        partial[b] = std::move(acc);
    });

    MomentBlock total(n_t);
    for (const auto& p : partial) {
        total.merge(p);
    }

    MomentEstimates m;
    m.n_trials = trials;
    m.desired_gain.resize(n_t);
    m.desired_gain_stderr.resize(n_t);
    m.combiner_norm.resize(n_t);
    m.combiner_norm_stderr.resize(n_t);
    m.self_isi = MomentMatrix(n_t);
    m.self_isi_stderr = MomentMatrix(n_t);
    for (std::size_t n = 0; n < n_t; ++n) {
        const double re = total.gain_re[n].mean();
        const double im = total.gain_im[n].mean();
        m.desired_gain[n] = re * re + im * im;
        // delta method on |mean|^2
        m.desired_gain_stderr[n] = std::hypot(2.0 * re * total.gain_re[n].stderr_of_mean(),
                                              2.0 * im * total.gain_im[n].stderr_of_mean());
        m.combiner_norm[n] = total.norm[n].mean();
        m.combiner_norm_stderr[n] = total.norm[n].stderr_of_mean();
        for (std::size_t k = 0; k < n_t; ++k) {
            m.self_isi(n, k) = total.isi[n * n_t + k].mean();
            m.self_isi_stderr(n, k) = total.isi[n * n_t + k].stderr_of_mean();
        }
    }
    if (layer == Layer::Ml) {
        // FL symbols reach the ML receiver through the same channel columns.
        m.cross_isi = m.self_isi;
        m.cross_isi_stderr = m.self_isi_stderr;
    }
    return m;
}

SinrVector empirical_sinr(Layer layer, const SystemConfig& cfg, const PowerSplit& split,
                          std::size_t trials, const RngSpec& rng, Parallelism par)
{
    const MomentEstimates m = estimate_moments(layer, cfg, trials, rng, par);
    return layer == Layer::Ml ? sinr_from_moments_ml(m, split, cfg.n_t, cfg.sigma2_ml())
                              : sinr_from_moments_fl(m, split, cfg.n_t, cfg.sigma2_fl());
}

SinrVector empirical_scheme_sinr(SchemeId scheme, Layer layer, const SystemConfig& cfg,
                                 std::size_t trials, const RngSpec& rng, Parallelism par)
{
    SystemConfig effective = cfg;
    effective.n_t = effective_nt(scheme, cfg);
    const MomentEstimates m = estimate_moments(layer, effective, trials, rng, par);
    PowerSplit split = power_split(cfg);
    double sigma2 = cfg.sigma2(layer);
    switch (scheme) {
    case SchemeId::SmLdm:
    case SchemeId::SingleTaLdm: break;
    case SchemeId::SmxLdm: sigma2 *= static_cast<double>(cfg.n_t); break;
    case SchemeId::SmTdmFdm:
        split = layer == Layer::Ml ? PowerSplit{cfg.total_power, 0.0} : PowerSplit{0.0, cfg.total_power};
        break;
    }
    return layer == Layer::Ml ? sinr_from_moments_ml(m, split, effective.n_t, sigma2)
                              : sinr_from_moments_fl(m, split, effective.n_t, sigma2);
}

McEstimate spatial_mi_exact(const SinrVector& s, std::size_t samples, const RngSpec& rng, Parallelism par)
{
    check_mi_inputs(s, samples);
    const std::size_t n_t = s.size();
    if (n_t == 1) {
        return {0.0, 0.0, samples};
    }
    const double nt = static_cast<double>(n_t);
    const std::vector<double> base = inverse_sinr(s);
    // Only the boosted entry differs between hypotheses, so each
    // log-likelihood reduces to its difference from the common part.
    std::vector<double> gain(n_t), offset(n_t);
    for (std::size_t k = 0; k < n_t; ++k) {
        gain[k] = nt / (base[k] * (base[k] + nt));
        offset[k] = std::log1p(nt / base[k]);
    }
    const double log_nt = std::log(nt);

    const RunningStat stat = blocked_mean(samples, rng, par, [&](PhiloxStream& stream) {
        thread_local std::vector<double> power, loglik;
        power.resize(n_t);
        loglik.resize(n_t);
        const std::size_t active = draw_active(stream, n_t);
        draw_equivalent_output(stream, base, active, power);
        for (std::size_t k = 0; k < n_t; ++k) {
            loglik[k] = power[k] * gain[k] - offset[k];
        }
        return (loglik[active] - (log_sum_exp(loglik) - log_nt)) / kLn2;
    });
    return {stat.mean(), stat.stderr_of_mean(), stat.count()};
}

McEstimate sampled_t2(const SinrVector& s, std::size_t samples, const RngSpec& rng, Parallelism par)
{
    check_mi_inputs(s, samples);
    const std::size_t n_t = s.size();
    const double nt = static_cast<double>(n_t);
    const std::vector<double> base = inverse_sinr(s);
    const double log_nt = std::log(nt);

    const RunningStat stat = blocked_mean(samples, rng, par, [&](PhiloxStream& stream) {
        thread_local std::vector<double> power, loglik;
        power.resize(n_t);
        loglik.resize(n_t);
        const std::size_t active = draw_active(stream, n_t);
        draw_equivalent_output(stream, base, active, power);
        for (std::size_t hyp = 0; hyp < n_t; ++hyp) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n_t; ++k) {
                const double variance = k == hyp ? base[k] + nt : base[k];
                acc -= power[k] / variance + std::log(std::numbers::pi * variance);
            }
            loglik[hyp] = acc;
        }
        return (log_sum_exp(loglik) - log_nt) / kLn2;
    });
    return {stat.mean(), stat.stderr_of_mean(), stat.count()};
}

SinrSource parse_sinr_source(std::string_view text)
{
    if (text == "closed_form" || text == "closed-form") return SinrSource::ClosedForm;
    if (text == "empirical") return SinrSource::Empirical;
    throw ValidationError("unknown SINR source '" + std::string(text) + "' (expected closed-form or empirical)");
}

std::string_view to_string(SinrSource source)
{
    return source == SinrSource::ClosedForm ? "closed-form" : "empirical";
}

SeBreakdown simulated_se(Layer layer, SchemeId scheme, const SystemConfig& cfg, const TdmFdmShare& share,
                         SinrSource source, const SimulationBudget& budget, const RngSpec& rng,
                         Parallelism par)
{
    cfg.validate();
    share.validate();
    const RngSpec moment_rng{rng.seed, derive_stream(rng.stream_id, 1)};
    const RngSpec mi_rng{rng.seed, derive_stream(rng.stream_id, 2)};

    const SinrVector s = [&] {
        if (source == SinrSource::Empirical) {
            return empirical_scheme_sinr(scheme, layer, cfg, budget.moment_trials, moment_rng, par);
        }
        const LayerSinr both = closed_form_sinr(scheme, cfg);
        return layer == Layer::Ml ? both.ml : both.fl;
    }();

    if (scheme == SchemeId::SingleTaLdm || scheme == SchemeId::SmxLdm) {
        const LayerSe se = scheme == SchemeId::SingleTaLdm ? single_ta_se(s, s) : smx_se(s, s);
        SeBreakdown out = se.ml;
        out.stderr_bits = 0.0;
        return out;
    }

    const double constellation = cmcc_mi(s);
    McEstimate spatial{0.0, 0.0, 0};
    const bool any_zero = std::any_of(s.values().begin(), s.values().end(), [](double v) { return v == 0.0; });
    if (s.size() > 1 && !any_zero) {
        spatial = spatial_mi_exact(s, budget.mi_samples, mi_rng, par);
    }
    SeBreakdown out = SeBreakdown::from_parts(constellation, spatial.mean, spatial.stderr_value);
    if (scheme == SchemeId::SmTdmFdm) {
        out = out.scaled(layer == Layer::Ml ? share.ml_fraction() : share.fl_fraction());
    }
    return out;
}

}  // namespace smldm
