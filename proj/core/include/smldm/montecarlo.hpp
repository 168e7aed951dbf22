#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "smldm/capacity.hpp"
#include "smldm/model.hpp"
#include "smldm/parallel.hpp"
#include "smldm/rng.hpp"
#include "smldm/sinr.hpp"

namespace smldm {

/// n_r x n_t matrix of i.i.d. CN(0,1) entries, stored column-major so each
/// transmit antenna's channel vector is contiguous.
class ChannelMatrix {
public:
    ChannelMatrix(std::size_t n_r, std::size_t n_t) : n_r_(n_r), n_t_(n_t), entries_(n_r * n_t) {}

    std::size_t n_r() const { return n_r_; }
    std::size_t n_t() const { return n_t_; }

    std::complex<double>& operator()(std::size_t r, std::size_t t) { return entries_[t * n_r_ + r]; }
    std::complex<double> operator()(std::size_t r, std::size_t t) const { return entries_[t * n_r_ + r]; }

    std::span<const std::complex<double>> column(std::size_t t) const
    {
        return {entries_.data() + t * n_r_, n_r_};
    }
    const std::vector<std::complex<double>>& entries() const { return entries_; }

private:
    std::size_t n_r_;
    std::size_t n_t_;
    std::vector<std::complex<double>> entries_;
};

/// One combining vector per transmit antenna.
struct CombinerSet {
    std::vector<std::vector<std::complex<double>>> vectors;
};

struct McEstimate {
    double mean = 0.0;
    double stderr_value = 0.0;
    std::size_t n_samples = 0;
};

/// Streaming mean/variance (Welford) with an order-stable merge.
class RunningStat {
public:
    void add(double x);
    void merge(const RunningStat& other);

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const;
    double stderr_of_mean() const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

ChannelMatrix draw_channel(std::size_t n_r, std::size_t n_t, const RngSpec& rng);

/// MRC with perfect channel knowledge: g_n is column n of the channel.
CombinerSet mrc_combiners(const ChannelMatrix& channel);

inline constexpr std::size_t kMinMomentTrials = 1000;
inline constexpr std::size_t kMinMiSamples = 10000;
inline constexpr std::size_t kDefaultMomentTrials = 100000;
inline constexpr std::size_t kDefaultMiSamples = 1000000;

/// Sample means (and standard errors) of the MRC moment terms for one
/// layer. Trial i draws its channel from stream rng.stream_id + i.
MomentEstimates estimate_moments(Layer layer, const SystemConfig& cfg, std::size_t trials,
                                 const RngSpec& rng, Parallelism par = {});

/// Estimated moments assembled into the SM-LDM SINR of one layer.
SinrVector empirical_sinr(Layer layer, const SystemConfig& cfg, const PowerSplit& split,
                          std::size_t trials, const RngSpec& rng, Parallelism par = {});

/// Empirical counterpart of closed_form_sinr for any scheme: single-TA
/// estimates with one antenna, SMX scales the noise by N_t, TDM/FDM gives
/// each layer the full power without the other layer's interference.
SinrVector empirical_scheme_sinr(SchemeId scheme, Layer layer, const SystemConfig& cfg,
                                 std::size_t trials, const RngSpec& rng, Parallelism par = {});

/// Monte Carlo estimate of the exact spatial-domain MI I(y; a) in bits for
/// the equivalent Gaussian-mixture model with covariances
/// diag(1/SINR) + N_t e_n e_n^T.
McEstimate spatial_mi_exact(const SinrVector& s, std::size_t samples, const RngSpec& rng,
                            Parallelism par = {});

/// Monte Carlo estimate of T2 = E log2[(1/N_t) sum_n' p(y | n')] in bits.
McEstimate sampled_t2(const SinrVector& s, std::size_t samples, const RngSpec& rng, Parallelism par = {});

enum class SinrSource { ClosedForm, Empirical };

SinrSource parse_sinr_source(std::string_view text);
std::string_view to_string(SinrSource source);

struct SimulationBudget {
    std::size_t moment_trials = kDefaultMomentTrials;
    std::size_t mi_samples = kDefaultMiSamples;
};

/// Simulated SE of one layer: exact constellation term plus the sampled
/// spatial term (SM-based schemes only). stderr comes from the spatial term.
SeBreakdown simulated_se(Layer layer, SchemeId scheme, const SystemConfig& cfg, const TdmFdmShare& share,
                         SinrSource source, const SimulationBudget& budget, const RngSpec& rng,
                         Parallelism par = {});

}  // namespace smldm
