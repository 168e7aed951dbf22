#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "smldm/model.hpp"

namespace smldm {

/// Per-transmit-antenna linear SINR values of one layer.
///
/// Values are nonnegative and finite. `asymptotic` lifts the finiteness
/// check so that limit behaviour (SINR -> inf) can be exercised directly.
class SinrVector {
public:
    SinrVector(Layer layer, std::vector<double> values);

    /// n_t copies of the same value.
    static SinrVector uniform(Layer layer, std::size_t n_t, double value);
    static SinrVector asymptotic(Layer layer, std::vector<double> values);

    Layer layer() const { return layer_; }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    struct Unchecked {};
    SinrVector(Unchecked, Layer layer, std::vector<double> values);

    Layer layer_;
    std::vector<double> values_;
};

/// Dense N_t x N_t square matrix of moment terms, row-major.
class MomentMatrix {
public:
    MomentMatrix() = default;
    explicit MomentMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }
    double operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Expectations of combiner/channel inner products that make up the
/// linear-combiner SINR, indexed by transmit antenna.
///
///   desired_gain[n]   = |E{g_n^H h_n}|^2
///   self_isi(n, n')   = E{|g_n^H h_n'|^2}
///   cross_isi(n, m)   = E{|g_n^H h_m|^2}   (ML only; FL leaves it empty)
///   combiner_norm[n]  = E{||g_n||^2}
struct MomentEstimates {
    std::vector<double> desired_gain;
    MomentMatrix self_isi;
    MomentMatrix cross_isi;
    std::vector<double> combiner_norm;
    std::size_t n_trials = 0;

    /// Standard errors of the same terms; empty for analytic moments.
    std::vector<double> desired_gain_stderr;
    MomentMatrix self_isi_stderr;
    MomentMatrix cross_isi_stderr;
    std::vector<double> combiner_norm_stderr;

    std::size_t n_t() const { return combiner_norm.size(); }

    /// Checks shape against n_t and nonnegativity.
    void validate(std::size_t n_t, bool needs_cross) const;
};

/// Analytic MRC moments for i.i.d. CN(0,1) channels with n_r receive
/// antennas: E||h||^2 = n_r, E|h_n^H h_n'|^2 = n_r (n != n'),
/// E||h||^4 = n_r (n_r + 1).
MomentEstimates analytic_mrc_moments(std::size_t n_t, std::size_t n_r, bool with_cross);

/// Generic linear-combiner SINR for the mobile layer, with fixed-layer
/// symbols counted as interference.
SinrVector sinr_from_moments_ml(const MomentEstimates& m, const PowerSplit& split, std::size_t n_t,
                                double sigma2_ml);

/// Fixed-layer SINR after perfect ML cancellation.
SinrVector sinr_from_moments_fl(const MomentEstimates& m, const PowerSplit& split, std::size_t n_t,
                                double sigma2_fl);

// MRC closed forms. Every entry of the returned vectors is identical.

SinrVector mrc_sinr_ml(const SystemConfig& cfg, const PowerSplit& split);
SinrVector mrc_sinr_fl(const SystemConfig& cfg, const PowerSplit& split);

struct LayerSinr {
    SinrVector ml;
    SinrVector fl;
};

LayerSinr single_ta_sinr(const SystemConfig& cfg, const PowerSplit& split);

/// SMX-LDM: all antennas active, per-antenna power divided by N_t.
LayerSinr smx_sinr(const SystemConfig& cfg, const PowerSplit& split);

/// SM-TDM/FDM: each service gets the full power P_u on its own resource.
LayerSinr tdmfdm_sinr(const SystemConfig& cfg);

/// Closed-form SINR pair for any scheme.
LayerSinr closed_form_sinr(SchemeId scheme, const SystemConfig& cfg);

}  // namespace smldm
