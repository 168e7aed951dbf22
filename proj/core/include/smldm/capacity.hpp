#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "smldm/model.hpp"
#include "smldm/sinr.hpp"

namespace smldm {

/// Diagonal covariance of the equivalent received vector when antenna
/// `boosted_index` is active: diag(1/SINR) + N_t * e_n e_n^T.
class SigmaDiag {
public:
    SigmaDiag(const SinrVector& sinr, std::size_t boosted_index);

    std::size_t size() const { return base_.size(); }
    std::size_t boosted_index() const { return boosted_; }
    const std::vector<double>& base() const { return base_; }

    /// k-th diagonal entry.
    double entry(std::size_t k) const;

    /// Natural log of the determinant.
    double log_det() const;

private:
    std::vector<double> base_;
    std::size_t boosted_;
};

/// ln det(num) - ln det(a + b) for diagonal matrices, accumulated entry by
/// entry as ln(num_k / (a_k + b_k)).
double log_det_ratio(const SigmaDiag& num, const SigmaDiag& a, const SigmaDiag& b);

struct SeBreakdown {
    double constellation_mi = 0.0;
    double spatial_mi = 0.0;
    double total_se = 0.0;
    std::optional<double> stderr_bits;

    static SeBreakdown from_parts(double constellation, double spatial,
                                  std::optional<double> stderr_bits = std::nullopt);

    SeBreakdown scaled(double factor) const;
};

/// Per-call diagnostics of the shifted spatial-MI bound.
struct SpatialBound {
    double bits = 0.0;       ///< value after clamping to [0, log2 N_t]
    double unclamped = 0.0;  ///< raw shifted bound
    bool clamped = false;
    bool zero_sinr = false;  ///< some SINR == 0 with N_t >= 2; bits forced to 0
};

/// log2(1 + x) with full relative accuracy for small x.
double log2_1p(double x);

/// Constellation-domain MI: (1/N_t) sum_n log2(1 + N_t SINR_n).
double cmcc_mi(const SinrVector& s);

/// Jensen lower bound on the spatial-domain MI before the constant shift:
/// log2 N_t - (1/N_t) sum_n log2 sum_n' det(S_n)/det(S_n + S_n') - N_t log2 e.
double spatial_mi_jensen_bound(const SinrVector& s);

/// Shifted, asymptotically unbiased spatial-domain MI bound with clamping
/// diagnostics. N_t = 1 gives exactly 0.
SpatialBound spatial_mi_bound_detail(const SinrVector& s);

double spatial_mi_lower_bound(const SinrVector& s);

/// Analytic Jensen upper bound on the cross-entropy term
/// T2 = E log2[(1/N_t) sum_n' p(y | n')], in bits.
double t2_jensen_upper_bound(const SinrVector& s);

/// Closed-form T1 = E log2 p(y | n), in bits.
double t1_closed_form(const SinrVector& s);

/// SM SE lower bound: cmcc_mi + shifted spatial bound. Serves both layers.
SeBreakdown sm_se_lower_bound(const SinrVector& s);

struct LayerSe {
    SeBreakdown ml;
    SeBreakdown fl;
};

/// Exact single-TA SE: log2(1 + SINR) per layer. Inputs must have length 1.
LayerSe single_ta_se(const SinrVector& s_ml, const SinrVector& s_fl);

/// SMX SE: per layer, sum over antennas of log2(1 + SINR_n).
LayerSe smx_se(const SinrVector& s_ml, const SinrVector& s_fl);

/// SM-TDM/FDM SE: each layer's SM bound scaled by its resource share.
LayerSe tdmfdm_se(const SinrVector& s_ml, const SinrVector& s_fl, const TdmFdmShare& share);

/// Closed-form SE of a scheme at one operating point.
LayerSe closed_form_se(SchemeId scheme, const SystemConfig& cfg, const TdmFdmShare& share = {});

}  // namespace smldm
