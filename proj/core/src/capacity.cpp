#include "smldm/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace smldm {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLog2E = std::numbers::log2e;

double log_sum_exp(const std::vector<double>& terms)
{
    double peak = -std::numeric_limits<double>::infinity();
    for (double t : terms) {
        peak = std::max(peak, t);
    }
    if (std::isinf(peak)) {
        return peak;
    }
    double acc = 0.0;
    for (double t : terms) {
        acc += std::exp(t - peak);
    }
    return peak + std::log(acc);
}

bool has_zero(const SinrVector& s)
{
    return std::any_of(s.values().begin(), s.values().end(), [](double v) { return v == 0.0; });
}

// Sum over n of ln sum_n' det(S_n) / det(S_n + S_n').
double sum_log_ratio_sums(const SinrVector& s)
{
    const std::size_t n_t = s.size();
    std::vector<SigmaDiag> sigma;
    sigma.reserve(n_t);
    for (std::size_t n = 0; n < n_t; ++n) {
        sigma.emplace_back(s, n);
    }
    std::vector<double> terms(n_t);
    double total = 0.0;
    for (std::size_t n = 0; n < n_t; ++n) {
        for (std::size_t k = 0; k < n_t; ++k) {
            terms[k] = log_det_ratio(sigma[n], sigma[n], sigma[k]);
        }
        total += log_sum_exp(terms);
    }
    return total;
}

void require_positive(const SinrVector& s, const char* what)
{
    if (has_zero(s)) {
        throw ValidationError(std::string(what) + " requires all SINR > 0");
    }
}

}  // namespace

SigmaDiag::SigmaDiag(const SinrVector& sinr, std::size_t boosted_index) : boosted_(boosted_index)
{
    if (boosted_index >= sinr.size()) {
        throw ValidationError("boosted antenna index out of range");
    }
    base_.reserve(sinr.size());
    for (double v : sinr.values()) {
        base_.push_back(1.0 / v);
    }
}

double SigmaDiag::entry(std::size_t k) const
{
    return k == boosted_ ? base_[k] + static_cast<double>(base_.size()) : base_[k];
}

double SigmaDiag::log_det() const
{
    const double nt = static_cast<double>(base_.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < base_.size(); ++k) {
        acc += std::log(base_[k]);
    }
    return acc + std::log1p(nt / base_[boosted_]);
}

double log_det_ratio(const SigmaDiag& num, const SigmaDiag& a, const SigmaDiag& b)
{
    double acc = 0.0;
    for (std::size_t k = 0; k < num.size(); ++k) {
        const double top = num.entry(k);
        const double bottom = a.entry(k) + b.entry(k);
        // 0/0 only arises for an infinite SINR on an inactive entry, where
        // both summands share the same vanishing base.
        acc += bottom == 0.0 ? -kLn2 : std::log(top / bottom);
    }
    return acc;
}

SeBreakdown SeBreakdown::from_parts(double constellation, double spatial, std::optional<double> stderr_bits)
{
    return {constellation, spatial, constellation + spatial, stderr_bits};
}

SeBreakdown SeBreakdown::scaled(double factor) const
{
    SeBreakdown out = from_parts(constellation_mi * factor, spatial_mi * factor);
    if (stderr_bits) {
        out.stderr_bits = *stderr_bits * factor;
    }
    return out;
}

double log2_1p(double x) { return std::log1p(x) / kLn2; }

double cmcc_mi(const SinrVector& s)
{
    const double nt = static_cast<double>(s.size());
    double acc = 0.0;
    for (double v : s.values()) {
        acc += log2_1p(nt * v);
    }
    return acc / nt;
}

double spatial_mi_jensen_bound(const SinrVector& s)
{
    require_positive(s, "spatial_mi_jensen_bound");
    const double nt = static_cast<double>(s.size());
    return std::log2(nt) - sum_log_ratio_sums(s) / (nt * kLn2) - nt * kLog2E;
}

SpatialBound spatial_mi_bound_detail(const SinrVector& s)
{
    SpatialBound out;
    const std::size_t n_t = s.size();
    if (n_t == 1) {
        return out;
    }
    if (has_zero(s)) {
        out.zero_sinr = true;
        return out;
    }
    const double nt = static_cast<double>(n_t);
    const double ceiling = std::log2(nt);
    out.unclamped = ceiling - nt - sum_log_ratio_sums(s) / (nt * kLn2);
    out.bits = std::clamp(out.unclamped, 0.0, ceiling);
    out.clamped = out.bits != out.unclamped;
    return out;
}

double spatial_mi_lower_bound(const SinrVector& s) { return spatial_mi_bound_detail(s).bits; }

double t2_jensen_upper_bound(const SinrVector& s)
{
    require_positive(s, "t2_jensen_upper_bound");
    const std::size_t n_t = s.size();
    const double nt = static_cast<double>(n_t);
    std::vector<SigmaDiag> sigma;
    for (std::size_t n = 0; n < n_t; ++n) {
        sigma.emplace_back(s, n);
    }
    std::vector<double> terms(n_t);
    double acc = 0.0;
    for (std::size_t n = 0; n < n_t; ++n) {
        for (std::size_t k = 0; k < n_t; ++k) {
            double log_det_sum = 0.0;
            for (std::size_t j = 0; j < n_t; ++j) {
                log_det_sum += std::log(sigma[n].entry(j) + sigma[k].entry(j));
            }
            terms[k] = -log_det_sum;
        }
        acc += log_sum_exp(terms) - std::log(nt);
    }
    return acc / (nt * kLn2) - nt * std::log2(std::numbers::pi);
}

double t1_closed_form(const SinrVector& s)
{
    require_positive(s, "t1_closed_form");
    const std::size_t n_t = s.size();
    const double nt = static_cast<double>(n_t);
    double acc = 0.0;
    for (std::size_t n = 0; n < n_t; ++n) {
        acc += SigmaDiag(s, n).log_det();
    }
    return -nt * std::log2(std::numbers::pi * std::numbers::e) - acc / (nt * kLn2);
}

SeBreakdown sm_se_lower_bound(const SinrVector& s)
{
    return SeBreakdown::from_parts(cmcc_mi(s), spatial_mi_lower_bound(s));
}

LayerSe single_ta_se(const SinrVector& s_ml, const SinrVector& s_fl)
{
    if (s_ml.size() != 1 || s_fl.size() != 1) {
        throw ValidationError("single-TA SE needs one SINR value per layer");
    }
    return {SeBreakdown::from_parts(log2_1p(s_ml[0]), 0.0), SeBreakdown::from_parts(log2_1p(s_fl[0]), 0.0)};
}

LayerSe smx_se(const SinrVector& s_ml, const SinrVector& s_fl)
{
    auto layer_sum = [](const SinrVector& s) {
        double acc = 0.0;
        for (double v : s.values()) {
            acc += log2_1p(v);
        }
        return SeBreakdown::from_parts(acc, 0.0);
    };
    return {layer_sum(s_ml), layer_sum(s_fl)};
}

LayerSe tdmfdm_se(const SinrVector& s_ml, const SinrVector& s_fl, const TdmFdmShare& share)
{
    share.validate();
    return {sm_se_lower_bound(s_ml).scaled(share.ml_fraction()),
            sm_se_lower_bound(s_fl).scaled(share.fl_fraction())};
}

LayerSe closed_form_se(SchemeId scheme, const SystemConfig& cfg, const TdmFdmShare& share)
{
    const LayerSinr sinr = closed_form_sinr(scheme, cfg);
    switch (scheme) {
    case SchemeId::SmLdm: return {sm_se_lower_bound(sinr.ml), sm_se_lower_bound(sinr.fl)};
    case SchemeId::SingleTaLdm: return single_ta_se(sinr.ml, sinr.fl);
    case SchemeId::SmxLdm: return smx_se(sinr.ml, sinr.fl);
    case SchemeId::SmTdmFdm: return tdmfdm_se(sinr.ml, sinr.fl, share);
    }
    throw ValidationError("unknown scheme");
}

}  // namespace smldm
