#include "smldm/sinr.hpp"

#include <cmath>
#include <string>

namespace smldm {

namespace {

void check_values(const std::vector<double>& values, bool allow_inf)
{
    if (values.empty()) {
        throw ValidationError("SINR vector must not be empty");
    }
    for (double v : values) {
        if (std::isnan(v) || v < 0.0 || (!allow_inf && std::isinf(v))) {
            throw ValidationError("SINR values must be nonnegative and finite");
        }
    }
}

void check_power(const PowerSplit& split)
{
    if (!(split.rho_ml >= 0.0) || !(split.rho_fl >= 0.0) || !std::isfinite(split.rho_ml) ||
        !std::isfinite(split.rho_fl)) {
        throw ValidationError("layer powers must be finite and nonnegative");
    }
}

void check_noise(double sigma2)
{
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        throw ValidationError("noise variance must be finite and nonnegative");
    }
}

void check_shape(const std::vector<double>& v, std::size_t n_t, const char* name)
{
    if (v.size() != n_t) {
        throw ValidationError(std::string(name) + " must have n_t entries");
    }
    for (double x : v) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw ValidationError(std::string(name) + " entries must be nonnegative");
        }
    }
}

void check_shape(const MomentMatrix& m, std::size_t n_t, const char* name)
{
    if (m.size() != n_t) {
        throw ValidationError(std::string(name) + " must be n_t x n_t");
    }
    for (double x : m.data()) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw ValidationError(std::string(name) + " entries must be nonnegative");
        }
    }
}

// Shared assembly of the moment-ratio SINR; `interference_power` is the
// power of the other layer seen through `cross`, or zero.
SinrVector assemble(Layer layer, const MomentEstimates& m, double rho, double interference_power,
                    const MomentMatrix* cross, std::size_t n_t, double sigma2)
{
    const double nt = static_cast<double>(n_t);
    const double per_antenna = rho / nt;
    const double cross_per_antenna = interference_power / nt;

    std::vector<double> out(n_t);
    for (std::size_t n = 0; n < n_t; ++n) {
        const double signal = per_antenna * m.desired_gain[n];
        double isi = 0.0;
        for (std::size_t k = 0; k < n_t; ++k) {
            isi += m.self_isi(n, k);
        }
        double denominator = per_antenna * isi - signal;
        if (cross != nullptr) {
            double cross_sum = 0.0;
            for (std::size_t k = 0; k < n_t; ++k) {
                cross_sum += (*cross)(n, k);
            }
            denominator += cross_per_antenna * cross_sum;
        }
        denominator += sigma2 * m.combiner_norm[n];
        if (signal == 0.0 && denominator >= 0.0) {
            out[n] = 0.0;
            continue;
        }
        if (!(denominator > 0.0)) {
            throw NumericalError("non-positive SINR denominator at antenna " + std::to_string(n) +
                                 " (inconsistent moment estimates)");
        }
        out[n] = signal / denominator;
    }
    return SinrVector(layer, std::move(out));
}

}  // namespace

SinrVector::SinrVector(Layer layer, std::vector<double> values)
    : layer_(layer), values_(std::move(values))
{
    check_values(values_, false);
}

SinrVector::SinrVector(Unchecked, Layer layer, std::vector<double> values)
    : layer_(layer), values_(std::move(values))
{
}

SinrVector SinrVector::uniform(Layer layer, std::size_t n_t, double value)
{
    return SinrVector(layer, std::vector<double>(n_t, value));
}

SinrVector SinrVector::asymptotic(Layer layer, std::vector<double> values)
{
    check_values(values, true);
    return SinrVector(Unchecked{}, layer, std::move(values));
}

void MomentEstimates::validate(std::size_t n_t, bool needs_cross) const
{
    if (n_t < 1 || n_t > kMaxTransmitAntennas) {
        throw ValidationError("n_t must be between 1 and 64");
    }
    check_shape(desired_gain, n_t, "desired_gain");
    check_shape(combiner_norm, n_t, "combiner_norm");
    check_shape(self_isi, n_t, "self_isi");
    if (needs_cross) {
        check_shape(cross_isi, n_t, "cross_isi");
    }
}

MomentEstimates analytic_mrc_moments(std::size_t n_t, std::size_t n_r, bool with_cross)
{
    const double nr = static_cast<double>(n_r);
    MomentEstimates m;
    m.desired_gain.assign(n_t, nr * nr);
    m.combiner_norm.assign(n_t, nr);
    m.self_isi = MomentMatrix(n_t, nr);
    for (std::size_t n = 0; n < n_t; ++n) {
        m.self_isi(n, n) = nr * (nr + 1.0);
    }
    if (with_cross) {
        m.cross_isi = m.self_isi;
    }
    return m;
}

SinrVector sinr_from_moments_ml(const MomentEstimates& m, const PowerSplit& split, std::size_t n_t,
                                double sigma2_ml)
{
    m.validate(n_t, true);
    check_power(split);
    check_noise(sigma2_ml);
    return assemble(Layer::Ml, m, split.rho_ml, split.rho_fl, &m.cross_isi, n_t, sigma2_ml);
}

SinrVector sinr_from_moments_fl(const MomentEstimates& m, const PowerSplit& split, std::size_t n_t,
                                double sigma2_fl)
{
    m.validate(n_t, false);
    check_power(split);
    check_noise(sigma2_fl);
    return assemble(Layer::Fl, m, split.rho_fl, 0.0, nullptr, n_t, sigma2_fl);
}

SinrVector mrc_sinr_ml(const SystemConfig& cfg, const PowerSplit& split)
{
    cfg.validate();
    check_power(split);
    const double nt = static_cast<double>(cfg.n_t);
    const double nr = static_cast<double>(cfg.n_rm);
    const double value = split.rho_ml * nr /
                         (split.rho_ml * nt + split.rho_fl * (nt + nr) + nt * cfg.sigma2_ml());
    return SinrVector::uniform(Layer::Ml, cfg.n_t, value);
}

SinrVector mrc_sinr_fl(const SystemConfig& cfg, const PowerSplit& split)
{
    cfg.validate();
    check_power(split);
    const double nt = static_cast<double>(cfg.n_t);
    const double nr = static_cast<double>(cfg.n_rf);
    const double denominator = split.rho_fl * nt + nt * cfg.sigma2_fl();
    const double value = split.rho_fl == 0.0 ? 0.0 : split.rho_fl * nr / denominator;
    return SinrVector::uniform(Layer::Fl, cfg.n_t, value);
}

LayerSinr single_ta_sinr(const SystemConfig& cfg, const PowerSplit& split)
{
    cfg.validate();
    check_power(split);
    const double nrm = static_cast<double>(cfg.n_rm);
    const double nrf = static_cast<double>(cfg.n_rf);
    const double ml = split.rho_ml * nrm / (split.rho_ml + split.rho_fl * (1.0 + nrm) + cfg.sigma2_ml());
    const double fl = split.rho_fl == 0.0 ? 0.0 : split.rho_fl * nrf / (split.rho_fl + cfg.sigma2_fl());
    return {SinrVector::uniform(Layer::Ml, 1, ml), SinrVector::uniform(Layer::Fl, 1, fl)};
}

LayerSinr smx_sinr(const SystemConfig& cfg, const PowerSplit& split)
{
    cfg.validate();
    check_power(split);
    const double nt = static_cast<double>(cfg.n_t);
    const double nrm = static_cast<double>(cfg.n_rm);
    const double nrf = static_cast<double>(cfg.n_rf);
    const double ml = split.rho_ml * nrm /
                      (split.rho_ml * nt + split.rho_fl * (nt + nrm) + nt * nt * cfg.sigma2_ml());
    const double fl =
        split.rho_fl == 0.0 ? 0.0 : split.rho_fl * nrf / (split.rho_fl * nt + nt * nt * cfg.sigma2_fl());
    return {SinrVector::uniform(Layer::Ml, cfg.n_t, ml), SinrVector::uniform(Layer::Fl, cfg.n_t, fl)};
}

LayerSinr tdmfdm_sinr(const SystemConfig& cfg)
{
    cfg.validate();
    const double p = cfg.total_power;
    const double nt = static_cast<double>(cfg.n_t);
    const double ml = p * static_cast<double>(cfg.n_rm) / (nt * (p + cfg.sigma2_ml()));
    const double fl = p * static_cast<double>(cfg.n_rf) / (nt * (p + cfg.sigma2_fl()));
    return {SinrVector::uniform(Layer::Ml, cfg.n_t, ml), SinrVector::uniform(Layer::Fl, cfg.n_t, fl)};
}

LayerSinr closed_form_sinr(SchemeId scheme, const SystemConfig& cfg)
{
    switch (scheme) {
    case SchemeId::SmLdm: {
        const PowerSplit split = power_split(cfg);
        return {mrc_sinr_ml(cfg, split), mrc_sinr_fl(cfg, split)};
    }
    case SchemeId::SingleTaLdm: return single_ta_sinr(cfg, power_split(cfg));
    case SchemeId::SmxLdm: return smx_sinr(cfg, power_split(cfg));
    case SchemeId::SmTdmFdm: return tdmfdm_sinr(cfg);
    }
    throw ValidationError("unknown scheme");
}

}  // namespace smldm
