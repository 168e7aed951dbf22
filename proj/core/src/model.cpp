#include "smldm/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace smldm {

namespace {

std::string normalize(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '_') {
            c = '-';
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

void require_finite(double value, const char* name)
{
    if (!std::isfinite(value)) {
        throw ValidationError(std::string(name) + " must be finite");
    }
}

}  // namespace

std::string_view to_string(SchemeId scheme)
{
    switch (scheme) {
    case SchemeId::SmLdm: return "sm-ldm";
    case SchemeId::SingleTaLdm: return "single-ta";
    case SchemeId::SmxLdm: return "smx-ldm";
    case SchemeId::SmTdmFdm: return "sm-tdm-fdm";
    }
    return "unknown";
}

std::string_view to_string(Layer layer)
{
    return layer == Layer::Ml ? "ML" : "FL";
}

SchemeId parse_scheme(std::string_view text)
{
    const std::string key = normalize(text);
    if (key == "sm-ldm") return SchemeId::SmLdm;
    if (key == "single-ta" || key == "single-ta-ldm") return SchemeId::SingleTaLdm;
    if (key == "smx-ldm" || key == "smx") return SchemeId::SmxLdm;
    if (key == "sm-tdm-fdm" || key == "tdm-fdm") return SchemeId::SmTdmFdm;
    throw ValidationError("unknown scheme '" + std::string(text) +
                          "' (expected sm-ldm, single-ta, smx-ldm or sm-tdm-fdm)");
}

Layer parse_layer(std::string_view text)
{
    const std::string key = normalize(text);
    if (key == "ml") return Layer::Ml;
    if (key == "fl") return Layer::Fl;
    throw ValidationError("unknown layer '" + std::string(text) + "' (expected ML or FL)");
}

void SystemConfig::validate() const
{
    if (n_t < 1) throw ValidationError("n_t must be at least 1");
    if (n_t > kMaxTransmitAntennas) throw ValidationError("n_t must not exceed 64");
    if (n_rm < 1) throw ValidationError("n_rm must be at least 1");
    if (n_rf < 1) throw ValidationError("n_rf must be at least 1");
    require_finite(injection_level_db, "injection_level_db");
    require_finite(snr_ml_db, "snr_ml_db");
    require_finite(snr_fl_db, "snr_fl_db");
    require_finite(total_power, "total_power");
    if (!(injection_level_db > 0.0)) throw ValidationError("IL must exceed 0 dB");
    if (!(total_power > 0.0)) throw ValidationError("total_power must be positive");
}

double SystemConfig::sigma2_ml() const { return noise_variance(snr_ml_db, total_power); }
double SystemConfig::sigma2_fl() const { return noise_variance(snr_fl_db, total_power); }

void TdmFdmShare::validate() const
{
    if (!(l_ml >= 0.0) || !(l_fl >= 0.0) || !std::isfinite(l_ml) || !std::isfinite(l_fl)) {
        throw ValidationError("TDM/FDM shares must be finite and nonnegative");
    }
    if (!(l_ml + l_fl > 0.0)) {
        throw ValidationError("TDM/FDM shares must not both be zero");
    }
}

double TdmFdmShare::ml_fraction() const
{
    validate();
    return l_ml / (l_ml + l_fl);
}

double TdmFdmShare::fl_fraction() const
{
    validate();
    return l_fl / (l_ml + l_fl);
}

PowerSplit power_split(double total_power, double injection_level_db)
{
    if (!(total_power > 0.0) || !std::isfinite(total_power)) {
        throw ValidationError("total_power must be positive");
    }
    if (std::isnan(injection_level_db) || !(injection_level_db > 0.0)) {
        throw ValidationError("IL must exceed 0 dB");
    }
    if (std::isinf(injection_level_db)) {
        return {total_power, 0.0};
    }
    // rho_fl = P / (1 + r) is evaluated directly so that large IL keeps full
    // relative precision in the small fixed-layer power.
    const double ratio = db_to_linear(injection_level_db);
    const double rho_fl = total_power / (1.0 + ratio);
    const double rho_ml = total_power * (ratio / (1.0 + ratio));
    return {rho_ml, rho_fl};
}

double noise_variance(double snr_db, double total_power)
{
    if (!(total_power > 0.0)) {
        throw ValidationError("total_power must be positive");
    }
    return total_power / db_to_linear(snr_db);
}

std::size_t effective_nt(SchemeId scheme, const SystemConfig& cfg)
{
    return scheme == SchemeId::SingleTaLdm ? 1 : cfg.n_t;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace smldm
