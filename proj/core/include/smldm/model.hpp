#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace smldm {

/// Raised when an input violates a physical or structural constraint.
/// The message names the violated constraint.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation hits a degenerate intermediate value
/// (e.g. a non-positive SINR denominator from inconsistent moments).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SchemeId { SmLdm, SingleTaLdm, SmxLdm, SmTdmFdm };

enum class Layer { Ml, Fl };

std::string_view to_string(SchemeId scheme);
std::string_view to_string(Layer layer);

/// Accepts the CLI spellings (sm-ldm, single-ta, smx-ldm, sm-tdm-fdm) and
/// the enum-style names (SM_LDM, ...).
SchemeId parse_scheme(std::string_view text);
Layer parse_layer(std::string_view text);

inline constexpr std::size_t kMaxTransmitAntennas = 64;

struct SystemConfig {
    std::size_t n_t = 2;
    std::size_t n_rm = 2;
    std::size_t n_rf = 2;
    double injection_level_db = 5.0;
    double snr_ml_db = 0.0;
    double snr_fl_db = 20.0;
    double total_power = 1.0;

    /// Throws ValidationError naming the first violated constraint.
    void validate() const;

    double sigma2_ml() const;
    double sigma2_fl() const;

    std::size_t n_r(Layer layer) const { return layer == Layer::Ml ? n_rm : n_rf; }
    double sigma2(Layer layer) const { return layer == Layer::Ml ? sigma2_ml() : sigma2_fl(); }
};

/// Transmit power of the mobile and fixed layers.
struct PowerSplit {
    double rho_ml = 0.0;
    double rho_fl = 0.0;
};

/// Time (TDM) or bandwidth (FDM) shares of the two services.
struct TdmFdmShare {
    double l_ml = 1.0;
    double l_fl = 1.0;

    void validate() const;
    double ml_fraction() const;
    double fl_fraction() const;
};

/// Solves rho_ml + rho_fl = P and rho_ml / rho_fl = 10^(IL/10).
PowerSplit power_split(double total_power, double injection_level_db);

inline PowerSplit power_split(const SystemConfig& cfg)
{
    return power_split(cfg.total_power, cfg.injection_level_db);
}

/// Per-receive-antenna noise variance for SNR = P / sigma^2.
double noise_variance(double snr_db, double total_power);

/// Transmit antenna count that enters the formulas for a scheme; single-TA
/// LDM always uses one antenna.
std::size_t effective_nt(SchemeId scheme, const SystemConfig& cfg);

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace smldm
