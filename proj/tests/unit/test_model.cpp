#include <cmath>
#include <limits>

#include "doctest.h"
#include "smldm/model.hpp"

using namespace smldm;

TEST_CASE("power_split solves the sum and ratio constraints")
{
    // Frozen from tests/oracles/oracle_values.py (2x2 linear solve, 50 digits).
    const PowerSplit a = power_split(1.0, 5.0);
    CHECK(a.rho_ml == doctest::Approx(0.75974692664795785).epsilon(1e-14));
    CHECK(a.rho_fl == doctest::Approx(0.24025307335204215).epsilon(1e-14));

    const PowerSplit b = power_split(2.0, 20.0);
    CHECK(b.rho_ml == doctest::Approx(1.9801980198019802).epsilon(1e-14));
    CHECK(b.rho_fl == doctest::Approx(0.019801980198019802).epsilon(1e-14));
}

TEST_CASE("power_split tends to all power on ML as IL grows")
{
    const PowerSplit big = power_split(1.0, 200.0);
    CHECK(big.rho_ml == doctest::Approx(1.0));
    CHECK(big.rho_fl < 1e-19);
    const PowerSplit inf = power_split(1.0, std::numeric_limits<double>::infinity());
    CHECK(inf.rho_ml == 1.0);
    CHECK(inf.rho_fl == 0.0);
}

TEST_CASE("power_split invariants hold over a parameter grid")
{
    for (double p : {1e-3, 0.7, 1.0, 5.0, 1e3}) {
        for (double il = 0.05; il < 60.0; il *= 1.7) {
            const PowerSplit s = power_split(p, il);
            CHECK((s.rho_ml + s.rho_fl) / p == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(s.rho_ml / s.rho_fl / std::pow(10.0, il / 10.0) == doctest::Approx(1.0).epsilon(1e-12));
            // homogeneity
            const PowerSplit scaled = power_split(3.5 * p, il);
            CHECK(scaled.rho_ml == doctest::Approx(3.5 * s.rho_ml).epsilon(1e-12));
            CHECK(scaled.rho_fl == doctest::Approx(3.5 * s.rho_fl).epsilon(1e-12));
        }
    }
}

TEST_CASE("power_split rejects invalid inputs with named constraints")
{
    CHECK_THROWS_WITH_AS(power_split(1.0, 0.0), "IL must exceed 0 dB", ValidationError);
    CHECK_THROWS_WITH_AS(power_split(1.0, -3.0), "IL must exceed 0 dB", ValidationError);
    CHECK_THROWS_WITH_AS(power_split(0.0, 5.0), "total_power must be positive", ValidationError);
    CHECK_THROWS_AS(power_split(-1.0, 5.0), ValidationError);
    CHECK_THROWS_AS(power_split(1.0, std::nan("")), ValidationError);
}

TEST_CASE("noise_variance is total power over linear SNR")
{
    CHECK(noise_variance(0.0, 1.0) == 1.0);
    CHECK(noise_variance(20.0, 1.0) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(noise_variance(10.0, 2.0) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK_THROWS_AS(noise_variance(0.0, 0.0), ValidationError);
}

TEST_CASE("SystemConfig validation")
{
    SystemConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    SUBCASE("IL zero") { cfg.injection_level_db = 0.0; CHECK_THROWS_WITH(cfg.validate(), "IL must exceed 0 dB"); }
    SUBCASE("zero antennas") { cfg.n_rm = 0; CHECK_THROWS_WITH(cfg.validate(), "n_rm must be at least 1"); }
    SUBCASE("too many TAs") { cfg.n_t = 65; CHECK_THROWS_AS(cfg.validate(), ValidationError); }
    SUBCASE("power") { cfg.total_power = -1.0; CHECK_THROWS_WITH(cfg.validate(), "total_power must be positive"); }
    SUBCASE("non-finite snr") { cfg.snr_ml_db = std::numeric_limits<double>::infinity(); CHECK_THROWS_AS(cfg.validate(), ValidationError); }
}

TEST_CASE("independent per-layer SNR sweeps do not enforce noise ordering")
{
    SystemConfig cfg;
    cfg.snr_ml_db = 30.0;
    cfg.snr_fl_db = 0.0;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.sigma2_ml() < cfg.sigma2_fl());
}

TEST_CASE("single-TA forces one effective transmit antenna")
{
    SystemConfig cfg;
    cfg.n_t = 4;
    CHECK(effective_nt(SchemeId::SingleTaLdm, cfg) == 1);
    CHECK(effective_nt(SchemeId::SmLdm, cfg) == 4);
    CHECK(effective_nt(SchemeId::SmxLdm, cfg) == 4);
}

TEST_CASE("TdmFdmShare fractions")
{
    CHECK(TdmFdmShare{1, 1}.ml_fraction() == 0.5);
    CHECK(TdmFdmShare{1, 0}.fl_fraction() == 0.0);
    CHECK(TdmFdmShare{3, 1}.ml_fraction() == 0.75);
    CHECK_THROWS_AS(TdmFdmShare({0, 0}).validate(), ValidationError);
    CHECK_THROWS_AS(TdmFdmShare({-1, 2}).validate(), ValidationError);
}

TEST_CASE("scheme and layer names round-trip")
{
    for (SchemeId s : {SchemeId::SmLdm, SchemeId::SingleTaLdm, SchemeId::SmxLdm, SchemeId::SmTdmFdm}) {
        CHECK(parse_scheme(to_string(s)) == s);
    }
    CHECK(parse_scheme("SM_LDM") == SchemeId::SmLdm);
    CHECK(parse_scheme("SM_TDM_FDM") == SchemeId::SmTdmFdm);
    CHECK_THROWS_AS(parse_scheme("noma"), ValidationError);
    CHECK(parse_layer("ml") == Layer::Ml);
    CHECK(parse_layer("FL") == Layer::Fl);
}
