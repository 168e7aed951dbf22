#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smldm/capacity.hpp"
#include "smldm/config.hpp"
#include "smldm/model.hpp"
#include "smldm/montecarlo.hpp"
#include "smldm/parallel.hpp"
#include "smldm/rng.hpp"

namespace smldm {

enum class RunMode { Bound, Simulate, Both };

RunMode parse_run_mode(std::string_view text);
std::string_view to_string(RunMode mode);

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

/// One swept parameter (the x axis) plus an optional series parameter that
/// produces a separate curve per value (e.g. IL in {5, 20} dB).
struct SweepSpec {
    std::vector<SchemeId> schemes;
    std::vector<Layer> layers{Layer::Ml, Layer::Fl};
    SweepAxis sweep;
    std::optional<SweepAxis> series;
    SystemConfig fixed;
    TdmFdmShare share;
    RunMode mode = RunMode::Bound;
    SinrSource sinr_source = SinrSource::ClosedForm;
    SimulationBudget budget;
    RngSpec rng;

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

struct ResultRow {
    SchemeId scheme = SchemeId::SmLdm;
    std::string layer;  ///< "ML", "FL", or "ML+FL" for sum rows
    std::string param_name;
    double param_value = 0.0;
    std::string mode;  ///< "bound" or "simulate"
    SeBreakdown se;
    std::optional<double> gap;  ///< simulated minus bound total SE
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::size_t clamp_events = 0;
    std::size_t zero_sinr_events = 0;

    /// First row matching all fields, or nullptr.
    const ResultRow* find(SchemeId scheme, std::string_view layer, std::string_view param_name,
                          double param_value, std::string_view mode) const;
};

/// Closed-form bound rows for one operating point, with clamp accounting.
LayerSe evaluate_bound(SchemeId scheme, const SystemConfig& cfg, const TdmFdmShare& share,
                       std::size_t* clamp_events = nullptr, std::size_t* zero_sinr_events = nullptr);

/// Rows ordered by (series value, swept value, scheme, layer, mode).
/// Deterministic under a fixed RngSpec for any worker count.
ResultTable run_sweep(const SweepSpec& spec, Parallelism par = {});

/// SM-LDM across injection levels against SM-TDM/FDM across resource
/// shares, one curve family per transmit-antenna count.
struct CompareSpec {
    SystemConfig base;  ///< n_rm, n_rf, SNRs; n_t and IL are overridden
    std::vector<std::size_t> nt_values{1, 2, 4};
    std::vector<double> il_values_db;
    std::vector<double> share_ml_values;  ///< l_ml / (l_ml + l_fl) in [0, 1]

    void validate() const;
    static CompareSpec defaults();
};

ResultTable compare_ldm_vs_tdmfdm(const CompareSpec& spec, Parallelism par = {});

/// Builders from key-value parameters (config files, presets, CLI flags).
SweepSpec sweep_spec_from(const ParamMap& params);
CompareSpec compare_spec_from(const ParamMap& params);

}  // namespace smldm
