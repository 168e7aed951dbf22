#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "smldm/model.hpp"
#include "smldm/rng.hpp"
#include "smldm/sinr.hpp"

namespace smldm {

/// Closed-form MRC SINR implementations under test. Self-test swaps these
/// for deliberately broken variants to prove the checks are sensitive.
struct ClosedFormHooks {
    using Fn = std::function<SinrVector(const SystemConfig&, const PowerSplit&)>;
    Fn mrc_ml = mrc_sinr_ml;
    Fn mrc_fl = mrc_sinr_fl;

    /// Known mutations: "ml-denominator-sign", "fl-noise-scale".
    static ClosedFormHooks mutated(std::string_view mutation);
};

struct SelfTestOptions {
    bool quick = false;
    RngSpec rng{20240601, 0};
    ClosedFormHooks hooks;
};

struct SelfTestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<SelfTestCheck> run_selftest(const SelfTestOptions& options);

}  // namespace smldm
