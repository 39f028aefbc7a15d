#pragma once

#include <string>

#include "core/oracle.hpp"

namespace twolevel {

struct ValidationOptions {
    OdeConfig ode;
    double bar = 1e-6;       // acceptance bar on max |numeric - closed form|
    double norm_bar = 1e-9;  // acceptance bar on norm drift
    // Bichromatic only: report the closed-form-P2 comparison without letting
    // it fail the suite (outside its validity regime the mismatch is physics,
    // not a bug).
    bool informational = false;
};

struct ValidationOutcome {
    bool passed = false;
    std::string report_json;
};

// suite: "rwa" | "bichromatic" | "damped"; anything else -> UsageError.
//
// rwa        - monochromatic traces vs the closed-form p1 over a grid of
//              Rabi frequencies and detuning ratios.
// bichromatic- traces vs the exact solution of the bichromatic model,
//              sin^2((2 O/dw) sin(dw t)); checks the population zeros at
//              t = k pi/dw; reports the deviation from the closed-form p2.
// damped     - free decay vs exp(-gamma t) (spot-checked at 1 and 2
//              lifetimes) and a driven-damped bounds check.
ValidationOutcome run_validation_suite(const std::string& suite,
                                       const ValidationOptions& opt = {});

} // namespace twolevel
