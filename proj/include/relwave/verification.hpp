#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "relwave/evolution.hpp"
#include "relwave/experiment.hpp"

namespace relwave {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;  ///< measured discrepancy
    double limit = 0.0;  ///< pass threshold
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

/// Change of the continuous phase of the closed-form amplitude between C = 0
/// and C = c_end, accumulated from wrapped arg() increments. Steps are halved
/// until an increment is below pi/4 and agrees with its two half-steps, and
/// grow only while the last observed phase rate predicts less than pi/8.
double unwrapped_phase_change(const Experiment& exp, double c_end);

/// Oracle suite for one experiment: closed form vs momentum quadrature,
/// exact evolution vs quadrature, node-doubling convergence, phase identity,
/// modulus/envelope factorization, norm conservation, packet-centre motion,
/// plane-wave boundary action and the quasi-classical root identity.
VerificationReport run_verification(const Experiment& exp, const QuadratureSpec& quad);

void write_report(std::ostream& os, const VerificationReport& report);

}  // namespace relwave
