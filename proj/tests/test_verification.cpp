#include <doctest.h>

#include <cmath>
#include <sstream>

#include "relwave/amplitude.hpp"
#include "relwave/verification.hpp"
#include "support.hpp"

using namespace relwave;
using relwave::testing::reference;

TEST_CASE("unwrapped phase follows the quantum action through many turns") {
    // Off shell with small hbar: about 300 turns over C in [0, 20].
    Experiment e = reference();
    e.hbar = 0.0856;
    e.packet.momentum = {1.3, 0.2, 0.0, 0.0};
    e.displacement = {30.0, 2.0, 0.0, 0.0};
    const double l0 = quantum_action(e, LifeTime{0.0});
    for (double c : {1.0, 7.0, 20.0})
        CHECK(std::abs(quantum_action(e, LifeTime{c}) - l0 - e.hbar * unwrapped_phase_change(e, c)) < 1e-10);
    CHECK(unwrapped_phase_change(e, 0.0) == 0.0);
}

TEST_CASE("verification suite passes on the reference experiment") {
    const VerificationReport r = run_verification(reference(), {});
    CHECK(r.all_passed());
    CHECK(r.checks.size() >= 10);
    std::ostringstream os;
    write_report(os, r);
    CHECK(os.str().rfind("PASS closed_form_vs_quadrature", 0) == 0);
}

TEST_CASE("under-resolved quadrature fails verification") {
    const VerificationReport r = run_verification(reference(), {16, 6.0, 32, 100.0});
    CHECK_FALSE(r.all_passed());
}
