#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "relwave/amplitude.hpp"
#include "relwave/detection.hpp"
#include "relwave/errors.hpp"
#include "support.hpp"

using namespace relwave;
using relwave::testing::reference;

namespace {
Screen small_screen() {
    Screen s;
    s.n_theta = 2;
    s.n_phi = 2;
    s.n_t = 2;
    return s;
}
}  // namespace

TEST_CASE("screen validation and refinement") {
    CHECK_NOTHROW(validate_screen({}));
    Screen s;
    s.t_max = s.radius;
    CHECK_THROWS_AS(validate_screen(s), ConfigError);
    s = {};
    s.n_phi = 1;
    CHECK_THROWS_AS(validate_screen(s), ConfigError);
    const Screen r = refined(Screen{}, 2);
    CHECK(r.n_theta == 8);
    CHECK(r.n_t == 256);
    CHECK(flags_to_string(kSpacelike | kRefined) == "spacelike|refined");
    CHECK(flags_to_string(0).empty());
}

TEST_CASE("screen displacement") {
    const FourVector d = screen_displacement(20.0, {M_PI / 2, 0.0, 30.0});
    CHECK(d[0] == 30.0);
    CHECK(d[1] == doctest::Approx(20.0));
    CHECK(d[3] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("2x2x2 scan has 8 finite rows") {
    const DetectionTable t = screen_scan(reference(), small_screen());
    REQUIRE(t.rows.size() == 8);
    for (const auto& r : t.rows) {
        CHECK(std::isfinite(r.k_abs2));
        CHECK(std::isfinite(r.lambda));
        CHECK(std::isfinite(r.c_stationary));
        CHECK(r.displacement.is_finite());
    }
    std::ostringstream os;
    write_detection_csv(os, t);
    CHECK(os.str().rfind("theta,phi,dx0,dx1,dx2,dx3,c_stationary,branch,lambda,k_re,k_im,k_abs2,flags\n", 0) == 0);
}

TEST_CASE("scans are deterministic") {
    Experiment e = reference();
    e.packet.momentum = {1.25, 0.75, 0.0, 0.0};
    Screen s;
    s.n_t = 8;
    std::ostringstream a, b;
    write_detection_csv(a, screen_scan(e, s));
    write_detection_csv(b, screen_scan(e, s));
    CHECK(a.str() == b.str());
}

TEST_CASE("phi -> phi + pi symmetry for momentum along z") {
    Experiment e = reference();
    e.packet.momentum = testing::on_shell(1.0, 0.0, 0.0, 0.75);
    Screen s;
    s.n_theta = 3;
    s.n_phi = 4;
    s.n_t = 6;
    const DetectionTable t = screen_scan(e, s);
    const int nt = s.n_t, np = s.n_phi;
    for (int i = 0; i < s.n_theta; ++i)
        for (int j = 0; j < np / 2; ++j)
            for (int k = 0; k < nt; ++k) {
                const auto& a = t.rows[(i * np + j) * nt + k];
                const auto& b = t.rows[(i * np + j + np / 2) * nt + k];
                CHECK(b.phi == doctest::Approx(a.phi + M_PI));
                CHECK(b.k_abs2 == doctest::Approx(a.k_abs2).epsilon(1e-9));
            }
}

TEST_CASE("detector row against an independent recomputation") {
    Experiment tmpl = reference();
    tmpl.packet.momentum = {1.25, 0.75, 0.0, 0.0};
    const ScreenPoint pt{M_PI / 2, 0.0, 20.0 * 1.25 / 0.75};
    const DetectorAmplitude d = amplitude_at_detector(tmpl, 20.0, pt);
    REQUIRE(d.amplitude);
    REQUIRE(d.lifetime.solution);
    Experiment e = tmpl;
    e.displacement = screen_displacement(20.0, pt);
    const auto s = stationary_lifetime_exact(e, select_branch(quasiclassical_lifetimes(e), e).c);
    const auto k = closed_form_amplitude(e, s.c);
    CHECK(d.lifetime.solution->c.value() == doctest::Approx(s.c.value()).epsilon(1e-12));
    CHECK(d.amplitude->modulus_sq == doctest::Approx(k.modulus_sq).epsilon(1e-10));
    CHECK(d.lambda == doctest::Approx(k.phase).epsilon(1e-12));
}

TEST_CASE("spacelike screen point is flagged") {
    const DetectorAmplitude d = amplitude_at_detector(reference(), 20.0, {1.0, 0.5, 15.0});
    CHECK((d.lifetime.flags & kSpacelike) != 0);
    CHECK((d.lifetime.flags & kLowConfidence) != 0);
}

TEST_CASE("hbar = 0 has no amplitude on the screen") {
    Experiment e = reference();
    e.hbar = 0.0;
    CHECK_THROWS_AS(screen_integral(e, {}), ConfigError);
}

TEST_CASE("partial time integrals are non-decreasing") {
    Screen s;
    s.n_t = 16;
    const std::vector<double> ts{10.0, 20.0, 25.0, 30.0, 50.0, 100.0, 1e3, 1e4, INFINITY};
    const auto v = partial_time_integrals(reference(), s, ts);
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1]);
    CHECK(v.back() == screen_integral(reference(), s));
}

TEST_CASE("normalization") {
    Screen s;
    s.n_t = 32;
    const Normalization n = normalization_constant(reference(), s);
    CHECK(n.amplitude > 0.0);
    CHECK(n.relative_error < 1e-4);
    Experiment scaled = reference();
    scaled.packet.amplitude = n.amplitude;
    const double again = screen_integral(scaled, refined(s, 2));
    CHECK(std::abs(again - 1.0) <= std::max(n.relative_error, 1e-12));

    Screen coarse = s;
    coarse.n_theta = coarse.n_phi = 2;
    coarse.n_t = 4;
    try {
        normalization_constant(reference(), coarse);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& err) {
        CHECK(err.coarse() != err.fine());
    }
}

TEST_CASE("non-relativistic limit") {
    Experiment e = reference();
    e.packet.momentum = testing::on_shell(1.0, 1e-3, 0.0, 0.0);
    const std::vector<double> ts{1e3, 1e4};
    const auto rows = nonrel_limit_report(e, ts);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) CHECK(r.relative_gap < 1e-2);
    CHECK(rows[1].phase_gap < 1e-3);
    CHECK(rows[1].newtonian == 5e3);
    e.packet.momentum = testing::on_shell(1.0, 0.5, 0.0, 0.0);
    CHECK_THROWS_AS(nonrel_limit_report(e, ts), DomainError);
}

TEST_CASE("prefactor decay") {
    CHECK(prefactor_decay_slope(reference(), 1e2, 1e4) == doctest::Approx(-2.0).epsilon(0.01));
    Experiment single = reference();
    single.packet.sigma = {1.0, 1e6, 1e6, 1e6};
    CHECK(prefactor_decay_slope(single, 1e2, 1e4) == doctest::Approx(-0.5).epsilon(0.01));
    CHECK_THROWS_AS(prefactor_decay_slope(reference(), 1e-2, 1.0), DomainError);
    CHECK_THROWS_AS(prefactor_decay_slope(reference(), 1e2, 1e3), DomainError);
}
