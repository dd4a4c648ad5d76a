#include <doctest.h>

#include <cmath>
#include <random>

#include "relwave/amplitude.hpp"
#include "relwave/errors.hpp"
#include "support.hpp"

using namespace relwave;
using relwave::testing::reference;

TEST_CASE("amplitude at C = 0 is the initial packet overlap") {
    Experiment e = reference();
    e.displacement = {1.5, 0.3, -0.2, 0.4};
    e.packet.momentum = {1.2, 0.1, 0.5, -0.3};
    const AmplitudeResult k = closed_form_amplitude(e, LifeTime{0.0});
    double gauss = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) gauss += e.displacement[mu] * e.displacement[mu] / 2.0;
    const std::complex<double> expect =
        std::exp(-gauss) * std::polar(1.0, minkowski_dot(e.packet.momentum, e.displacement) / e.hbar);
    CHECK(std::abs(k.value - expect) < 1e-15);
    CHECK(k.prefactor_modulus == 1.0);
}

TEST_CASE("modulus factorizes into A, prefactor and envelope") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        Experiment e = testing::random_experiment(rng);
        e.packet.amplitude = 3.0;
        const LifeTime c{0.5 * i};
        e.displacement = testing::near_ray(rng, e, c.value());
        const AmplitudeResult k = closed_form_amplitude(e, c);
        const double expect = 3.0 * k.prefactor_modulus * envelope(e, c);
        CHECK(std::abs(std::abs(k.value) / expect - 1.0) < 1e-12);
        CHECK(k.modulus_sq == doctest::Approx(std::norm(k.value)).epsilon(1e-14));
        CHECK(k.log_modulus == doctest::Approx(std::log(std::abs(k.value))).epsilon(1e-12));
    }
}

TEST_CASE("envelope is one on the classical ray") {
    Experiment e = reference();
    e.packet.momentum = testing::on_shell(1.0, 0.3, -0.4, 0.1);
    for (double c : {0.5, 3.0, 40.0}) {
        e.displacement = e.packet.momentum * (2.0 * c);
        CHECK(envelope(e, LifeTime{c}) == doctest::Approx(1.0).epsilon(1e-15));
        e.displacement.x[2] += 1.0;
        CHECK(envelope(e, LifeTime{c}) < 1.0);
    }
}

TEST_CASE("phase of K is the quantum action modulo 2 pi") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        Experiment e = testing::random_experiment(rng);
        const LifeTime c{0.5 * i};
        e.displacement = testing::near_ray(rng, e, c.value());
        const AmplitudeResult k = closed_form_amplitude(e, c);
        CHECK(k.phase == quantum_action(e, c));
        const double diff = std::remainder(std::arg(k.value) - k.phase / e.hbar, 2.0 * M_PI);
        CHECK(std::abs(diff) < 1e-9);
    }
}

TEST_CASE("action parity in (p, dX)") {
    // Even under (p, dX) -> (-p, -dX); flipping dX alone moves only the
    // p dX / (1 + 4 hbar^2 C^2 / sigma^4) terms.
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i) {
        const Experiment e = testing::random_experiment(rng);
        const double c = 0.3 + i;
        Experiment both = e, dx = e;
        both.packet.momentum = e.packet.momentum * -1.0;
        both.displacement = e.displacement * -1.0;
        dx.displacement = e.displacement * -1.0;
        const double l = quantum_action(e, LifeTime{c});
        CHECK(quantum_action(both, LifeTime{c}) == doctest::Approx(l).epsilon(1e-13));
        double odd = 0.0;
        for (std::size_t mu = 0; mu < 4; ++mu) {
            const double s2 = e.packet.sigma[mu] * e.packet.sigma[mu];
            const double g = 4.0 * e.hbar * e.hbar * c * c / (s2 * s2);
            odd += theta(mu) * e.packet.momentum[mu] * e.displacement[mu] / (1.0 + g);
        }
        CHECK(l - quantum_action(dx, LifeTime{c}) == doctest::Approx(2.0 * odd).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("quantum action reduces to the classical action at hbar = 0") {
    Experiment e = reference();
    e.hbar = 0.0;
    e.packet.momentum = {1.3, 0.2, 0.0, -0.1};
    e.displacement = {5.0, 1.0, 0.5, 0.0};
    for (double c : {0.0, 1.0, 7.5})
        CHECK(quantum_action(e, LifeTime{c}) == doctest::Approx(classical_action(e, LifeTime{c})));
    CHECK(classical_action(e.packet.momentum, e.displacement, e.mass, LifeTime{2.0}) ==
          doctest::Approx(minkowski_dot(e.packet.momentum, e.displacement) -
                          (minkowski_square(e.packet.momentum) - 1.0) * 2.0));
}

TEST_CASE("small-hbar expansion: remainder is fourth order") {
    Experiment e = reference();
    e.displacement = {20.0, 0.5, 0.0, 0.0};
    const LifeTime c{2.0};
    Experiment cl = e;
    cl.hbar = 0.0;
    const double l0 = quantum_action(cl, c);
    double prev = 0.0;
    for (double h : {0.04, 0.02, 0.01}) {
        e.hbar = h;
        const double rem = std::abs(quantum_action(e, c) - l0 - h * h * action_correction(e, c));
        if (prev > 0.0) CHECK(std::log2(prev / rem) > 3.5);
        prev = rem;
    }
}

TEST_CASE("analytic derivatives match central differences") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 10; ++i) {
        const Experiment e = testing::random_experiment(rng);
        const double c = 1.0 + i, h = 1e-5;
        const double fd = (quantum_action(e, LifeTime{c + h}) - quantum_action(e, LifeTime{c - h})) / (2 * h);
        CHECK(action_derivative(e, LifeTime{c}) == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
        const double fd2 =
            (action_correction(e, LifeTime{c + h}) - action_correction(e, LifeTime{c - h})) / (2 * h);
        CHECK(action_correction_derivative(e, LifeTime{c}) == doctest::Approx(fd2).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("amplitude errors") {
    Experiment e = reference();
    e.hbar = 0.0;
    CHECK_THROWS_AS(closed_form_amplitude(e, LifeTime{1.0}), DomainError);
    e.hbar = 1.0;
    e.displacement = {1e4, 0.0, 0.0, 0.0};
    try {
        closed_form_amplitude(e, LifeTime{0.0});
        FAIL("expected AmplitudeRangeError");
    } catch (const AmplitudeRangeError& err) {
        CHECK(err.log_modulus() < -kMaxLogModulus);
    }
}

TEST_CASE("amplitude direction") {
    Experiment e = reference();
    e.packet.momentum = {1.2, 0.3, 0.0, 0.1};
    e.displacement = {24.0, 6.0, 0.5, 2.0};
    const auto k = closed_form_amplitude(e, LifeTime{10.0}).value;
    CHECK(std::abs(amplitude_direction(e, LifeTime{10.0}) - k / std::abs(k)) < 1e-14);
    // Still defined where |K| is out of range.
    e.displacement = {1e4, 0.0, 0.0, 0.0};
    CHECK(std::abs(std::abs(amplitude_direction(e, LifeTime{1.0})) - 1.0) < 1e-14);
}
