#pragma once

#include <array>

#include "relwave/four_vector.hpp"

namespace relwave {

using Widths = std::array<double, 4>;

/// Source state: Gaussian in Minkowski space centred at `center` with
/// per-axis coherence lengths `sigma` and central momentum `momentum`.
/// `amplitude` is the overall constant A multiplying the transition
/// amplitude; it is fixed by screen normalization.
struct GaussianPacket {
    FourVector center{};
    Widths sigma{1.0, 1.0, 1.0, 1.0};
    FourVector momentum{};
    double amplitude = 1.0;

    friend bool operator==(const GaussianPacket&, const GaussianPacket&) = default;
};

/// Detector state. All-zero widths is the sharp-detector limit.
struct FinalPacket {
    Widths sigma{0.0, 0.0, 0.0, 0.0};
    FourVector momentum{};

    static FinalPacket sharp() { return {}; }
    friend bool operator==(const FinalPacket&, const FinalPacket&) = default;
};

/// Full argument set of the transition amplitude. `displacement` is the
/// detector position measured from the packet centre.
///
/// hbar may be zero: action-level quantities (Lambda, Lambda_0, dLambda/dC,
/// stationary life times) are defined there, the amplitude is not.
struct Experiment {
    GaussianPacket packet{};
    double mass = 1.0;
    double hbar = 1.0;
    FourVector displacement{};

    friend bool operator==(const Experiment&, const Experiment&) = default;
};

/// Inner-time span C >= 0.
class LifeTime {
public:
    explicit LifeTime(double c);
    double value() const noexcept { return c_; }
    friend bool operator==(const LifeTime&, const LifeTime&) = default;

private:
    double c_;
};

/// Checks every invariant of Experiment and returns the validated copy.
/// Throws ConfigError naming the first offending field.
Experiment validate_experiment(const Experiment& raw);

void validate_final_packet(const FinalPacket& fin);

}  // namespace relwave
