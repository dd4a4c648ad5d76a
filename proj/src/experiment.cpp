#include "relwave/experiment.hpp"

#include <cmath>
#include <string>

#include "relwave/errors.hpp"

namespace relwave {

namespace {

void require_finite(const FourVector& v, const std::string& field) {
    for (std::size_t mu = 0; mu < 4; ++mu)
        if (!std::isfinite(v[mu]))
            throw ConfigError(field + "[" + std::to_string(mu) + "] must be finite");
}

}  // namespace

LifeTime::LifeTime(double c) : c_(c) {
    if (!std::isfinite(c)) throw DomainError("life time must be finite");
    if (c < 0.0) throw DomainError("life time must be non-negative");
}

Experiment validate_experiment(const Experiment& raw) {
    if (!std::isfinite(raw.mass)) throw ConfigError("mass must be finite");
    if (raw.mass <= 0.0) throw ConfigError("mass must be positive");
    if (!std::isfinite(raw.hbar)) throw ConfigError("hbar must be finite");
    if (raw.hbar < 0.0) throw ConfigError("hbar must be non-negative");

    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double s = raw.packet.sigma[mu];
        const std::string field = "packet.sigma[" + std::to_string(mu) + "]";
        if (!std::isfinite(s)) throw ConfigError(field + ": width must be finite");
        if (s <= 0.0) throw ConfigError(field + ": width must be positive");
    }
    require_finite(raw.packet.center, "packet.center");
    require_finite(raw.packet.momentum, "packet.momentum");
    require_finite(raw.displacement, "displacement");

    if (!std::isfinite(raw.packet.amplitude)) throw ConfigError("packet.amplitude must be finite");
    if (raw.packet.amplitude <= 0.0) throw ConfigError("packet.amplitude must be positive");
    return raw;
}

void validate_final_packet(const FinalPacket& fin) {
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double s = fin.sigma[mu];
        if (!std::isfinite(s) || s < 0.0)
            throw ConfigError("final.sigma[" + std::to_string(mu) + "]: width must be non-negative");
    }
    require_finite(fin.momentum, "final.momentum");
}

}  // namespace relwave
