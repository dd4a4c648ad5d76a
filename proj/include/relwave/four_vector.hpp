#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace relwave {

/// Metric signature (+,-,-,-); index 0 is time.
struct MetricSignature {
    static constexpr std::array<double, 4> theta{1.0, -1.0, -1.0, -1.0};
};

inline constexpr double theta(std::size_t mu) { return MetricSignature::theta[mu]; }

/// Point or covector in Minkowski space, natural units (c = 1).
struct FourVector {
    std::array<double, 4> x{};

    constexpr FourVector() = default;
    constexpr FourVector(double x0, double x1, double x2, double x3) : x{x0, x1, x2, x3} {}

    constexpr double& operator[](std::size_t mu) { return x[mu]; }
    constexpr double operator[](std::size_t mu) const { return x[mu]; }

    bool is_finite() const {
        for (double v : x)
            if (!std::isfinite(v)) return false;
        return true;
    }

    constexpr FourVector& operator+=(const FourVector& o) {
        for (std::size_t mu = 0; mu < 4; ++mu) x[mu] += o.x[mu];
        return *this;
    }
    constexpr FourVector& operator-=(const FourVector& o) {
        for (std::size_t mu = 0; mu < 4; ++mu) x[mu] -= o.x[mu];
        return *this;
    }
    constexpr FourVector& operator*=(double s) {
        for (double& v : x) v *= s;
        return *this;
    }

    friend constexpr FourVector operator+(FourVector a, const FourVector& b) { return a += b; }
    friend constexpr FourVector operator-(FourVector a, const FourVector& b) { return a -= b; }
    friend constexpr FourVector operator*(double s, FourVector a) { return a *= s; }
    friend constexpr FourVector operator*(FourVector a, double s) { return a *= s; }
    friend constexpr FourVector operator-(FourVector a) { return a *= -1.0; }
    friend constexpr bool operator==(const FourVector&, const FourVector&) = default;
};

/// Sum over mu of theta_mu * a_mu * b_mu.
inline double minkowski_dot(const FourVector& a, const FourVector& b) {
    double s = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) s += theta(mu) * a[mu] * b[mu];
    return s;
}

inline double minkowski_square(const FourVector& v) { return minkowski_dot(v, v); }

inline std::ostream& operator<<(std::ostream& os, const FourVector& v) {
    return os << '(' << v[0] << ", " << v[1] << ", " << v[2] << ", " << v[3] << ')';
}

}  // namespace relwave
