#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace relwave {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Rule with n nodes (n >= 1). Rules are computed once per n and cached;
/// the returned reference stays valid for the life of the program.
const GaussLegendreRule& gauss_legendre(std::size_t n);

/// Neumaier-compensated sum in the order given.
double compensated_sum(std::span<const double> terms);

class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (abs_(sum_) >= abs_(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    static double abs_(double v) { return v < 0 ? -v : v; }
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace relwave
