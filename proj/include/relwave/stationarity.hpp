#pragma once

#include <string_view>

#include "relwave/experiment.hpp"

namespace relwave {

enum class Branch { plus, minus, exact };

std::string_view to_string(Branch b);

struct StationarySolution {
    LifeTime c{0.0};
    Branch branch = Branch::plus;
    double discriminant = 0.0;  ///< D of the quasi-classical quadratic
    double residual = 0.0;      ///< dLambda/dC at c
    int iterations = 0;
    bool off_shell = false;
    bool low_confidence = false;
};

struct SolverOptions {
    double tolerance = 1e-10;            ///< exact solver: |dLambda/dC| <= tolerance * max(1, m^2)
    double far_field_threshold = 100.0;  ///< far_field_ratio above which the plus root is taken
    double refine_threshold = 1e-3;      ///< scans refine when hbar C / sigma^2 exceeds this on any axis
    int max_iterations = 200;
    int bracket_samples = 32;            ///< derivative samples per bracket expansion step
};

void validate_solver_options(const SolverOptions& o);

/// sqrt(sum theta dX^2) / 2m. Throws DomainError for null or spacelike dX.
LifeTime classical_lifetime(const FourVector& displacement, double mass);

/// sum theta p^2 - m^2.
double mass_shell_residual(const FourVector& momentum, double mass);

bool is_on_shell(const FourVector& momentum, double mass);

/// dX / 2C. Throws DomainError for C = 0.
FourVector classical_momentum(const FourVector& displacement, LifeTime c);

struct QuasiclassicalRoots {
    double plus = 0.0;
    double minus = 0.0;
    double discriminant = 0.0;
    bool off_shell = false;
};

/// Stationary points of the hbar^2 action correction in C:
///   C = (8 b +- sqrt(D)) / 24 a,  D = 64 b^2 + 48 a c,
///   a = sum theta p^2/sigma^4, b = sum theta p dX/sigma^4,
///   c = sum theta (1/sigma^2 - dX^2/sigma^4).
/// Throws NoRealRootError (D < 0) or DegenerateQuadraticError (a ~ 0).
QuasiclassicalRoots quasiclassical_lifetimes(const Experiment& exp);

struct FarFieldRatio {
    double value = 0.0;
    bool balanced = false;  ///< sum theta / sigma^2 == 0; value is +inf
};

/// sum theta / sigma^2 vanishes to rounding (e.g. sigma = (1, sqrt3, sqrt3, sqrt3)).
bool widths_balanced(const Widths& sigma);

/// (sum theta dX^2 / sigma^4) / |sum theta / sigma^2|.
FarFieldRatio far_field_ratio(const Experiment& exp);

/// Far field and timelike: plus root. Timelike otherwise: root closest to the
/// classical life time. Spacelike: plus root, low confidence. Negative roots
/// are never returned; NoAdmissibleRootError when both are negative.
StationarySolution select_branch(const QuasiclassicalRoots& roots, const Experiment& exp,
                                 const SolverOptions& opts = {});

/// Root of dLambda/dC nearest to `initial`. The bracket around the initial
/// guess grows by x2 up to 64x; the root is then polished by a
/// bisection/false-position hybrid to the last representable C.
/// Throws NoStationaryPointError carrying every derivative sample taken.
StationarySolution stationary_lifetime_exact(const Experiment& exp, LifeTime initial,
                                             const SolverOptions& opts = {});

}  // namespace relwave
