#ifndef MITEST_CALCULUS_HPP
#define MITEST_CALCULUS_HPP

#include "mitest/table.hpp"

#include <functional>
#include <utility>

namespace mitest {

// Derivatives of MI seen as a function of the restricted (vec2) coordinates,
// i.e. with p_IJ eliminated through p_IJ = 1 - sum of the others. All
// operations require a strictly positive table.

/// Gradient in vec2 order; component (i,j) is l_ij - l_IJ with
/// l_ij = ln(p_ij / (p_i* p_*j)). Vanishes at product tables.
RestrictedVector mi_gradient(const ProbTable& p);

/// (IJ-1)x(IJ-1) Hessian of restricted MI, symmetrized as (H + H^T)/2.
Eigen::MatrixXd mi_hessian(const ProbTable& p);

/// Covariance of the restricted empirical vector: diag(q) - q q^T with
/// q = vec2(p). Positive definite for strictly positive tables.
Eigen::MatrixXd multinomial_cov(const ProbTable& p);

using Measure = std::function<double(const ProbTable&)>;

struct FdResult {
    RestrictedVector gradient;
    Eigen::MatrixXd hessian;
};

inline constexpr double kFdGradientStep = 1e-5;
inline constexpr double kFdHessianStep = 1e-4;

/// Central finite differences of an arbitrary measure in restricted
/// coordinates (the last cell absorbs each perturbation, so the simplex
/// constraint is maintained exactly). O(step^2) accurate; the Hessian is
/// symmetrized. Steps shrink automatically near small cells.
FdResult fd_derivatives(const Measure& measure, const ProbTable& p,
                        double gradient_step = kFdGradientStep,
                        double hessian_step = kFdHessianStep);

} // namespace mitest

#endif
