#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ergopt/minmean.hpp"
#include "ergopt/orbit.hpp"
#include "ergopt/system.hpp"

namespace ergopt {

/// U_eps[f](omega) = -sum_{k>=0} (1-eps)^k f(sigma^k omega), with the
/// truncation certificate. Closed-form modes carry a zero tail bound: the
/// preperiod is summed directly and the periodic tail is a finite geometric
/// block divided by 1 - (1-eps)^q.
struct DiscountedEvaluation {
    enum class Method { Direct, ClosedFormPeriodic, ClosedFormBlocks };
    double epsilon = 0.0;
    double value = 0.0;
    std::int64_t horizon = 0;  // number of summed terms in direct mode
    double tail_bound = 0.0;
    Method method = Method::ClosedFormPeriodic;
};

const char* method_name(DiscountedEvaluation::Method m);

/// Exact-up-to-rounding evaluation on an eventually periodic point.
DiscountedEvaluation discounted_value(const SymbolicPoint& point, const ObservableExpr& f,
                                      double eps);

/// Independent oracle: sums K = ceil(ln(tol*eps/sup|f|)/ln(1-eps)) terms and
/// certifies |value - series| <= sup|f| (1-eps)^K / eps.
DiscountedEvaluation discounted_value_direct(const SymbolicPoint& point, const ObservableExpr& f,
                                             double eps, double tol);

/// |f(omega) - (1-eps) U_eps(sigma omega) + U_eps(omega)|; zero in exact
/// arithmetic, bounded by 2 tail_bound + rounding in direct mode.
double dce_residual(const SymbolicPoint& point, const ObservableExpr& f, double eps,
                    DiscountedEvaluation::Method method, double tol = 1e-10);

/// Integral of g against mu_{eps,omega} = sum_k eps (1-eps)^k delta at
/// sigma^k(omega); closed form on eventually periodic points.
double discounted_measure_apply(const SymbolicPoint& point, const ObservableExpr& g, double eps);

/// Same integral by direct summation with the tail certificate
/// sup|g| (1-eps)^K.
double discounted_measure_apply_direct(const SymbolicPoint& point, const ObservableExpr& g,
                                       double eps, double tol);

/// Total mass of mu_{eps,omega} computed the same closed-form way; equals 1
/// up to rounding and is asserted by tests.
double discounted_measure_mass(const SymbolicPoint& point, double eps);

/// |U_eps[u0 o sigma - u0](omega) - u0(omega) + integral of u0 o sigma
/// against mu_{eps,omega}|; an exact identity, so the closed-form gap is
/// rounding only.
double coboundary_identity_gap(const SymbolicPoint& point, const EdgeObservable& u0, double eps);

/// One row of a convergence sweep: sup over the sample of
/// |U_eps[u0 o sigma - u0](omega) - (u0(omega) - c)| where c is the common
/// integral of u0 over invariant measures.
struct SweepRow {
    double epsilon = 0.0;
    double sup_error = 0.0;
    std::string argmax_point;
};

/// Thrown when a sweep is requested for an unbalanced observable; the
/// discounted values then oscillate instead of converging and the caller is
/// pointed at the oscillation experiment.
struct NotBalancedError : std::runtime_error {
    BalanceReport report;
    NotBalancedError(BalanceReport r, const std::string& msg)
        : std::runtime_error(msg), report(std::move(r)) {}
};

std::vector<SweepRow> convergence_sweep(const FiniteSystem& sys,
                                        const std::vector<SymbolicPoint>& points,
                                        const EdgeObservable& u0,
                                        const std::vector<double>& eps_list);

/// Rotation-side discounted value by direct summation (the only certified
/// mode there).
DiscountedEvaluation rotation_discounted_coboundary(const RotationSystem& rot,
                                                    const FourierObservable& u0, double x,
                                                    double eps, double tol);

/// Sweep over a uniform angle grid; the target is u0 - c0 (the constant
/// Fourier coefficient is the integral over the unique invariant measure).
std::vector<SweepRow> rotation_convergence_sweep(const RotationSystem& rot,
                                                 const FourierObservable& u0, int grid,
                                                 const std::vector<double>& eps_list, double tol);

}  // namespace ergopt
