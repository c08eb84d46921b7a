#include "ergopt/discounted.hpp"

#include <cmath>
#include <stdexcept>

#include "ergopt/parallel.hpp"

namespace ergopt {

namespace {

void check_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon out of range (0,1)");
}

void check_tol(double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

/// sum_{k>=0} (1-eps)^k v_k over an eventually periodic value sequence,
/// assembled as preperiod head plus one geometric cycle block.
double discounted_series(const OrbitValues& values, double eps) {
    const double l = std::log1p(-eps);
    double head = 0.0;
    double weight = 1.0;
    for (const Rat& v : values.pre) {
        head += weight * rat_to_double(v);
        weight *= 1.0 - eps;
    }
    const auto q = values.cycle_length();
    double block = 0.0;
    double w = 1.0;
    for (const Rat& v : values.cyc) {
        block += w * rat_to_double(v);
        w *= 1.0 - eps;
    }
    const double denom = -std::expm1(static_cast<double>(q) * l);  // 1 - (1-eps)^q
    const double prefix = std::exp(static_cast<double>(values.preperiod_length()) * l);
    return head + prefix * block / denom;
}

}  // namespace

const char* method_name(DiscountedEvaluation::Method m) {
    switch (m) {
        case DiscountedEvaluation::Method::Direct:
            return "direct";
        case DiscountedEvaluation::Method::ClosedFormPeriodic:
            return "closed-form-periodic";
        case DiscountedEvaluation::Method::ClosedFormBlocks:
            return "closed-form-blocks";
    }
    return "?";
}

DiscountedEvaluation discounted_value(const SymbolicPoint& point, const ObservableExpr& f,
                                      double eps) {
    check_eps(eps);
    OrbitValues values = orbit_values(f, point);
    DiscountedEvaluation out;
    out.epsilon = eps;
    out.method = DiscountedEvaluation::Method::ClosedFormPeriodic;
    out.value = -discounted_series(values, eps);
    out.tail_bound = 0.0;
    return out;
}

DiscountedEvaluation discounted_value_direct(const SymbolicPoint& point, const ObservableExpr& f,
                                             double eps, double tol) {
    check_eps(eps);
    check_tol(tol);
    DiscountedEvaluation out;
    out.epsilon = eps;
    out.method = DiscountedEvaluation::Method::Direct;

    const double supf = rat_to_double(f.sup_abs_bound());
    if (supf == 0.0) return out;  // f vanishes identically

    const double l = std::log1p(-eps);
    const auto K = static_cast<std::int64_t>(std::ceil(std::log(tol * eps / supf) / l));
    out.horizon = std::max<std::int64_t>(K, 1);
    double sum = 0.0, weight = 1.0;
    for (std::int64_t k = 0; k < out.horizon; ++k) {
        sum += weight * rat_to_double(f.value_at(point, k));
        weight *= 1.0 - eps;
    }
    out.value = -sum;
    out.tail_bound = supf * std::exp(static_cast<double>(out.horizon) * l) / eps;
    return out;
}

double dce_residual(const SymbolicPoint& point, const ObservableExpr& f, double eps,
                    DiscountedEvaluation::Method method, double tol) {
    const SymbolicPoint shifted = shift_point(point);
    double u_here, u_next;
    if (method == DiscountedEvaluation::Method::Direct) {
        u_here = discounted_value_direct(point, f, eps, tol).value;
        u_next = discounted_value_direct(shifted, f, eps, tol).value;
    } else {
        u_here = discounted_value(point, f, eps).value;
        u_next = discounted_value(shifted, f, eps).value;
    }
    const double f0 = rat_to_double(f.value_at(point, 0));
    return std::abs(f0 - (1.0 - eps) * u_next + u_here);
}

double discounted_measure_apply(const SymbolicPoint& point, const ObservableExpr& g, double eps) {
    check_eps(eps);
    OrbitValues values = orbit_values(g, point);
    return eps * discounted_series(values, eps);
}

double discounted_measure_apply_direct(const SymbolicPoint& point, const ObservableExpr& g,
                                       double eps, double tol) {
    check_eps(eps);
    check_tol(tol);
    const double supg = rat_to_double(g.sup_abs_bound());
    if (supg == 0.0) return 0.0;
    const double l = std::log1p(-eps);
    const auto K = std::max<std::int64_t>(
        static_cast<std::int64_t>(std::ceil(std::log(tol / supg) / l)), 1);
    double sum = 0.0, weight = eps;
    for (std::int64_t k = 0; k < K; ++k) {
        sum += weight * rat_to_double(g.value_at(point, k));
        weight *= 1.0 - eps;
    }
    return sum;
}

double discounted_measure_mass(const SymbolicPoint& point, double eps) {
    check_eps(eps);
    OrbitValues ones;
    ones.pre.assign(point.preperiod.size(), Rat(1));
    ones.cyc.assign(point.cycle.size(), Rat(1));
    return eps * discounted_series(ones, eps);
}

double coboundary_identity_gap(const SymbolicPoint& point, const EdgeObservable& u0, double eps) {
    check_eps(eps);
    const ObservableExpr f = ObservableExpr::coboundary(u0);
    const double u_eps = discounted_value(point, f, eps).value;
    const double u0_here = rat_to_double(u0.weight(orbit_edge(point, 0)));
    const double shifted_integral =
        discounted_measure_apply(shift_point(point), ObservableExpr::plain(u0), eps);
    return std::abs(u_eps - u0_here + shifted_integral);
}

std::vector<SweepRow> convergence_sweep(const FiniteSystem& sys,
                                        const std::vector<SymbolicPoint>& points,
                                        const EdgeObservable& u0,
                                        const std::vector<double>& eps_list) {
    if (points.empty()) throw std::invalid_argument("sweep needs at least one point");
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i + 1]))
            throw std::invalid_argument("epsilon list must be strictly decreasing");

    BalanceReport bal = balance_check(sys, u0);
    if (!bal.balanced)
        throw NotBalancedError(bal,
                               "observable is not balanced (gap " + rat_to_string(bal.gap()) +
                                   "); no uniform limit exists, run the oscillation experiment");

    const ObservableExpr f = ObservableExpr::coboundary(u0);
    std::vector<SweepRow> rows;
    rows.reserve(eps_list.size());
    for (double eps : eps_list) {
        check_eps(eps);
        SweepRow row;
        row.epsilon = eps;
        for (const SymbolicPoint& p : points) {
            const Rat target = u0.weight(orbit_edge(p, 0)) - bal.min_integral;
            const double err =
                std::abs(discounted_value(p, f, eps).value - rat_to_double(target));
            if (row.argmax_point.empty() || err > row.sup_error) {
                row.sup_error = err;
                row.argmax_point = point_id(sys, p);
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

DiscountedEvaluation rotation_discounted_coboundary(const RotationSystem& rot,
                                                    const FourierObservable& u0, double x,
                                                    double eps, double tol) {
    check_eps(eps);
    check_tol(tol);
    DiscountedEvaluation out;
    out.epsilon = eps;
    out.method = DiscountedEvaluation::Method::Direct;

    // The constant coefficient cancels in u0 o R - u0.
    const double supf = 2.0 * (u0.l1_norm() - std::abs(u0.c0));
    if (supf == 0.0) return out;

    const double l = std::log1p(-eps);
    out.horizon = std::max<std::int64_t>(
        static_cast<std::int64_t>(std::ceil(std::log(tol * eps / supf) / l)), 1);
    double sum = 0.0, comp = 0.0, weight = 1.0;
    double prev = u0.eval(rotation_angle(rot, x, 0));
    for (std::int64_t k = 0; k < out.horizon; ++k) {
        const double next = u0.eval(rotation_angle(rot, x, k + 1));
        const double term = weight * (next - prev);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        prev = next;
        weight *= 1.0 - eps;
    }
    out.value = -sum;
    out.tail_bound = supf * std::exp(static_cast<double>(out.horizon) * l) / eps;
    return out;
}

std::vector<SweepRow> rotation_convergence_sweep(const RotationSystem& rot,
                                                 const FourierObservable& u0, int grid,
                                                 const std::vector<double>& eps_list, double tol) {
    if (grid < 1) throw std::invalid_argument("grid must be >= 1");
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i + 1]))
            throw std::invalid_argument("epsilon list must be strictly decreasing");

    std::vector<SweepRow> rows;
    rows.reserve(eps_list.size());
    for (double eps : eps_list) {
        check_eps(eps);
        std::vector<double> errors(static_cast<std::size_t>(grid));
        parallel_for(static_cast<std::size_t>(grid), [&](std::size_t i) {
            const double x = static_cast<double>(i) / static_cast<double>(grid);
            const double u = rotation_discounted_coboundary(rot, u0, x, eps, tol).value;
            errors[i] = std::abs(u - (u0.eval(x) - u0.c0));
        });
        SweepRow row;
        row.epsilon = eps;
        std::size_t argmax = 0;
        for (std::size_t i = 0; i < errors.size(); ++i) {
            if (errors[i] > row.sup_error) {
                row.sup_error = errors[i];
                argmax = i;
            }
        }
        row.argmax_point =
            "x=" + format_double(static_cast<double>(argmax) / static_cast<double>(grid));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ergopt
