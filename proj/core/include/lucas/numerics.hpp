#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lucas/errors.hpp"

namespace lucas {

// Tolerance knobs shared by the ODE driver, the quadrature, and the root finder.
// Defaults match the tightest settings the verification suite relies on.
struct ToleranceSettings {
    double ode_rel_tol = 1e-10;
    double ode_abs_tol = 1e-12;
    double quad_tol = 1e-12;
    double root_tol = 1e-12;
    long max_steps = 1000000;
};

// Right-hand side of y' = f(t, y); writes the derivative into dydt.
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
using ScalarFn = std::function<double(double)>;

// Piecewise-polynomial record of an adaptive integration: accepted states plus a
// fourth-order continuous extension on every step. Evaluating at a stored
// breakpoint returns the accepted state bit-for-bit; evaluating between
// breakpoints uses the step's interpolant. Evaluation outside [t_front, t_back]
// throws Error.
class DenseTrajectory {
public:
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return times_.size(); }  // number of breakpoints
    double t_front() const { return times_.front(); }
    double t_back() const { return times_.back(); }
    const std::vector<double>& times() const { return times_; }
    std::span<const double> state(std::size_t i) const;

    void eval(double t, std::span<double> out) const;
    std::vector<double> eval(double t) const;
    double eval_scalar(double t) const;  // convenience for dim() == 1

private:
    friend class TrajectoryBuilder;
    std::size_t dim_ = 0;
    std::vector<double> times_;   // breakpoints t_0 < t_1 < ... < t_n
    std::vector<double> states_;  // size() * dim accepted states
    std::vector<double> coeffs_;  // (size()-1) * 5 * dim interpolant coefficients

    std::size_t segment_index(double t) const;
};

// Observer invoked after every accepted step with the trajectory built so far;
// may throw to abort the integration (used e.g. for positivity detection).
using StepObserver = std::function<void(const DenseTrajectory&)>;

// Adaptive fifth-order Runge-Kutta driver (embedded 5(4) pair, PI step control,
// first-same-as-last stage reuse) producing a dense trajectory over [t0, t1].
// Requires t1 >= t0; t1 == t0 yields a single-breakpoint trajectory. Throws
// NumericsError on step-size underflow, persistent non-finite right-hand sides,
// or when max_steps is exhausted.
DenseTrajectory integrate_ode(const OdeRhs& rhs, std::span<const double> y0,
                              double t0, double t1,
                              const ToleranceSettings& tol = {},
                              const StepObserver& on_step = {});

// Same tableau driven at a fixed step; returns the state at t1. Used by
// convergence studies that need the classical order to show through.
std::vector<double> integrate_ode_fixed(const OdeRhs& rhs, std::span<const double> y0,
                                        double t0, double t1, int n_steps);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
};

// Globally adaptive Gauss-Kronrod 7-15 quadrature over [a, b], a <= b. The
// worst panel (largest error estimate) is bisected until the summed estimate
// satisfies err <= max(abs_tol, rel_tol * |value|). Passing abs_tol < 0 (the
// default) uses rel_tol as the absolute floor as well. Throws NumericsError on
// non-finite samples or when the subdivision budget is exhausted while the
// target is still missed.
QuadratureResult adaptive_quadrature(const ScalarFn& f, double a, double b,
                                     double rel_tol, double abs_tol = -1.0,
                                     int max_subdivisions = 4000);

struct RootResult {
    double root = 0.0;
    double residual = 0.0;  // f(root)
    int iterations = 0;
};

// Brent's method on a bracketing interval [lo, hi] with f(lo)*f(hi) <= 0.
// tol is the absolute x-tolerance. Throws NumericsError when the interval does
// not bracket a sign change or the iteration budget runs out.
RootResult find_root(const ScalarFn& f, double lo, double hi, double tol,
                     int max_iter = 200);

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct ScanReport {
    std::vector<Bracket> brackets;
    int nonfinite_samples = 0;
};

// Samples f on a uniform inclusive grid of n_points >= 2 points and reports every
// sub-interval whose endpoints show a sign change. A zero exactly at a grid point
// is assigned to the sub-interval on its left (the leading point, having no left
// neighbour, is assigned to the first). Non-finite samples are skipped and
// counted; brackets always pair consecutive finite samples.
ScanReport scan_brackets(const ScalarFn& f, double lo, double hi, int n_points);

// First bracket of scan_brackets, or nullopt when the scan finds none.
std::optional<Bracket> scan_bracket(const ScalarFn& f, double lo, double hi, int n_points);

}  // namespace lucas
