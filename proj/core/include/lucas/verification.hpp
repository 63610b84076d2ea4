#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lucas/calibration.hpp"

namespace lucas {

enum class Verdict { Pass, Fail, Info };

// Outcome of one verification check: a stable name, a verdict, the measured
// quantities that back it, and a one-line human-readable finding.
struct CheckResult {
    std::string name;
    Verdict verdict = Verdict::Pass;
    std::vector<std::pair<std::string, double>> metrics;
    std::string note;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

// Grid horizons, steps, and tolerances of the verification suite. Defaults are
// the reference settings the acceptance tests run with.
struct VerificationSettings {
    double equiv_horizon = 100.0, equiv_step = 0.5, equiv_tol = 1e-5;
    double uniq_horizon = 100.0, uniq_step = 0.5, uniq_base_tol = 1e-6;
    double widen_time_scale = 10.0;  // allowed gap grows as (1 + t / scale)
    double admis_horizon = 200.0, admis_step = 0.1;
    double trans_horizon = 200.0, trans_step = 10.0, trans_final_fraction = 1e-3;
    double resid_horizon = 50.0, resid_step = 1.0, resid_tol = 1e-6, fd_step = 1e-4;
    double bgp_horizon = 400.0, bgp_tol = 1e-4;
    double compare_horizon = 50.0, compare_step = 0.5, compare_base_tol = 1e-6;
};

// Uniform grid over [t0, t1] including both endpoints; when the span is an
// integer number of steps the interior points are exact multiples of step.
std::vector<double> make_grid(double t0, double t1, double step);

// Second-order finite-difference derivative of fn at t >= 0: central where both
// neighbours are available, one-sided within the first step of the origin.
double fd_derivative(const ScalarFn& fn, double t, double eps);

// Scaled defect of the closed forms against the dynamical system at one time:
// |d/dt x - rhs_x| / max(1, |x|) for x in {k, h, c, u}, derivatives taken by
// finite differences with step fd_step.
struct ResidualSample {
    double res_k = 0.0;
    double res_h = 0.0;
    double res_c = 0.0;
    double res_u = 0.0;
};
ResidualSample foc_residuals_at(const SolutionPath& path, double t, double fd_step);

// Largest relative gap between the two labor-share forms on the grid. Both
// outcomes are findings: "coincide" passes, "discrepant" fails, and the measured
// gap is reported either way.
CheckResult check_equivalence_u_forms(const SolutionPath& path,
                                      std::span<const double> grid, double tol_gap);

// Integrates the scalar labor-share dynamics from the calibrated u0 and compares
// against u-form 1; the allowed relative gap widens linearly in t.
CheckResult check_uniqueness_ode(const SolutionPath& path, double horizon, double step,
                                 double base_tol, double widen_scale);

// Both labor-share forms must stay strictly inside (0, 1) over the grid.
CheckResult check_admissibility(const SolutionPath& path, std::span<const double> grid);

// Discounted costate-weighted stocks e^{-rho t} lambda k and e^{-rho t} mu h at
// the sample times; mu comes from its own linear dynamics driven by u-form 1.
// Passes when both sequences are eventually decreasing and the final value has
// fallen below final_fraction of the initial one.
CheckResult check_transversality(const SolutionPath& path,
                                 std::span<const double> sample_times,
                                 double final_fraction);

// Finite-difference derivatives of closed-form k, h, c, u against the dynamical
// system's right-hand side, scaled by max(1, |state|).
CheckResult check_foc_residuals(const SolutionPath& path, std::span<const double> grid,
                                double fd_step, double tol_resid);

// Long-horizon limits: labor share and z at their rest points, growth rates of
// k, c at chi and of h at delta (1 - u_star).
CheckResult check_bgp_asymptotics(const SolutionPath& path, double horizon, double tol);

// Integrates the full six-equation optimality system from the calibrated initial
// state and measures per-component relative gaps against the closed forms. A
// simulation abort is reported as a failure carrying the abort message.
CheckResult compare_closed_vs_simulated(const SolutionPath& path, double horizon,
                                        double step, double base_tol,
                                        double widen_scale);

// Runs every check above, in a fixed order, with the given settings.
VerificationReport run_all_checks(const SolutionPath& path,
                                  const VerificationSettings& settings = {});

}  // namespace lucas
