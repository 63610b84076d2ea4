#pragma once

#include "lucas/model.hpp"
#include "lucas/numerics.hpp"

namespace lucas {

// Explicit solution of the ratio dynamics. With z = h^eta * u / k the model
// implies zdot = a*z - gamma*z^(2-beta) regardless of the consumption and labor
// controls, so w = z^(beta-1) is linear: w(t) = w_inf + (w0 - w_inf)e^{-(1-beta)a t}
// with w_inf = gamma/a.
class ZPath {
public:
    ZPath(const ModelParams& params, const DerivedConstants& constants, double z0);

    double z0() const { return z0_; }
    double w(double t) const;      // z(t)^(beta-1)
    double value(double t) const;  // z(t)
    // Earliest time after which |w - w_inf| <= rel * w_inf; zero when already there.
    double convergence_time(double rel = 1e-12) const;

private:
    double z0_, w0_, w_inf_, rate_, inv_pm1_;
};

// Convenience wrapper over ZPath for a single evaluation.
double z_at(const ModelParams& params, const DerivedConstants& constants, double z0, double t);

// Saddle-path initial data pinned down by calibration (or forced for debugging).
struct Calibration {
    double u0 = 0.0;       // initial labor share in goods production
    double c0 = 0.0;       // initial consumption
    double z0 = 0.0;       // h0^eta * u0 / k0
    double F_star = 0.0;   // limit of the forward integral F
    double B_star = 0.0;   // limit of the forward integral B
    double lambda0 = 0.0;  // marginal utility of consumption at t = 0
    double mu0 = 0.0;      // shadow price of human capital at t = 0
};

// Discounting integrals of the z-path: integrand z(s)^((sigma-beta)/sigma) e^{-rate s}
// over [0, t], with rate xi for F and xi - varphi for B.
double F_at(const ModelParams& params, const DerivedConstants& constants, double z0,
            double t, const ToleranceSettings& tol = {});
double B_at(const ModelParams& params, const DerivedConstants& constants, double z0,
            double t, const ToleranceSettings& tol = {});

// Limits F* and B*. Throw EvaluationError when the discount rate is not positive
// (the integral diverges; feasible parameter sets never hit this).
double F_limit(const ModelParams& params, const DerivedConstants& constants, double z0,
               const ToleranceSettings& tol = {});
double B_limit(const ModelParams& params, const DerivedConstants& constants, double z0,
               const ToleranceSettings& tol = {});

// Tails F* - F(t) and B* - B(t), evaluated as direct integrals over [t, infinity)
// with an analytic geometric tail once z has settled. At large t the naive
// difference of near-equal numbers loses every significant digit; these do not.
double F_tail(const ModelParams& params, const DerivedConstants& constants, double z0,
              double t, const ToleranceSettings& tol = {});
double B_tail(const ModelParams& params, const DerivedConstants& constants, double z0,
              double t, const ToleranceSettings& tol = {});

// Closed-form state paths on the calibrated saddle path; all require t >= 0.
double k_at(const ModelParams& params, const DerivedConstants& constants,
            const Calibration& calib, const InitialEndowment& endowment, double t,
            const ToleranceSettings& tol = {});
double c_at(const ModelParams& params, const DerivedConstants& constants,
            const Calibration& calib, const InitialEndowment& endowment, double t,
            const ToleranceSettings& tol = {});

// The two published forms of the labor-share path. Form 1 discounts the jump
// function; form 2 carries the initial consumption level explicitly. They are
// algebraically equivalent on the saddle path; the verification suite measures
// how far apart they drift numerically rather than assuming the identity.
double u_form1_at(const ModelParams& params, const DerivedConstants& constants,
                  const Calibration& calib, double t, const ToleranceSettings& tol = {});
double u_form2_at(const ModelParams& params, const DerivedConstants& constants,
                  const Calibration& calib, const InitialEndowment& endowment, double t,
                  const ToleranceSettings& tol = {});

// Human capital given the labor share at the same instant (callers choose which
// u-form feeds it). Requires u_value > 0.
double h_at(const ModelParams& params, const DerivedConstants& constants,
            const Calibration& calib, const InitialEndowment& endowment, double t,
            double u_value, const ToleranceSettings& tol = {});

struct Costates {
    double lambda = 0.0;
    double mu = 0.0;
};

// Costates from the static first-order conditions: lambda = c^-sigma and mu from
// the stationarity of the Hamiltonian in u. Requires positive k, h, c, u.
Costates costates_at(const ModelParams& params, double k, double h, double c, double u);

// Discounted lifetime utility of the calibrated path. Head by quadrature until z
// settles, analytic tail afterwards. Throws EvaluationError when rho <= 0 or
// rho + (sigma - 1) chi <= 0 (the integral diverges).
QuadratureResult welfare(const ModelParams& params, const DerivedConstants& constants,
                         const Calibration& calib, const InitialEndowment& endowment,
                         const ToleranceSettings& tol = {});

}  // namespace lucas
