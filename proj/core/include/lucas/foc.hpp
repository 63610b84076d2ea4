#pragma once

#include <array>

#include "lucas/closed_form.hpp"
#include "lucas/model.hpp"
#include "lucas/numerics.hpp"

namespace lucas {

// Full state of the optimality system: two stocks, two controls, two costates.
struct StateVector {
    double k = 0.0;
    double h = 0.0;
    double c = 0.0;
    double u = 0.0;
    double lambda = 0.0;
    double mu = 0.0;

    std::array<double, 6> to_array() const { return {k, h, c, u, lambda, mu}; }
    static StateVector from_array(std::span<const double> y);
};

// Componentwise time derivatives of the optimality system:
//   kdot      = [gamma z^(1-beta) - pi] k - c
//   hdot      = delta (1 - u) h
//   cdot      = [-(rho + pi)/sigma + (gamma beta / sigma) z^(1-beta)] c
//   udot      = [varphi - c/k + delta eta u] u
//   lambdadot = [rho + pi - gamma beta z^(1-beta)] lambda
//   mudot     = [rho - delta - theta delta u / (1-beta)] mu
// with z = h^eta u / k. Requires a strictly positive state; throws
// EvaluationError naming the offending component otherwise.
StateVector foc_rhs(const ModelParams& params, const DerivedConstants& constants,
                    const StateVector& state);

// Current-value Hamiltonian at a point of the state space.
double hamiltonian(const ModelParams& params, const StateVector& state);

// Right-hand side of the scalar labor-share dynamics
//   udot = [varphi - z^((sigma-beta)/sigma) e^{-xi t} / (F* - F(t)) + delta eta u] u,
// the reduction obtained by substituting the closed-form k and c. Throws
// EvaluationError when F* - F(t) has decayed below the numerical floor.
double scalar_u_rhs(const ModelParams& params, const DerivedConstants& constants,
                    const Calibration& calib, double t, double u,
                    const ToleranceSettings& tol = {});

// Integrates the six-dimensional optimality system from the given initial state
// over [0, T]. The state must stay strictly positive: a trial stage that leaves
// the positive orthant is rejected like any failed step, and an accepted state
// with a nonpositive component aborts with an EvaluationError reporting the first
// crossing time and component. The saddle-point structure makes this integration
// diverge from the stable path eventually; that is expected behavior, not a bug.
DenseTrajectory simulate_foc(const ModelParams& params, const DerivedConstants& constants,
                             const StateVector& initial, double T,
                             const ToleranceSettings& tol = {});

// Integrates the scalar labor-share dynamics from the calibrated u0 over [0, T].
DenseTrajectory simulate_scalar_u(const ModelParams& params,
                                  const DerivedConstants& constants,
                                  const Calibration& calib, double T,
                                  const ToleranceSettings& tol = {});

}  // namespace lucas
