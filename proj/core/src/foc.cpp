#include "lucas/foc.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace lucas {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

constexpr const char* kComponentNames[6] = {"k", "h", "c", "u", "lambda", "mu"};

// Derivatives without any validation; callers guarantee a positive state.
void rhs_raw(const ModelParams& p, const DerivedConstants& d,
             std::span<const double> y, std::span<double> dy) {
    const double k = y[0], h = y[1], c = y[2], u = y[3], lambda = y[4], mu = y[5];
    const double z1b = std::pow(std::pow(h, d.eta) * u / k, 1.0 - p.beta);
    dy[0] = (p.gamma * z1b - p.pi) * k - c;
    dy[1] = p.delta * (1.0 - u) * h;
    dy[2] = (-(p.rho + p.pi) / p.sigma + p.gamma * p.beta * z1b / p.sigma) * c;
    dy[3] = (d.varphi - c / k + p.delta * d.eta * u) * u;
    dy[4] = (p.rho + p.pi - p.gamma * p.beta * z1b) * lambda;
    dy[5] = (p.rho - p.delta - p.theta * p.delta * u / (1.0 - p.beta)) * mu;
}

}  // namespace

StateVector StateVector::from_array(std::span<const double> y) {
    if (y.size() != 6) throw Error("StateVector::from_array: expected 6 components");
    return {y[0], y[1], y[2], y[3], y[4], y[5]};
}

StateVector foc_rhs(const ModelParams& params, const DerivedConstants& constants,
                    const StateVector& state) {
    const auto y = state.to_array();
    for (int i = 0; i < 6; ++i) {
        if (!std::isfinite(y[i]) || !(y[i] > 0.0))
            throw EvaluationError(std::string("foc_rhs: component ") +
                                  kComponentNames[i] + " must be positive, got " +
                                  fmt(y[i]));
    }
    std::array<double, 6> dy{};
    rhs_raw(params, constants, y, dy);
    for (int i = 0; i < 6; ++i) {
        if (!std::isfinite(dy[i]))
            throw EvaluationError(std::string("foc_rhs: non-finite derivative of ") +
                                  kComponentNames[i]);
    }
    return StateVector::from_array(dy);
}

double hamiltonian(const ModelParams& params, const StateVector& s) {
    const double eta = (1.0 - params.beta + params.theta) / (1.0 - params.beta);
    const double output = params.gamma * std::pow(s.k, params.beta) *
                          std::pow(std::pow(s.h, eta) * s.u, 1.0 - params.beta);
    const double util = (std::pow(s.c, 1.0 - params.sigma) - 1.0) / (1.0 - params.sigma);
    return util + (output - params.pi * s.k - s.c) * s.lambda +
           params.delta * (1.0 - s.u) * s.h * s.mu;
}

double scalar_u_rhs(const ModelParams& params, const DerivedConstants& constants,
                    const Calibration& calib, double t, double u,
                    const ToleranceSettings& tol) {
    const double f_tail = F_tail(params, constants, calib.z0, t, tol);
    if (!(f_tail > 1e-290))
        throw EvaluationError("scalar_u_rhs: F* - F(t) below the numerical floor at "
                              "t = " + fmt(t) + "; horizon exceeded");
    const double z = z_at(params, constants, calib.z0, t);
    const double g = std::pow(z, (params.sigma - params.beta) / params.sigma) *
                     std::exp(-constants.xi * t);
    return (constants.varphi - g / f_tail + params.delta * constants.eta * u) * u;
}

DenseTrajectory simulate_foc(const ModelParams& params, const DerivedConstants& constants,
                             const StateVector& initial, double T,
                             const ToleranceSettings& tol) {
    const auto y0 = initial.to_array();
    for (int i = 0; i < 6; ++i) {
        if (!std::isfinite(y0[i]) || !(y0[i] > 0.0))
            throw EvaluationError(std::string("simulate_foc: initial ") +
                                  kComponentNames[i] + " must be positive");
    }

    // Trial stages outside the positive orthant yield NaN derivatives, which the
    // driver treats as a failed step. Since the last stage of an accepted step is
    // its endpoint, a state on or past the boundary can never be accepted: a
    // genuine crossing shows up as steps collapsing against it. The watch records
    // the earliest offending trial since the last accepted step so the collapse
    // can be reported as a first-crossing diagnosis instead of a step underflow.
    struct CrossingWatch {
        bool seen = false;
        double t = 0.0;
        int component = -1;
    } watch;
    auto rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
        for (int i = 0; i < 6; ++i) {
            if (!(y[i] > 0.0)) {
                if (!watch.seen || t < watch.t) watch = {true, t, i};
                for (auto& d : dy) d = std::numeric_limits<double>::quiet_NaN();
                return;
            }
        }
        rhs_raw(params, constants, y, dy);
    };

    auto on_step = [&](const DenseTrajectory& traj) {
        watch.seen = false;  // rejected trials before this step were recovered from
        const auto last = traj.state(traj.size() - 1);
        int bad = -1;
        for (int i = 0; i < 6; ++i)
            if (!(last[i] > 0.0)) { bad = i; break; }
        if (bad < 0) return;

        // Bisect the final segment for the first boundary crossing.
        double lo = traj.times()[traj.size() - 2], hi = traj.t_back();
        std::array<double, 6> y{};
        for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            traj.eval(mid, y);
            bool positive = true;
            for (int i = 0; i < 6; ++i)
                if (!(y[i] > 0.0)) { positive = false; bad = i; break; }
            (positive ? lo : hi) = mid;
        }
        throw EvaluationError(std::string("simulate_foc: state left the positive "
                                          "orthant (component ") +
                              kComponentNames[bad] + ") at t = " + fmt(hi));
    };

    try {
        return integrate_ode(rhs, y0, 0.0, T, tol, on_step);
    } catch (const NumericsError&) {
        if (watch.seen)
            throw EvaluationError(
                std::string("simulate_foc: state left the positive orthant "
                            "(component ") +
                kComponentNames[watch.component] + ") at t = " + fmt(watch.t));
        throw;
    }
}

DenseTrajectory simulate_scalar_u(const ModelParams& params,
                                  const DerivedConstants& constants,
                                  const Calibration& calib, double T,
                                  const ToleranceSettings& tol) {
    auto rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
        if (!(y[0] > 0.0)) {
            dy[0] = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        dy[0] = scalar_u_rhs(params, constants, calib, t, y[0], tol);
    };
    const double u0 = calib.u0;
    return integrate_ode(rhs, {&u0, 1}, 0.0, T, tol);
}

}  // namespace lucas
