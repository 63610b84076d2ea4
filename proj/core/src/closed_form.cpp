#include "lucas/closed_form.hpp"

#include <cmath>
#include <cstdio>

namespace lucas {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void require_nonnegative_time(double t, const char* who) {
    if (!std::isfinite(t) || t < 0.0)
        throw Error(std::string(who) + ": requires t >= 0, got t = " + fmt(t));
}

double p_exponent(const ModelParams& params) {
    return (params.sigma - params.beta) / params.sigma;
}

// z(s)^p * e^{-rate*s} for the discounting integrals.
ScalarFn make_integrand(const ZPath& zp, double p, double rate) {
    return [zp, p, rate](double s) {
        return std::pow(zp.value(s), p) * std::exp(-rate * s);
    };
}

double forward_integral(const ModelParams& params, const DerivedConstants& constants,
                        double z0, double t, double rate, const ToleranceSettings& tol,
                        const char* who) {
    require_nonnegative_time(t, who);
    if (t == 0.0) return 0.0;
    ZPath zp(params, constants, z0);
    return adaptive_quadrature(make_integrand(zp, p_exponent(params), rate), 0.0, t,
                               tol.quad_tol)
        .value;
}

double limit_integral(const ModelParams& params, const DerivedConstants& constants,
                      double z0, double rate, const ToleranceSettings& tol,
                      const char* who) {
    if (!(rate > 0.0))
        throw EvaluationError(std::string(who) +
                              ": discount rate <= 0, the integral diverges");
    ZPath zp(params, constants, z0);
    const double p = p_exponent(params);
    const double T = zp.convergence_time();
    double head = 0.0;
    if (T > 0.0)
        head = adaptive_quadrature(make_integrand(zp, p, rate), 0.0, T, tol.quad_tol).value;
    // Beyond T the path sits at z_star to full precision; the remainder is geometric.
    return head + std::pow(constants.z_star, p) * std::exp(-rate * T) / rate;
}

double tail_integral(const ModelParams& params, const DerivedConstants& constants,
                     double z0, double t, double rate, const ToleranceSettings& tol,
                     const char* who) {
    require_nonnegative_time(t, who);
    if (!(rate > 0.0))
        throw EvaluationError(std::string(who) +
                              ": discount rate <= 0, the integral diverges");
    ZPath zp(params, constants, z0);
    const double p = p_exponent(params);
    const double T = std::max(t, zp.convergence_time());
    double head = 0.0;
    if (T > t)  // pure relative target: the tail value itself decays toward zero
        head = adaptive_quadrature(make_integrand(zp, p, rate), t, T, tol.quad_tol, 0.0)
                   .value;
    return head + std::pow(constants.z_star, p) * std::exp(-rate * T) / rate;
}

double utility(double c, double sigma) {
    return (std::pow(c, 1.0 - sigma) - 1.0) / (1.0 - sigma);
}

}  // namespace

ZPath::ZPath(const ModelParams& params, const DerivedConstants& constants, double z0) {
    if (!std::isfinite(z0) || !(z0 > 0.0))
        throw Error("ZPath: requires z0 > 0, got z0 = " + fmt(z0));
    z0_ = z0;
    w0_ = std::pow(z0, params.beta - 1.0);
    w_inf_ = params.gamma / constants.a;
    rate_ = (1.0 - params.beta) * constants.a;
    inv_pm1_ = 1.0 / (params.beta - 1.0);
}

double ZPath::w(double t) const {
    return w_inf_ + (w0_ - w_inf_) * std::exp(-rate_ * t);
}

double ZPath::value(double t) const { return std::pow(w(t), inv_pm1_); }

double ZPath::convergence_time(double rel) const {
    const double gap = std::abs(w0_ - w_inf_);
    if (gap <= rel * w_inf_) return 0.0;
    return std::log(gap / (rel * w_inf_)) / rate_;
}

double z_at(const ModelParams& params, const DerivedConstants& constants, double z0,
            double t) {
    require_nonnegative_time(t, "z_at");
    return ZPath(params, constants, z0).value(t);
}

double F_at(const ModelParams& params, const DerivedConstants& constants, double z0,
            double t, const ToleranceSettings& tol) {
    return forward_integral(params, constants, z0, t, constants.xi, tol, "F_at");
}

double B_at(const ModelParams& params, const DerivedConstants& constants, double z0,
            double t, const ToleranceSettings& tol) {
    return forward_integral(params, constants, z0, t, constants.xi - constants.varphi,
                            tol, "B_at");
}

double F_limit(const ModelParams& params, const DerivedConstants& constants, double z0,
               const ToleranceSettings& tol) {
    return limit_integral(params, constants, z0, constants.xi, tol, "F_limit");
}

double B_limit(const ModelParams& params, const DerivedConstants& constants, double z0,
               const ToleranceSettings& tol) {
    return limit_integral(params, constants, z0, constants.xi - constants.varphi, tol,
                          "B_limit");
}

double F_tail(const ModelParams& params, const DerivedConstants& constants, double z0,
              double t, const ToleranceSettings& tol) {
    return tail_integral(params, constants, z0, t, constants.xi, tol, "F_tail");
}

double B_tail(const ModelParams& params, const DerivedConstants& constants, double z0,
              double t, const ToleranceSettings& tol) {
    return tail_integral(params, constants, z0, t, constants.xi - constants.varphi, tol,
                         "B_tail");
}

double k_at(const ModelParams& params, const DerivedConstants& constants,
            const Calibration& calib, const InitialEndowment& endowment, double t,
            const ToleranceSettings& tol) {
    require_nonnegative_time(t, "k_at");
    const double z = z_at(params, constants, calib.z0, t);
    const double tail = F_tail(params, constants, calib.z0, t, tol);
    return (endowment.k0 * calib.z0 / calib.F_star) * (tail / z) *
           std::exp(constants.phi * t);
}

double c_at(const ModelParams& params, const DerivedConstants& constants,
            const Calibration& calib, const InitialEndowment& endowment, double t,
            const ToleranceSettings&) {
    require_nonnegative_time(t, "c_at");
    const double z = z_at(params, constants, calib.z0, t);
    return (endowment.k0 * calib.z0 / calib.F_star) *
           std::pow(z, -params.beta / params.sigma) * std::exp(constants.chi * t);
}

double u_form1_at(const ModelParams& params, const DerivedConstants& constants,
                  const Calibration& calib, double t, const ToleranceSettings& tol) {
    require_nonnegative_time(t, "u_form1_at");
    const double de = params.delta * constants.eta;
    const double u0 = calib.u0;
    // Jump function of the calibration; zero (to root tolerance) on the saddle path.
    const double G =
        (constants.varphi + de * u0) * calib.F_star - de * u0 * calib.B_star;
    const double f_tail = F_tail(params, constants, calib.z0, t, tol);
    const double b_tail = B_tail(params, constants, calib.z0, t, tol);
    // Denominator written against the tails: subtracting the full forward
    // integrals instead cancels catastrophically once xi*t is large.
    const double den = (G + de * u0 * b_tail) * std::exp(-constants.varphi * t) -
                       de * u0 * f_tail;
    const double num = constants.varphi * u0 * f_tail;
    if (den == 0.0 || std::abs(den) < 1e-280)
        throw EvaluationError("u_form1_at: vanishing denominator at t = " + fmt(t));
    return num / den;
}

double u_form2_at(const ModelParams& params, const DerivedConstants& constants,
                  const Calibration& calib, const InitialEndowment& endowment, double t,
                  const ToleranceSettings& tol) {
    require_nonnegative_time(t, "u_form2_at");
    const double P = params.rho + params.pi - params.pi * params.sigma;
    const double Q = params.gamma * params.beta * (1.0 - params.sigma);
    const double z = z_at(params, constants, calib.z0, t);
    const double f_tail = F_tail(params, constants, calib.z0, t, tol);
    const double brace = std::pow(calib.z0, params.beta - 1.0) *
                             (params.sigma * calib.c0 - P * endowment.k0) +
                         Q * endowment.k0;
    const double num = (calib.u0 / endowment.k0) * brace * f_tail;
    const double den = (Q - P * std::pow(z, params.beta - 1.0)) * f_tail +
                       params.sigma * std::pow(z, params.beta - params.beta / params.sigma) *
                           std::exp(-constants.xi * t);
    if (den == 0.0 || std::abs(den) < 1e-280)
        throw EvaluationError("u_form2_at: vanishing denominator at t = " + fmt(t));
    return num / den;
}

double h_at(const ModelParams& params, const DerivedConstants& constants,
            const Calibration& calib, const InitialEndowment& endowment, double t,
            double u_value, const ToleranceSettings& tol) {
    require_nonnegative_time(t, "h_at");
    if (!std::isfinite(u_value) || !(u_value > 0.0))
        throw EvaluationError("h_at: requires a positive labor share, got u = " +
                              fmt(u_value));
    const double f_tail = F_tail(params, constants, calib.z0, t, tol);
    const double base = calib.u0 * std::exp(constants.phi * t) * f_tail /
                        (calib.F_star * u_value);
    if (!(base > 0.0))
        throw EvaluationError("h_at: nonpositive base at t = " + fmt(t));
    return endowment.h0 * std::pow(base, 1.0 / constants.eta);
}

Costates costates_at(const ModelParams& params, double k, double h, double c, double u) {
    if (!(k > 0.0) || !(h > 0.0) || !(c > 0.0) || !(u > 0.0))
        throw EvaluationError("costates_at: requires positive k, h, c, u");
    const double eta = (1.0 - params.beta + params.theta) / (1.0 - params.beta);
    const double z = std::pow(h, eta) * u / k;
    Costates out;
    out.lambda = std::pow(c, -params.sigma);
    out.mu = (1.0 - params.beta) * params.gamma * std::pow(z, 1.0 - params.beta) * k *
             out.lambda / (params.delta * h * u);
    return out;
}

QuadratureResult welfare(const ModelParams& params, const DerivedConstants& constants,
                         const Calibration& calib, const InitialEndowment& endowment,
                         const ToleranceSettings& tol) {
    const double tail_rate = params.rho + (params.sigma - 1.0) * constants.chi;
    if (!(params.rho > 0.0) || !(tail_rate > 0.0))
        throw EvaluationError("welfare: discounted utility diverges "
                              "(rho + (sigma - 1) chi must be positive)");
    ZPath zp(params, constants, calib.z0);
    const double T = zp.convergence_time();
    const double amp = endowment.k0 * calib.z0 / calib.F_star;
    auto integrand = [&](double t) {
        const double c = amp * std::pow(zp.value(t), -params.beta / params.sigma) *
                         std::exp(constants.chi * t);
        return utility(c, params.sigma) * std::exp(-params.rho * t);
    };
    QuadratureResult head{0.0, 0.0, 0};
    if (T > 0.0)
        head = adaptive_quadrature(integrand, 0.0, T, tol.quad_tol, tol.quad_tol);
    // From T on, c grows exactly at rate chi; integrate the tail in closed form.
    const double c_T = amp * std::pow(constants.z_star, -params.beta / params.sigma) *
                       std::exp(constants.chi * T);
    const double tail = std::exp(-params.rho * T) / (1.0 - params.sigma) *
                        (std::pow(c_T, 1.0 - params.sigma) / tail_rate - 1.0 / params.rho);
    return {head.value + tail, head.error_estimate, head.subdivisions};
}

}  // namespace lucas
