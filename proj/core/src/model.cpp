#include "lucas/model.hpp"

#include <cmath>
#include <sstream>

namespace lucas {

namespace {

// Bound checks only; feasibility of the derived constants is handled separately.
std::vector<Violation> bound_violations(const ModelParams& p) {
    std::vector<Violation> v;
    auto err = [&](const char* code, const char* msg) {
        v.push_back({code, msg, Severity::Error});
    };

    const double all[] = {p.beta, p.sigma, p.rho, p.delta, p.gamma, p.pi, p.theta};
    for (double x : all) {
        if (!std::isfinite(x)) {
            err("nonfinite_param", "all parameters must be finite");
            return v;
        }
    }
    if (!(p.beta > 0.0 && p.beta < 1.0)) err("beta_range", "beta must lie in (0, 1)");
    if (!(p.sigma > 0.0)) err("sigma_nonpositive", "sigma must be positive");
    if (p.sigma == 1.0) err("sigma_equals_one", "sigma = 1 (log utility) is outside the covered parameter class");
    if (p.sigma == p.beta) err("sigma_equals_beta", "sigma = beta makes the forward integrals degenerate");
    if (!(p.rho > 0.0)) err("rho_nonpositive", "rho must be positive");
    if (!(p.delta > 0.0)) err("delta_nonpositive", "delta must be positive");
    if (!(p.gamma > 0.0)) err("gamma_nonpositive", "gamma must be positive");
    if (!(p.pi >= 0.0)) err("pi_negative", "pi must be nonnegative");
    if (!(p.theta >= 0.0)) err("theta_negative", "theta must be nonnegative");
    return v;
}

DerivedConstants derive_unchecked(const ModelParams& p) {
    DerivedConstants d{};
    const double b1 = 1.0 - p.beta;
    d.eta = (b1 + p.theta) / b1;
    d.phi = (b1 * (p.delta + p.pi * b1) + p.theta * p.delta) / (p.beta * b1);
    d.chi = (b1 * (p.delta - p.rho) + p.theta * p.delta) / (p.sigma * b1);
    d.xi = d.phi - d.chi;
    d.varphi = ((p.delta + p.pi) * b1 + p.theta * p.delta) / p.beta;
    d.a = p.delta * d.eta + d.varphi + p.pi;
    d.z_star = std::pow(d.a / p.gamma, 1.0 / b1);
    d.u_star = (d.xi - d.varphi) / (p.delta * d.eta);
    return d;
}

}  // namespace

bool ValidationReport::ok() const {
    for (const auto& v : violations)
        if (v.severity == Severity::Error) return false;
    return true;
}

std::string ValidationReport::summary() const {
    if (violations.empty()) return "ok";
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) out << "; ";
        out << (violations[i].severity == Severity::Error ? "error" : "warning");
        out << " [" << violations[i].code << "]: " << violations[i].message;
    }
    return out.str();
}

ValidationReport validate(const ModelParams& params) {
    ValidationReport report;
    report.violations = bound_violations(params);
    if (!report.violations.empty()) return report;

    const DerivedConstants d = derive_unchecked(params);
    auto err = [&](const char* code, const std::string& msg) {
        report.violations.push_back({code, msg, Severity::Error});
    };

    if (!(d.xi > 0.0))
        err("xi_nonpositive", "xi <= 0: the forward integral F diverges");
    if (!(d.xi > d.varphi))
        err("xi_le_varphi", "xi <= varphi: the forward integral B diverges");
    if (!(d.xi - d.varphi < params.delta * d.eta))
        err("u_star_ge_one", "xi - varphi >= delta*eta: long-run labor share would reach 1");

    if (!(params.rho > (1.0 - params.sigma) * d.chi)) {
        report.violations.push_back(
            {"slow_discount_decay",
             "rho <= (1 - sigma)*chi: discounted utility and the transversality "
             "products do not decay",
             Severity::Warning});
    }
    return report;
}

DerivedConstants derive_constants(const ModelParams& params) {
    auto bounds = bound_violations(params);
    if (!bounds.empty()) {
        ValidationReport r{std::move(bounds)};
        throw InvalidParamsError("invalid parameters: " + r.summary());
    }
    return derive_unchecked(params);
}

void validate_endowment(const InitialEndowment& endowment) {
    if (!std::isfinite(endowment.k0) || !(endowment.k0 > 0.0))
        throw InvalidParamsError("k0 must be positive and finite");
    if (!std::isfinite(endowment.h0) || !(endowment.h0 > 0.0))
        throw InvalidParamsError("h0 must be positive and finite");
}

}  // namespace lucas
