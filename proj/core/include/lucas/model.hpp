#pragma once

#include <string>
#include <vector>

#include "lucas/errors.hpp"

namespace lucas {

// Structural parameters of the two-sector endogenous growth model.
//
// Goods sector: y = gamma * k^beta * (h u)^(1-beta) * h_a^theta, where h_a is the
// economy-wide average human capital (h_a = h in equilibrium, taken as given by the
// planner's first-order conditions). Education sector: hdot = delta * (1 - u) * h.
struct ModelParams {
    double beta;    // output elasticity of physical capital, in (0, 1)
    double sigma;   // inverse intertemporal elasticity, > 0, != 1, != beta
    double rho;     // subjective discount rate, > 0
    double delta;   // education-sector productivity, > 0
    double gamma;   // goods-sector productivity, > 0
    double pi;      // physical-capital depreciation rate, >= 0
    double theta;   // human-capital externality exponent, >= 0
};

// Initial stocks of the two capital goods.
struct InitialEndowment {
    double k0;  // physical capital at t = 0, > 0
    double h0;  // human capital at t = 0, > 0
};

// Constants derived from ModelParams that drive every closed form.
//
// The ratio z = h^eta * u / k is an autonomous Bernoulli variable with
// zdot = a*z - gamma*z^(2-beta); its rest point is z_star. A parameter set is
// feasible when xi > 0, xi > varphi and xi - varphi < delta*eta (equivalently
// 0 < chi < delta*eta), which makes the discounting integrals converge and puts
// the long-run labor share u_star inside (0, 1).
struct DerivedConstants {
    double eta;      // (1 - beta + theta) / (1 - beta)
    double phi;      // long-run growth rate of k: [(1-beta)(delta + pi(1-beta)) + theta*delta] / (beta(1-beta))
    double chi;      // long-run growth rate of c: [(1-beta)(delta - rho) + theta*delta] / (sigma(1-beta))
    double xi;       // phi - chi, discount rate of the forward integral F
    double varphi;   // [(delta + pi)(1-beta) + theta*delta] / beta, linear rate of the u dynamics
    double a;        // delta*eta + varphi + pi, linear rate of the z dynamics
    double z_star;   // (a / gamma)^(1/(1-beta)), rest point of z
    double u_star;   // (xi - varphi) / (delta*eta), long-run labor share
};

enum class Severity { Error, Warning };

// One violated invariant, with a stable machine-readable code.
struct Violation {
    std::string code;
    std::string message;
    Severity severity = Severity::Error;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool empty() const { return violations.empty(); }
    bool ok() const;  // true when no Error-severity violation is present
    std::string summary() const;
};

// Checks the parameter bounds above and, when they hold, the derived feasibility
// conditions. The slow-decay condition rho > (1 - sigma) * chi is reported as a
// warning only: paths can still be computed, but discounted utility diverges.
ValidationReport validate(const ModelParams& params);

// Computes DerivedConstants. Throws InvalidParamsError when the parameter bounds
// fail; feasibility violations do not throw, so infeasible-but-bounded points can
// still be tabulated (e.g. by parameter sweeps).
DerivedConstants derive_constants(const ModelParams& params);

// Throws InvalidParamsError unless both stocks are positive and finite.
void validate_endowment(const InitialEndowment& endowment);

}  // namespace lucas
