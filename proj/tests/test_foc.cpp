#include "doctest.h"

#include <cmath>
#include <string>

#include "lucas/foc.hpp"
#include "test_support.hpp"

using namespace lucas;
using namespace lucas::testing;

namespace {

StateVector p1_bgp_state() {
    StateVector s;
    s.k = 1.0;
    s.h = 10.0 / 9.0;
    s.c = 0.095;
    s.u = 0.9;
    s.lambda = 110.80332409972299;
    s.mu = 110.80332409972299;
    return s;
}

Calibration p1_bgp_calib() {
    Calibration c;
    c.u0 = 0.9;
    c.c0 = 0.095;
    c.z0 = 1.0;
    c.F_star = 10.526315789473684;
    c.B_star = 22.222222222222222;
    c.lambda0 = 110.80332409972299;
    c.mu0 = 110.80332409972299;
    return c;
}

}  // namespace

TEST_CASE("optimality system derivatives at the balanced-growth state") {
    const auto d = derive_constants(p1());
    const StateVector rhs = foc_rhs(p1(), d, p1_bgp_state());
    CHECK(rhs.k == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(rhs.h == doctest::Approx(0.0055555555555555556).epsilon(1e-12));
    CHECK(rhs.c == doctest::Approx(0.000475).epsilon(1e-12));
    CHECK(rhs.u == doctest::Approx(0.0).epsilon(1e-12));
    // Both costates decay at rate -0.01 on this path.
    CHECK(rhs.lambda / p1_bgp_state().lambda == doctest::Approx(-0.01).epsilon(1e-12));
    CHECK(rhs.mu / p1_bgp_state().mu == doctest::Approx(-0.01).epsilon(1e-12));
}

TEST_CASE("derivatives require a strictly positive state and name the offender") {
    const auto d = derive_constants(p1());
    StateVector s = p1_bgp_state();
    s.h = 0.0;
    try {
        foc_rhs(p1(), d, s);
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(std::string(e.what()).find('h') != std::string::npos);
    }
}

TEST_CASE("Hamiltonian value at the balanced-growth state") {
    CHECK(hamiltonian(p1(), p1_bgp_state()) ==
          doctest::Approx(-8.3567251461988304).epsilon(1e-12));
}

TEST_CASE("consumption-capital ratio is stationary on the balanced path") {
    const auto d = derive_constants(p1());
    const StateVector s = p1_bgp_state();
    const StateVector rhs = foc_rhs(p1(), d, s);
    // d/dt (c/k) = (c/k)(cdot/c - kdot/k) = 0 exactly at the rest point.
    CHECK(rhs.c / s.c - rhs.k / s.k == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("scalar labor-share dynamics") {
    const auto d = derive_constants(p1());
    const Calibration c = p1_bgp_calib();
    CHECK(scalar_u_rhs(p1(), d, c, 0.0, 0.9) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(scalar_u_rhs(p1(), d, c, 0.0, 0.8) ==
          doctest::Approx(-0.004).epsilon(1e-9));
    // Far beyond the decay horizon of F* - F(t) the reduction is undefined.
    CHECK_THROWS_AS(scalar_u_rhs(p1(), d, c, 8000.0, 0.9), EvaluationError);
}

TEST_CASE("simulated optimality system holds the balanced path") {
    const auto d = derive_constants(p1());
    const auto traj = simulate_foc(p1(), d, p1_bgp_state(), 50.0);
    for (double t : {0.0, 10.0, 30.0, 50.0}) {
        const auto y = traj.eval(t);
        const double z = std::pow(y[1], d.eta) * y[3] / y[0];
        CHECK(y[3] == doctest::Approx(0.9).epsilon(1e-8));
        CHECK(z == doctest::Approx(1.0).epsilon(1e-8));
        // lambda stays locked to c^-sigma along the optimal path.
        CHECK(y[4] * std::pow(y[2], p1().sigma) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("simulation reports the first positivity crossing") {
    const auto d = derive_constants(p1());
    StateVector s = p1_bgp_state();
    s.c = 0.5;  // consumption far above sustainable: k is driven to zero
    try {
        simulate_foc(p1(), d, s, 50.0);
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("positive orthant") != std::string::npos);
        CHECK(msg.find('k') != std::string::npos);
        CHECK(msg.find("t =") != std::string::npos);
    }
}

TEST_CASE("scalar integration from the calibrated start stays on the path") {
    const auto d = derive_constants(p1());
    const auto traj = simulate_scalar_u(p1(), d, p1_bgp_calib(), 50.0);
    CHECK(traj.eval_scalar(0.0) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(traj.eval_scalar(50.0) == doctest::Approx(0.9).epsilon(1e-8));
}

TEST_CASE("state vector round-trips through its array form") {
    const StateVector s = p1_bgp_state();
    const auto a = s.to_array();
    const StateVector back = StateVector::from_array(a);
    CHECK(back.k == s.k);
    CHECK(back.h == s.h);
    CHECK(back.c == s.c);
    CHECK(back.u == s.u);
    CHECK(back.lambda == s.lambda);
    CHECK(back.mu == s.mu);
}
