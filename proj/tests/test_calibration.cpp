#include "doctest.h"

#include <cmath>
#include <string>

#include "lucas/calibration.hpp"
#include "test_support.hpp"

using namespace lucas;
using namespace lucas::testing;

TEST_CASE("jump function: sign structure over candidate labor shares") {
    const auto d = derive_constants(p1());
    const InitialEndowment e{1.0, 1.0};
    // Positive below the root, negative above it.
    CHECK(jump_residual(p1(), d, e, 0.2) ==
          doctest::Approx(0.151993385).epsilon(1e-8));
    CHECK(jump_residual(p1(), d, e, 0.5) ==
          doctest::Approx(0.1245483597).epsilon(1e-8));
    CHECK(jump_residual(p1(), d, e, 0.9) ==
          doctest::Approx(-0.01380716372).epsilon(1e-8));
    CHECK_THROWS_AS(jump_residual(p1(), d, e, 0.0), Error);
}

TEST_CASE("calibration pins the balanced-growth labor share, reference set 1") {
    const auto result = calibrate(p1(), p1_bgp_endowment());
    const Calibration& c = result.calibration;
    CHECK(c.u0 == doctest::Approx(0.9).epsilon(1e-8));
    CHECK(c.c0 == doctest::Approx(0.095).epsilon(1e-8));
    CHECK(c.F_star == doctest::Approx(10.526315789473684).epsilon(1e-6));
    CHECK(c.B_star == doctest::Approx(22.222222222222222).epsilon(1e-6));
    CHECK(c.lambda0 == doctest::Approx(110.80332409972299).epsilon(1e-6));
    CHECK(c.mu0 == doctest::Approx(110.80332409972299).epsilon(1e-6));

    const CalibrationDiagnostics& g = result.diagnostics;
    CHECK(g.sign_changes.size() == 1);
    CHECK(g.scan_points == 512);
    CHECK(g.nonfinite_samples == 0);
    CHECK(g.iterations > 0);
    CHECK(std::abs(g.residual) < 1e-10);
    CHECK(g.bracket.lo < c.u0);
    CHECK(g.bracket.hi > c.u0);
}

TEST_CASE("calibration pins the balanced-growth labor share, reference set 2") {
    const auto result = calibrate(p2(), p2_bgp_endowment());
    CHECK(result.calibration.u0 == doctest::Approx(5.0 / 6.0).epsilon(1e-8));
}

TEST_CASE("calibrated labor shares off the balanced path") {
    CHECK(calibrate(p1(), {1.0, 1.0}).calibration.u0 ==
          doctest::Approx(0.86750315776870712).epsilon(1e-8));
    CHECK(calibrate(p1(), {2.0, 1.0}).calibration.u0 ==
          doctest::Approx(0.68029869065255499).epsilon(1e-8));
    CHECK(calibrate(p2(), {1.0, 1.0}).calibration.u0 ==
          doctest::Approx(0.6836681227).epsilon(1e-8));

    const Calibration c = calibrate(p1(), {1.0, 1.0}).calibration;
    CHECK(c.c0 == doctest::Approx(0.091599405896615668).epsilon(1e-8));
    CHECK(c.F_star == doctest::Approx(9.8131998008680188).epsilon(1e-8));
    CHECK(c.B_star == doctest::Approx(21.125204504238107).epsilon(1e-8));
}

TEST_CASE("endowments whose root would exceed one are rejected with a reason") {
    // The interior root sits near 1.104 and 1.176 for these endowments: outside
    // (0, 1), so no admissible labor share exists and the scan must say so.
    for (const InitialEndowment e : {InitialEndowment{1.0, 2.0},
                                     InitialEndowment{0.5, 1.2}}) {
        try {
            calibrate(p1(), e);
            FAIL("expected CalibrationError");
        } catch (const CalibrationError& ex) {
            CHECK(std::string(ex.what()).find("no sign change") != std::string::npos);
        }
    }
}

TEST_CASE("invalid parameters are rejected before any scan") {
    ModelParams p = p1();
    p.sigma = 0.5;  // equals beta
    try {
        calibrate(p, {1.0, 1.0});
        FAIL("expected InvalidParamsError");
    } catch (const InvalidParamsError& ex) {
        CHECK(std::string(ex.what()).find("sigma_equals_beta") != std::string::npos);
    }
    CHECK_THROWS_AS(calibrate(p1(), {0.0, 1.0}), InvalidParamsError);
}

TEST_CASE("assembled solution evaluates the full point state") {
    const SolutionPath path = assemble_solution(p1(), p1_bgp_endowment());
    REQUIRE(path.diagnostics().has_value());

    const SolutionPath::Point p0 = path.at(0.0);
    CHECK(p0.k == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(p0.h == doctest::Approx(10.0 / 9.0).epsilon(1e-10));
    CHECK(p0.c == doctest::Approx(0.095).epsilon(1e-10));
    CHECK(p0.u_form1 == doctest::Approx(0.9).epsilon(1e-10));
    CHECK(p0.u_form2 == doctest::Approx(0.9).epsilon(1e-10));
    CHECK(p0.z == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(p0.lambda == doctest::Approx(110.80332409972299).epsilon(1e-8));
    CHECK(p0.mu == doctest::Approx(110.80332409972299).epsilon(1e-8));
    CHECK(p0.F == 0.0);
    CHECK(p0.B == 0.0);

    const SolutionPath::Point p100 = path.at(100.0);
    CHECK(p100.k == doctest::Approx(1.6487212707001281).epsilon(1e-8));
    CHECK(p100.F == doctest::Approx(10.526315789473684 *
                                    (1.0 - std::exp(-9.5)))
                        .epsilon(1e-8));

    CHECK(path.welfare().value == doctest::Approx(-208.91812865497076).epsilon(1e-6));
}

TEST_CASE("forced labor share bypasses the root solve") {
    const SolutionPath path =
        assemble_with_u0(p1(), p1_bgp_endowment(), 0.7);
    CHECK_FALSE(path.diagnostics().has_value());
    CHECK(path.calibration().u0 == 0.7);
    CHECK(path.at(0.0).u_form1 > 0.0);
    CHECK_THROWS_AS(assemble_with_u0(p1(), p1_bgp_endowment(), -0.1),
                    InvalidParamsError);
}
