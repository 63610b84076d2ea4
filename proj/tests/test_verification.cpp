#include "doctest.h"

#include <cmath>
#include <string>

#include "lucas/verification.hpp"
#include "test_support.hpp"

using namespace lucas;
using namespace lucas::testing;

namespace {

double metric(const CheckResult& c, const std::string& key) {
    for (const auto& [k, v] : c.metrics)
        if (k == key) return v;
    FAIL("metric not found: ", key);
    return 0.0;
}

const CheckResult& find_check(const VerificationReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return c;
    REQUIRE(false);
    return r.checks.front();
}

}  // namespace

TEST_CASE("uniform grid construction") {
    const auto fine = make_grid(0.0, 200.0, 0.1);
    CHECK(fine.size() == 2001);
    CHECK(fine.front() == 0.0);
    CHECK(fine.back() == 200.0);
    for (std::size_t i = 1; i < fine.size(); ++i) CHECK(fine[i] > fine[i - 1]);

    const auto ragged = make_grid(0.0, 10.0, 3.0);
    CHECK(ragged == std::vector<double>{0.0, 3.0, 6.0, 9.0, 10.0});

    CHECK(make_grid(0.0, 0.0, 0.5) == std::vector<double>{0.0});
    CHECK_THROWS_AS(make_grid(1.0, 0.0, 0.5), Error);
    CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.0), Error);
}

TEST_CASE("finite-difference derivative is second order") {
    const ScalarFn cube = [](double t) { return t * t * t; };
    // Central stencil away from the edge, one-sided at the origin.
    CHECK(fd_derivative(cube, 2.0, 1e-5) == doctest::Approx(12.0).epsilon(1e-9));
    CHECK(fd_derivative(cube, 0.0, 1e-5) == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("full suite passes on the balanced path, reference set 1") {
    const SolutionPath path = assemble_solution(p1(), p1_bgp_endowment());
    const VerificationReport report = run_all_checks(path);
    CHECK(report.all_passed());
    REQUIRE(report.checks.size() == 7);

    // Check order and names are the stable output contract.
    CHECK(report.checks[0].name == "equivalence_u_forms");
    CHECK(report.checks[1].name == "uniqueness_scalar_ode");
    CHECK(report.checks[2].name == "admissibility");
    CHECK(report.checks[3].name == "transversality");
    CHECK(report.checks[4].name == "foc_residuals");
    CHECK(report.checks[5].name == "bgp_asymptotics");
    CHECK(report.checks[6].name == "closed_vs_simulated");

    const CheckResult& admis = find_check(report, "admissibility");
    CHECK(metric(admis, "u_min") == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(metric(admis, "u_max") == doctest::Approx(0.9).epsilon(1e-6));

    // Both discounted products decay at rho + (sigma - 1) chi = 0.045.
    const CheckResult& trans = find_check(report, "transversality");
    CHECK(metric(trans, "lambda_k_decay_rate") == doctest::Approx(0.045).epsilon(1e-3));
    CHECK(metric(trans, "mu_h_decay_rate") == doctest::Approx(0.045).epsilon(1e-3));
}

TEST_CASE("full suite passes off the balanced path") {
    const SolutionPath path = assemble_solution(p1(), {1.0, 1.0});
    const VerificationReport report = run_all_checks(path);
    CHECK(report.all_passed());

    const CheckResult& admis = find_check(report, "admissibility");
    CHECK(metric(admis, "u_min") == doctest::Approx(0.8675031578).epsilon(1e-6));
    CHECK(metric(admis, "u_max") == doctest::Approx(0.8999984434).epsilon(1e-6));

    const CheckResult& equiv = find_check(report, "equivalence_u_forms");
    CHECK(metric(equiv, "max_rel_gap") < 1e-5);
}

TEST_CASE("suite passes on reference set 2") {
    const SolutionPath path = assemble_solution(p2(), p2_bgp_endowment());
    CHECK(run_all_checks(path).all_passed());
}

TEST_CASE("an inadmissible forced labor share fails loudly but completely") {
    const SolutionPath path = assemble_with_u0(p1(), p1_bgp_endowment(), 1.5);
    const VerificationReport report = run_all_checks(path);
    CHECK_FALSE(report.all_passed());
    CHECK(report.checks.size() == 7);  // every check delivers a verdict
    CHECK(find_check(report, "admissibility").verdict == Verdict::Fail);
    for (const auto& c : report.checks) CHECK_FALSE(c.note.empty());
}

TEST_CASE("a slightly perturbed labor share is caught by the equivalence check") {
    // u0 off the saddle value by 1e-3. Each closed form on its own still
    // satisfies the scalar labor-share dynamics, so the consistency signal is
    // the gap between the two forms (and the resulting admissibility breach),
    // not the uniqueness check.
    const SolutionPath path = assemble_with_u0(p1(), p1_bgp_endowment(), 0.901);
    const VerificationReport report = run_all_checks(path);
    CHECK_FALSE(report.all_passed());
    CHECK(find_check(report, "equivalence_u_forms").verdict == Verdict::Fail);
    CHECK(find_check(report, "uniqueness_scalar_ode").verdict == Verdict::Pass);
    CHECK(find_check(report, "admissibility").verdict == Verdict::Fail);
}

TEST_CASE("verification settings drive the grids") {
    const SolutionPath path = assemble_solution(p1(), p1_bgp_endowment());
    VerificationSettings s;
    s.compare_horizon = 0.0;  // degenerate comparison collapses to t = 0
    const VerificationReport report = run_all_checks(path, s);
    CHECK(report.all_passed());
}
