#include "lucas/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <nlohmann/json.hpp>

namespace lucas {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Info: return "info";
    }
    return "unknown";
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const SolutionPath& path,
                          std::span<const double> grid, double fd_step) {
    out << "t,k,h,c,u_form1,u_form2,z,lambda,mu,F,B,res_k,res_h,res_c,res_u\n";
    for (double t : grid) {
        const SolutionPath::Point p = path.at(t);
        const ResidualSample r = foc_residuals_at(path, t, fd_step);
        out << format_number(p.t) << ',' << format_number(p.k) << ','
            << format_number(p.h) << ',' << format_number(p.c) << ','
            << format_number(p.u_form1) << ',' << format_number(p.u_form2) << ','
            << format_number(p.z) << ',' << format_number(p.lambda) << ','
            << format_number(p.mu) << ',' << format_number(p.F) << ','
            << format_number(p.B) << ',' << format_number(r.res_k) << ','
            << format_number(r.res_h) << ',' << format_number(r.res_c) << ','
            << format_number(r.res_u) << '\n';
    }
}

void write_solution_json(std::ostream& out, const SolutionPath& path) {
    const ModelParams& p = path.params();
    const DerivedConstants& d = path.constants();
    const Calibration& c = path.calibration();

    ordered_json j;
    j["params"]["beta"] = p.beta;
    j["params"]["sigma"] = p.sigma;
    j["params"]["rho"] = p.rho;
    j["params"]["delta"] = p.delta;
    j["params"]["gamma"] = p.gamma;
    j["params"]["pi"] = p.pi;
    j["params"]["theta"] = p.theta;
    j["endowment"]["k0"] = path.endowment().k0;
    j["endowment"]["h0"] = path.endowment().h0;
    j["derived"]["eta"] = d.eta;
    j["derived"]["phi"] = d.phi;
    j["derived"]["chi"] = d.chi;
    j["derived"]["xi"] = d.xi;
    j["derived"]["varphi"] = d.varphi;
    j["derived"]["a"] = d.a;
    j["derived"]["z_star"] = d.z_star;
    j["derived"]["u_star"] = d.u_star;
    j["calibration"]["u0"] = c.u0;
    j["calibration"]["c0"] = c.c0;
    j["calibration"]["z0"] = c.z0;
    j["calibration"]["F_star"] = c.F_star;
    j["calibration"]["B_star"] = c.B_star;
    j["calibration"]["lambda0"] = c.lambda0;
    j["calibration"]["mu0"] = c.mu0;
    j["calibration"]["mode"] = path.diagnostics() ? "solved" : "forced";
    if (path.diagnostics()) {
        const CalibrationDiagnostics& g = *path.diagnostics();
        j["diagnostics"]["residual"] = g.residual;
        j["diagnostics"]["bracket"] = {g.bracket.lo, g.bracket.hi};
        j["diagnostics"]["iterations"] = g.iterations;
        j["diagnostics"]["scan_points"] = g.scan_points;
        j["diagnostics"]["nonfinite_samples"] = g.nonfinite_samples;
        auto& changes = j["diagnostics"]["sign_changes"] = ordered_json::array();
        for (const auto& b : g.sign_changes) changes.push_back({b.lo, b.hi});
    }
    try {
        const QuadratureResult w = path.welfare();
        j["welfare"]["value"] = w.value;
        j["welfare"]["error_estimate"] = w.error_estimate;
    } catch (const EvaluationError& e) {
        j["welfare"] = nullptr;
        j["welfare_note"] = e.what();
    }
    auto& warnings = j["warnings"] = ordered_json::array();
    for (const auto& v : validate(p).violations)
        if (v.severity == Severity::Warning) warnings.push_back(v.message);
    out << j.dump(2) << '\n';
}

void write_verification_json(std::ostream& out, const SolutionPath& path,
                             const VerificationReport& report) {
    ordered_json j;
    j["all_passed"] = report.all_passed();
    j["calibration"]["u0"] = path.calibration().u0;
    j["calibration"]["mode"] = path.diagnostics() ? "solved" : "forced";
    auto& checks = j["checks"] = ordered_json::array();
    for (const auto& c : report.checks) {
        ordered_json jc;
        jc["name"] = c.name;
        jc["verdict"] = verdict_name(c.verdict);
        jc["note"] = c.note;
        auto& metrics = jc["metrics"] = ordered_json::object();
        for (const auto& [key, value] : c.metrics) metrics[key] = value;
        checks.push_back(std::move(jc));
    }
    out << j.dump(2) << '\n';
}

void write_compare_header(std::ostream& out) {
    out << "t,u_form1,u_form2,u_sim,u_ode,gap_form2,gap_sim,gap_ode\n";
}

void write_compare_csv(std::ostream& out, const SolutionPath& path,
                       const DenseTrajectory& foc_traj, const DenseTrajectory& u_traj,
                       std::span<const double> grid) {
    write_compare_header(out);
    const auto& p = path.params();
    const auto& d = path.constants();
    const auto& calib = path.calibration();
    const auto& tol = path.tolerances();
    std::array<double, 6> y{};
    for (double t : grid) {
        const double u1 = u_form1_at(p, d, calib, t, tol);
        const double u2 = u_form2_at(p, d, calib, path.endowment(), t, tol);
        foc_traj.eval(t, y);
        const double u_sim = y[3];
        const double u_ode = u_traj.eval_scalar(t);
        const double scale = std::max(std::abs(u1), 1e-300);
        out << format_number(t) << ',' << format_number(u1) << ','
            << format_number(u2) << ',' << format_number(u_sim) << ','
            << format_number(u_ode) << ',' << format_number(std::abs(u2 - u1) / scale)
            << ',' << format_number(std::abs(u_sim - u1) / scale) << ','
            << format_number(std::abs(u_ode - u1) / scale) << '\n';
    }
}

}  // namespace lucas
