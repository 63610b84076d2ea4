#include "lucas/calibration.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace lucas {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

constexpr double kScanEdge = 1e-6;  // scan (kScanEdge, 1 - kScanEdge)
constexpr int kScanPoints = 512;

Calibration build_calibration(const ModelParams& params, const DerivedConstants& d,
                              const InitialEndowment& endowment, double u0,
                              const ToleranceSettings& tol) {
    Calibration c;
    c.u0 = u0;
    c.z0 = std::pow(endowment.h0, d.eta) * u0 / endowment.k0;
    c.F_star = F_limit(params, d, c.z0, tol);
    c.B_star = B_limit(params, d, c.z0, tol);
    c.c0 = (endowment.k0 * c.z0 / c.F_star) *
           std::pow(c.z0, -params.beta / params.sigma);
    const Costates cs = costates_at(params, endowment.k0, endowment.h0, c.c0, u0);
    c.lambda0 = cs.lambda;
    c.mu0 = cs.mu;
    return c;
}

}  // namespace

double jump_residual(const ModelParams& params, const DerivedConstants& constants,
                     const InitialEndowment& endowment, double u0_trial,
                     const ToleranceSettings& tol) {
    if (!std::isfinite(u0_trial) || !(u0_trial > 0.0))
        throw Error("jump_residual: requires u0_trial > 0, got " + fmt(u0_trial));
    const double z0 = std::pow(endowment.h0, constants.eta) * u0_trial / endowment.k0;
    const double f_star = F_limit(params, constants, z0, tol);
    const double b_star = B_limit(params, constants, z0, tol);
    const double de = params.delta * constants.eta;
    return (constants.varphi + de * u0_trial) * f_star - de * u0_trial * b_star;
}

CalibrationResult calibrate(const ModelParams& params, const InitialEndowment& endowment,
                            const ToleranceSettings& tol) {
    const ValidationReport report = validate(params);
    if (!report.ok())
        throw InvalidParamsError("invalid parameters: " + report.summary());
    validate_endowment(endowment);
    const DerivedConstants d = derive_constants(params);

    auto G = [&](double u) { return jump_residual(params, d, endowment, u, tol); };
    const ScanReport scan = scan_brackets(G, kScanEdge, 1.0 - kScanEdge, kScanPoints);

    if (scan.brackets.empty())
        throw CalibrationError(
            "jump function has no sign change on (1e-6, 1 - 1e-6); no admissible "
            "interior labor share exists for this endowment");
    if (scan.brackets.size() > 1) {
        std::ostringstream msg;
        msg << "jump function changes sign " << scan.brackets.size()
            << " times on (1e-6, 1 - 1e-6):";
        for (const auto& b : scan.brackets)
            msg << " [" << fmt(b.lo) << ", " << fmt(b.hi) << "]";
        msg << "; the saddle path is not uniquely determined";
        throw CalibrationError(msg.str());
    }

    const Bracket bracket = scan.brackets.front();
    const RootResult root = find_root(G, bracket.lo, bracket.hi, tol.root_tol);

    CalibrationResult out;
    out.calibration = build_calibration(params, d, endowment, root.root, tol);
    out.diagnostics.residual = root.residual;
    out.diagnostics.bracket = bracket;
    out.diagnostics.iterations = root.iterations;
    out.diagnostics.scan_points = kScanPoints;
    out.diagnostics.nonfinite_samples = scan.nonfinite_samples;
    out.diagnostics.sign_changes = scan.brackets;

    const double scale = d.varphi * out.calibration.F_star;
    if (!(std::abs(root.residual) <= 10.0 * tol.root_tol * scale))
        throw CalibrationError("root refinement left a jump residual of " +
                               fmt(root.residual) + ", above the accepted bound");
    return out;
}

SolutionPath::SolutionPath(const ModelParams& params, const InitialEndowment& endowment,
                           const Calibration& calib, const ToleranceSettings& tol,
                           std::optional<CalibrationDiagnostics> diagnostics)
    : params_(params),
      constants_(derive_constants(params)),
      endowment_(endowment),
      calib_(calib),
      tol_(tol),
      diagnostics_(std::move(diagnostics)) {}

SolutionPath::Point SolutionPath::at(double t) const {
    Point p{};
    p.t = t;
    p.z = z_at(params_, constants_, calib_.z0, t);
    p.F = F_at(params_, constants_, calib_.z0, t, tol_);
    p.B = B_at(params_, constants_, calib_.z0, t, tol_);
    p.k = k_at(params_, constants_, calib_, endowment_, t, tol_);
    p.c = c_at(params_, constants_, calib_, endowment_, t, tol_);
    p.u_form1 = u_form1_at(params_, constants_, calib_, t, tol_);
    p.u_form2 = u_form2_at(params_, constants_, calib_, endowment_, t, tol_);
    p.h = h_at(params_, constants_, calib_, endowment_, t, p.u_form1, tol_);
    const Costates cs = costates_at(params_, p.k, p.h, p.c, p.u_form1);
    p.lambda = cs.lambda;
    p.mu = cs.mu;
    return p;
}

QuadratureResult SolutionPath::welfare() const {
    return lucas::welfare(params_, constants_, calib_, endowment_, tol_);
}

SolutionPath assemble_solution(const ModelParams& params, const InitialEndowment& endowment,
                               const ToleranceSettings& tol) {
    CalibrationResult result = calibrate(params, endowment, tol);
    return SolutionPath(params, endowment, result.calibration, tol,
                        std::move(result.diagnostics));
}

SolutionPath assemble_with_u0(const ModelParams& params, const InitialEndowment& endowment,
                              double u0, const ToleranceSettings& tol) {
    const ValidationReport report = validate(params);
    if (!report.ok())
        throw InvalidParamsError("invalid parameters: " + report.summary());
    validate_endowment(endowment);
    if (!std::isfinite(u0) || !(u0 > 0.0))
        throw InvalidParamsError("forced u0 must be positive, got " + fmt(u0));
    const DerivedConstants d = derive_constants(params);
    return SolutionPath(params, endowment, build_calibration(params, d, endowment, u0, tol),
                        tol, std::nullopt);
}

}  // namespace lucas
