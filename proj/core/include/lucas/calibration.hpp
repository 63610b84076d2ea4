#pragma once

#include <optional>
#include <vector>

#include "lucas/closed_form.hpp"
#include "lucas/model.hpp"
#include "lucas/numerics.hpp"

namespace lucas {

// Value of the jump function
//   G(u0) = (varphi + delta eta u0) F*(u0) - delta eta u0 B*(u0),
// where F* and B* are evaluated along the z-path started at z0 = h0^eta u0 / k0.
// Its unique interior zero selects the saddle path. Requires u0_trial > 0.
double jump_residual(const ModelParams& params, const DerivedConstants& constants,
                     const InitialEndowment& endowment, double u0_trial,
                     const ToleranceSettings& tol = {});

struct CalibrationDiagnostics {
    double residual = 0.0;          // G at the refined u0
    Bracket bracket{};              // sign-change interval the refinement started from
    int iterations = 0;             // root-refinement iterations
    int scan_points = 0;            // grid resolution of the bracket scan
    int nonfinite_samples = 0;      // skipped scan samples
    std::vector<Bracket> sign_changes;  // every bracket the scan found
};

struct CalibrationResult {
    Calibration calibration;
    CalibrationDiagnostics diagnostics;
};

// Pins down the unique interior u0 by a leftmost-first bracket scan of G over
// (1e-6, 1 - 1e-6) followed by root refinement. Throws InvalidParamsError when
// validation fails, CalibrationError when the scan finds no sign change or more
// than one (either would make "the" saddle path ill-defined).
CalibrationResult calibrate(const ModelParams& params, const InitialEndowment& endowment,
                            const ToleranceSettings& tol = {});

// Everything downstream consumers need to evaluate the solved model: parameters,
// derived constants, endowment, calibration, and the tolerance settings the
// closed forms should be evaluated with.
class SolutionPath {
public:
    SolutionPath(const ModelParams& params, const InitialEndowment& endowment,
                 const Calibration& calib, const ToleranceSettings& tol,
                 std::optional<CalibrationDiagnostics> diagnostics = std::nullopt);

    const ModelParams& params() const { return params_; }
    const DerivedConstants& constants() const { return constants_; }
    const InitialEndowment& endowment() const { return endowment_; }
    const Calibration& calibration() const { return calib_; }
    const ToleranceSettings& tolerances() const { return tol_; }
    const std::optional<CalibrationDiagnostics>& diagnostics() const {
        return diagnostics_;
    }

    // All closed-form quantities at one instant (costates from the static
    // first-order conditions, human capital fed by u-form 1).
    struct Point {
        double t, k, h, c, u_form1, u_form2, z, lambda, mu, F, B;
    };
    Point at(double t) const;

    QuadratureResult welfare() const;

private:
    ModelParams params_;
    DerivedConstants constants_;
    InitialEndowment endowment_;
    Calibration calib_;
    ToleranceSettings tol_;
    std::optional<CalibrationDiagnostics> diagnostics_;
};

// Calibrates and bundles the result.
SolutionPath assemble_solution(const ModelParams& params, const InitialEndowment& endowment,
                               const ToleranceSettings& tol = {});

// Bypasses the root solve and builds the path from a caller-chosen u0 (debug
// hook: lets the verification suite demonstrate what failure looks like).
// Requires u0 > 0; admissibility is deliberately not enforced here.
SolutionPath assemble_with_u0(const ModelParams& params, const InitialEndowment& endowment,
                              double u0, const ToleranceSettings& tol = {});

}  // namespace lucas
