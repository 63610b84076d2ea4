#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "lucas/calibration.hpp"
#include "lucas/verification.hpp"

namespace lucas {

// Decimal rendering with 12 significant digits, '.' separator; used by every
// CSV writer so printed files round-trip to the documented precision.
std::string format_number(double v);

// Trajectory table. Columns, in order:
//   t, k, h, c, u_form1, u_form2, z, lambda, mu, F, B, res_k, res_h, res_c, res_u
// where the res_* columns hold the scaled defect of the closed forms against the
// dynamical system (finite differences with step fd_step). '\n' line endings.
void write_trajectory_csv(std::ostream& out, const SolutionPath& path,
                          std::span<const double> grid, double fd_step);

// Calibration summary: parameters, endowment, derived constants, calibrated
// initial data, solver diagnostics, welfare, and validation warnings.
void write_solution_json(std::ostream& out, const SolutionPath& path);

// Verification report as structured JSON, checks in suite order.
void write_verification_json(std::ostream& out, const SolutionPath& path,
                             const VerificationReport& report);

// Side-by-side labor-share series: the two closed forms, the six-system
// simulation, and the scalar dynamics, plus relative gaps against u_form1.
// Columns: t, u_form1, u_form2, u_sim, u_ode, gap_form2, gap_sim, gap_ode.
void write_compare_csv(std::ostream& out, const SolutionPath& path,
                       const DenseTrajectory& foc_traj, const DenseTrajectory& u_traj,
                       std::span<const double> grid);

// Header line of the comparison table (used for the degenerate horizon-zero case).
void write_compare_header(std::ostream& out);

}  // namespace lucas
