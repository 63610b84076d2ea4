#pragma once

#include <iosfwd>

#include "lucas/config.hpp"

namespace lucas {

// Process exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidParams = 1;      // validation rejected the model
inline constexpr int kExitCalibrationFailure = 2; // root solve or evaluation failed
inline constexpr int kExitVerificationFailure = 3;// a verification check failed
inline constexpr int kExitIoFailure = 4;          // output could not be written

// Calibrates and writes trajectory.csv + solution.json into cfg.output_dir.
int cmd_solve(const RunConfig& cfg, std::ostream& log);

// Runs the verification suite and writes verification.json; the report is
// written even when checks fail (the failure only decides the exit code).
int cmd_verify(const RunConfig& cfg, std::ostream& log);

// Simulates the six-equation system and the scalar labor-share dynamics and
// writes compare.csv with both closed forms side by side.
int cmd_compare(const RunConfig& cfg, std::ostream& log);

// Visits every point of the configured parameter grid and writes sweep.csv,
// one summary row per point; invalid or infeasible points become rows with a
// reason, never a fatal error.
int cmd_sweep(const RunConfig& cfg, std::ostream& log);

}  // namespace lucas
