#include "lucas/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lucas/calibration.hpp"
#include "lucas/foc.hpp"
#include "lucas/io.hpp"
#include "lucas/verification.hpp"

namespace lucas {

namespace {

namespace fs = std::filesystem;

// Finite-difference step of the residual columns in trajectory.csv; matches the
// verification suite's default so the two surfaces report the same quantity.
constexpr double kTrajectoryFdStep = 1e-4;

// Validates and calibrates (or applies the forced u0). Returns kExitOk and
// fills `out`, or logs the reason and returns the failure exit code.
int prepare_path(const RunConfig& cfg, std::ostream& log,
                 std::optional<SolutionPath>& out) {
    const ValidationReport vr = validate(cfg.params);
    for (const auto& v : vr.violations)
        if (v.severity == Severity::Warning)
            log << "warning [" << v.code << "]: " << v.message << "\n";
    if (!vr.ok()) {
        log << "invalid parameters: " << vr.summary() << "\n";
        return kExitInvalidParams;
    }
    try {
        validate_endowment(cfg.endowment);
    } catch (const InvalidParamsError& e) {
        log << "invalid endowment: " << e.what() << "\n";
        return kExitInvalidParams;
    }
    try {
        if (cfg.force_u0) {
            log << "forcing u0 = " << format_number(*cfg.force_u0)
                << " (calibration bypassed)\n";
            out = assemble_with_u0(cfg.params, cfg.endowment, *cfg.force_u0,
                                   cfg.tolerances);
        } else {
            out = assemble_solution(cfg.params, cfg.endowment, cfg.tolerances);
        }
    } catch (const InvalidParamsError& e) {
        log << "invalid parameters: " << e.what() << "\n";
        return kExitInvalidParams;
    } catch (const Error& e) {
        log << "calibration failed: " << e.what() << "\n";
        return kExitCalibrationFailure;
    }
    return kExitOk;
}

int ensure_output_dir(const std::string& dir, std::ostream& log) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        log << "cannot create output directory " << dir << ": " << ec.message()
            << "\n";
        return kExitIoFailure;
    }
    return kExitOk;
}

// Writes one artifact through `emit`, reporting open/write failures as I/O
// errors and evaluation aborts as numeric failures.
template <typename Emit>
int write_artifact(const fs::path& file, std::ostream& log, Emit&& emit) {
    std::ofstream ofs(file);
    if (!ofs) {
        log << "cannot open " << file.string() << " for writing\n";
        return kExitIoFailure;
    }
    try {
        emit(ofs);
    } catch (const Error& e) {
        log << "evaluation failed while writing " << file.string() << ": "
            << e.what() << "\n";
        return kExitCalibrationFailure;
    }
    ofs.flush();
    if (!ofs) {
        log << "write failed: " << file.string() << "\n";
        return kExitIoFailure;
    }
    return kExitOk;
}

void apply_override(ModelParams& p, InitialEndowment& e, const std::string& key,
                    double v) {
    if (key == "beta") p.beta = v;
    else if (key == "sigma") p.sigma = v;
    else if (key == "rho") p.rho = v;
    else if (key == "delta") p.delta = v;
    else if (key == "gamma") p.gamma = v;
    else if (key == "pi") p.pi = v;
    else if (key == "theta") p.theta = v;
    else if (key == "k0") e.k0 = v;
    else if (key == "h0") e.h0 = v;
    else throw ConfigError("unknown sweep key: " + key);
}

// Status literal of the first feasibility violation, or empty when the code is
// a parameter-bound violation.
std::string infeasible_status(const std::string& code) {
    if (code == "xi_nonpositive") return "infeasible: xi<=0";
    if (code == "xi_le_varphi") return "infeasible: xi<=varphi";
    if (code == "u_star_ge_one") return "infeasible: u_star>=1";
    return {};
}

struct SweepRow {
    std::string status;
    std::optional<double> u0, u_star, F_star, B_star, jump_residual;
    std::string admissible;  // "yes" / "no" / empty when not evaluated
};

SweepRow evaluate_sweep_point(const ModelParams& p, const InitialEndowment& e,
                              const RunConfig& cfg) {
    SweepRow row;
    const ValidationReport vr = validate(p);
    if (!vr.ok()) {
        std::string code;
        for (const auto& v : vr.violations)
            if (v.severity == Severity::Error) { code = v.code; break; }
        const std::string feas = infeasible_status(code);
        if (feas.empty()) {
            row.status = "invalid: " + code;
            return row;  // bounds failed: no derived constants exist
        }
        row.status = feas;
        row.u_star = derive_constants(p).u_star;
        return row;
    }
    const DerivedConstants d = derive_constants(p);
    row.u_star = d.u_star;
    try {
        validate_endowment(e);
    } catch (const InvalidParamsError&) {
        row.status = "invalid: endowment";
        return row;
    }
    try {
        const CalibrationResult result = calibrate(p, e, cfg.tolerances);
        row.status = "ok";
        row.u0 = result.calibration.u0;
        row.F_star = result.calibration.F_star;
        row.B_star = result.calibration.B_star;
        row.jump_residual = result.diagnostics.residual;
        // Admissibility verdict on a grid capped at ~200 points so wide sweeps
        // stay fast; the dedicated verify command owns the fine-grid check.
        const SolutionPath path(p, e, result.calibration, cfg.tolerances,
                                result.diagnostics);
        const double step = std::max(cfg.output_step, cfg.horizon / 200.0);
        try {
            const CheckResult check =
                check_admissibility(path, make_grid(0.0, cfg.horizon, step));
            row.admissible = check.verdict == Verdict::Pass ? "yes" : "no";
        } catch (const Error&) {
            row.admissible = "no";
        }
    } catch (const Error&) {
        row.status = "calibration_failed";
    }
    return row;
}

std::string cell(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string{};
}

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
    std::optional<SolutionPath> path;
    if (int rc = prepare_path(cfg, log, path); rc != kExitOk) return rc;
    if (int rc = ensure_output_dir(cfg.output_dir, log); rc != kExitOk) return rc;

    const Calibration& c = path->calibration();
    log << "calibrated: u0 = " << format_number(c.u0) << ", c0 = "
        << format_number(c.c0) << ", F_star = " << format_number(c.F_star)
        << ", B_star = " << format_number(c.B_star) << "\n";

    const fs::path dir(cfg.output_dir);
    const auto grid = make_grid(0.0, cfg.horizon, cfg.output_step);

    const fs::path traj = dir / "trajectory.csv";
    if (int rc = write_artifact(traj, log, [&](std::ostream& ofs) {
            write_trajectory_csv(ofs, *path, grid, kTrajectoryFdStep);
        });
        rc != kExitOk)
        return rc;
    log << "wrote " << traj.string() << " (" << grid.size() << " rows)\n";

    const fs::path sol = dir / "solution.json";
    if (int rc = write_artifact(
            sol, log, [&](std::ostream& ofs) { write_solution_json(ofs, *path); });
        rc != kExitOk)
        return rc;
    log << "wrote " << sol.string() << "\n";
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
    std::optional<SolutionPath> path;
    if (int rc = prepare_path(cfg, log, path); rc != kExitOk) return rc;
    if (int rc = ensure_output_dir(cfg.output_dir, log); rc != kExitOk) return rc;

    VerificationSettings settings;
    settings.admis_horizon = cfg.horizon;
    settings.admis_step = cfg.output_step;
    settings.compare_horizon = cfg.compare_horizon;
    const VerificationReport report = run_all_checks(*path, settings);
    for (const auto& c : report.checks) {
        const char* tag = c.verdict == Verdict::Pass   ? "pass"
                          : c.verdict == Verdict::Fail ? "FAIL"
                                                       : "info";
        log << "[" << tag << "] " << c.name << ": " << c.note << "\n";
    }

    const fs::path file = fs::path(cfg.output_dir) / "verification.json";
    if (int rc = write_artifact(file, log, [&](std::ostream& ofs) {
            write_verification_json(ofs, *path, report);
        });
        rc != kExitOk)
        return rc;
    log << "wrote " << file.string() << "\n";
    return report.all_passed() ? kExitOk : kExitVerificationFailure;
}

int cmd_compare(const RunConfig& cfg, std::ostream& log) {
    std::optional<SolutionPath> path;
    if (int rc = prepare_path(cfg, log, path); rc != kExitOk) return rc;
    if (int rc = ensure_output_dir(cfg.output_dir, log); rc != kExitOk) return rc;

    const fs::path file = fs::path(cfg.output_dir) / "compare.csv";
    if (cfg.compare_horizon == 0.0) {
        if (int rc = write_artifact(
                file, log, [&](std::ostream& ofs) { write_compare_header(ofs); });
            rc != kExitOk)
            return rc;
        log << "comparison horizon is 0; wrote header-only " << file.string()
            << "\n";
        return kExitOk;
    }

    const Calibration& c = path->calibration();
    StateVector initial;
    initial.k = path->endowment().k0;
    initial.h = path->endowment().h0;
    initial.c = c.c0;
    initial.u = c.u0;
    initial.lambda = c.lambda0;
    initial.mu = c.mu0;

    DenseTrajectory foc_traj, u_traj;
    try {
        foc_traj = simulate_foc(path->params(), path->constants(), initial,
                                cfg.compare_horizon, cfg.tolerances);
        u_traj = simulate_scalar_u(path->params(), path->constants(), c,
                                   cfg.compare_horizon, cfg.tolerances);
    } catch (const Error& e) {
        log << "simulation aborted: " << e.what() << "\n";
        return kExitCalibrationFailure;
    }

    const auto grid = make_grid(0.0, cfg.compare_horizon, cfg.output_step);
    if (int rc = write_artifact(file, log, [&](std::ostream& ofs) {
            write_compare_csv(ofs, *path, foc_traj, u_traj, grid);
        });
        rc != kExitOk)
        return rc;
    log << "wrote " << file.string() << " (" << grid.size() << " rows)\n";
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
    if (cfg.sweep.empty()) {
        log << "sweep requires a non-empty \"sweep\" block in the configuration\n";
        return kExitInvalidParams;
    }
    if (int rc = ensure_output_dir(cfg.output_dir, log); rc != kExitOk) return rc;

    std::vector<std::string> keys;
    std::vector<const std::vector<double>*> values;
    for (const auto& [key, vals] : cfg.sweep) {
        keys.push_back(key);
        values.push_back(&vals);
    }

    const fs::path file = fs::path(cfg.output_dir) / "sweep.csv";
    std::size_t rows = 0, ok_rows = 0;
    const int rc = write_artifact(file, log, [&](std::ostream& ofs) {
        for (const auto& key : keys) ofs << key << ',';
        ofs << "status,u0,u_star,F_star,B_star,jump_residual,admissible\n";

        std::vector<std::size_t> idx(keys.size(), 0);
        while (true) {
            ModelParams p = cfg.params;
            InitialEndowment e = cfg.endowment;
            for (std::size_t i = 0; i < keys.size(); ++i)
                apply_override(p, e, keys[i], (*values[i])[idx[i]]);

            const SweepRow row = evaluate_sweep_point(p, e, cfg);
            for (std::size_t i = 0; i < keys.size(); ++i)
                ofs << format_number((*values[i])[idx[i]]) << ',';
            ofs << row.status << ',' << cell(row.u0) << ',' << cell(row.u_star)
                << ',' << cell(row.F_star) << ',' << cell(row.B_star) << ','
                << cell(row.jump_residual) << ',' << row.admissible << '\n';
            ++rows;
            if (row.status == "ok") ++ok_rows;

            // Odometer over the grid, last key fastest: lexicographic order.
            std::size_t j = idx.size();
            for (;;) {
                if (j == 0) return;
                --j;
                if (++idx[j] < values[j]->size()) break;
                idx[j] = 0;
            }
        }
    });
    if (rc != kExitOk) return rc;
    log << "wrote " << file.string() << " (" << rows << " rows, " << ok_rows
        << " calibrated)\n";
    return kExitOk;
}

}  // namespace lucas
