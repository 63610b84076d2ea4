#include "lucas/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>

namespace lucas {

namespace {

constexpr double kMachEps = std::numeric_limits<double>::epsilon();

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Dormand-Prince 5(4) tableau, first-same-as-last form.
namespace tab {
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// Difference between the fifth-order solution and the embedded fourth-order one.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Weights of the fourth-order continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace tab

struct StageBuffers {
    std::vector<double> k1, k2, k3, k4, k5, k6, k7, ytmp;
    explicit StageBuffers(std::size_t n)
        : k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n) {}
};

// One trial step from (t, y) with k1 = f(t, y) already filled. Writes the
// fifth-order result into ynew and f(t+h, ynew) into k7. Returns false when any
// intermediate value is non-finite (caller treats that as a rejected step).
bool try_step(const OdeRhs& rhs, double t, std::span<const double> y, double h,
              StageBuffers& s, std::span<double> ynew) {
    using namespace tab;
    const std::size_t n = y.size();

    for (std::size_t i = 0; i < n; ++i) s.ytmp[i] = y[i] + h * a21 * s.k1[i];
    if (!all_finite(s.ytmp)) return false;
    rhs(t + c2 * h, s.ytmp, s.k2);
    if (!all_finite(s.k2)) return false;

    for (std::size_t i = 0; i < n; ++i)
        s.ytmp[i] = y[i] + h * (a31 * s.k1[i] + a32 * s.k2[i]);
    if (!all_finite(s.ytmp)) return false;
    rhs(t + c3 * h, s.ytmp, s.k3);
    if (!all_finite(s.k3)) return false;

    for (std::size_t i = 0; i < n; ++i)
        s.ytmp[i] = y[i] + h * (a41 * s.k1[i] + a42 * s.k2[i] + a43 * s.k3[i]);
    if (!all_finite(s.ytmp)) return false;
    rhs(t + c4 * h, s.ytmp, s.k4);
    if (!all_finite(s.k4)) return false;

    for (std::size_t i = 0; i < n; ++i)
        s.ytmp[i] = y[i] + h * (a51 * s.k1[i] + a52 * s.k2[i] + a53 * s.k3[i] + a54 * s.k4[i]);
    if (!all_finite(s.ytmp)) return false;
    rhs(t + c5 * h, s.ytmp, s.k5);
    if (!all_finite(s.k5)) return false;

    for (std::size_t i = 0; i < n; ++i)
        s.ytmp[i] = y[i] + h * (a61 * s.k1[i] + a62 * s.k2[i] + a63 * s.k3[i] +
                                a64 * s.k4[i] + a65 * s.k5[i]);
    if (!all_finite(s.ytmp)) return false;
    rhs(t + h, s.ytmp, s.k6);
    if (!all_finite(s.k6)) return false;

    for (std::size_t i = 0; i < n; ++i)
        ynew[i] = y[i] + h * (b1 * s.k1[i] + b3 * s.k3[i] + b4 * s.k4[i] +
                              b5 * s.k5[i] + b6 * s.k6[i]);
    if (!all_finite(ynew)) return false;
    rhs(t + h, ynew, s.k7);
    return all_finite(s.k7);
}

double error_norm(std::span<const double> y, std::span<const double> ynew, double h,
                  const StageBuffers& s, double rtol, double atol) {
    using namespace tab;
    const std::size_t n = y.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double erri = h * (e1 * s.k1[i] + e3 * s.k3[i] + e4 * s.k4[i] +
                                 e5 * s.k5[i] + e6 * s.k6[i] + e7 * s.k7[i]);
        const double sk = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        acc += (erri / sk) * (erri / sk);
    }
    return std::sqrt(acc / static_cast<double>(n));
}

// Starting step size by the standard two-derivative estimate.
double initial_step(const OdeRhs& rhs, double t0, std::span<const double> y,
                    std::span<const double> f0, double t1, double rtol, double atol,
                    std::vector<double>& ytmp, std::vector<double>& f1) {
    const std::size_t n = y.size();
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sk = atol + rtol * std::abs(y[i]);
        dnf += (f0[i] / sk) * (f0[i] / sk);
        dny += (y[i] / sk) * (y[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, t1 - t0);

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * f0[i];
    double der2 = 0.0;
    bool usable = all_finite(ytmp);
    if (usable) {
        rhs(t0 + h, ytmp, f1);
        usable = all_finite(f1);
    }
    if (usable) {
        for (std::size_t i = 0; i < n; ++i) {
            const double sk = atol + rtol * std::abs(y[i]);
            der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
        }
        der2 = std::sqrt(der2) / h;
    }
    const double der12 = std::max(std::sqrt(dnf), der2);
    const double h1 =
        (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, t1 - t0});
}

}  // namespace

// Append-only access used by the integrator while a trajectory is under
// construction; the partially built trajectory stays valid for evaluation so
// step observers can interrogate it.
class TrajectoryBuilder {
public:
    explicit TrajectoryBuilder(std::size_t dim) { traj_.dim_ = dim; }

    void start(double t0, std::span<const double> y0) {
        traj_.times_.push_back(t0);
        traj_.states_.insert(traj_.states_.end(), y0.begin(), y0.end());
    }

    void push_step(double t_new, std::span<const double> y_new,
                   std::span<const double> cont) {
        traj_.times_.push_back(t_new);
        traj_.states_.insert(traj_.states_.end(), y_new.begin(), y_new.end());
        traj_.coeffs_.insert(traj_.coeffs_.end(), cont.begin(), cont.end());
    }

    const DenseTrajectory& current() const { return traj_; }
    DenseTrajectory take() { return std::move(traj_); }

private:
    DenseTrajectory traj_;
};

std::span<const double> DenseTrajectory::state(std::size_t i) const {
    if (i >= size()) throw Error("DenseTrajectory::state: index out of range");
    return {states_.data() + i * dim_, dim_};
}

std::size_t DenseTrajectory::segment_index(double t) const {
    // first breakpoint strictly greater than t, minus one
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

void DenseTrajectory::eval(double t, std::span<double> out) const {
    if (times_.empty()) throw Error("DenseTrajectory::eval: empty trajectory");
    if (out.size() != dim_) throw Error("DenseTrajectory::eval: output size mismatch");
    if (!(t >= times_.front() && t <= times_.back()))
        throw Error("DenseTrajectory::eval: t = " + fmt(t) + " outside [" +
                    fmt(times_.front()) + ", " + fmt(times_.back()) + "]");

    // Exact breakpoints return the accepted state itself, bit for bit.
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it != times_.end() && *it == t) {
        const std::size_t i = static_cast<std::size_t>(it - times_.begin());
        std::copy_n(states_.begin() + i * dim_, dim_, out.begin());
        return;
    }

    const std::size_t seg = segment_index(t);
    const double h = times_[seg + 1] - times_[seg];
    const double th = (t - times_[seg]) / h;
    const double th1 = 1.0 - th;
    const double* c = coeffs_.data() + seg * 5 * dim_;
    for (std::size_t i = 0; i < dim_; ++i) {
        out[i] = c[i] + th * (c[dim_ + i] +
                              th1 * (c[2 * dim_ + i] +
                                     th * (c[3 * dim_ + i] + th1 * c[4 * dim_ + i])));
    }
}

std::vector<double> DenseTrajectory::eval(double t) const {
    std::vector<double> out(dim_);
    eval(t, out);
    return out;
}

double DenseTrajectory::eval_scalar(double t) const {
    if (dim_ != 1) throw Error("DenseTrajectory::eval_scalar: trajectory is not scalar");
    double out;
    eval(t, {&out, 1});
    return out;
}

DenseTrajectory integrate_ode(const OdeRhs& rhs, std::span<const double> y0,
                              double t0, double t1, const ToleranceSettings& tol,
                              const StepObserver& on_step) {
    const std::size_t n = y0.size();
    if (n == 0) throw Error("integrate_ode: empty initial state");
    if (!all_finite(y0) || !std::isfinite(t0) || !std::isfinite(t1))
        throw Error("integrate_ode: non-finite input");
    if (!(t1 >= t0)) throw Error("integrate_ode: requires t1 >= t0");

    TrajectoryBuilder builder(n);
    builder.start(t0, y0);
    if (t1 == t0) return builder.take();

    const double rtol = tol.ode_rel_tol, atol = tol.ode_abs_tol;
    const double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
    const double facc1 = 5.0, facc2 = 0.1;  // step-ratio clamps

    std::vector<double> y(y0.begin(), y0.end()), ynew(n), cont(5 * n), f1(n);
    StageBuffers s(n);

    rhs(t0, y, s.k1);
    if (!all_finite(s.k1))
        throw NumericsError("integrate_ode: non-finite right-hand side at t = " + fmt(t0));

    double h = initial_step(rhs, t0, y, s.k1, t1, rtol, atol, s.ytmp, f1);
    double t = t0;
    double facold = 1e-4;
    bool reject = false;
    bool nonfinite_reject = false;
    long n_steps = 0;

    while (true) {
        if (++n_steps > tol.max_steps)
            throw NumericsError("integrate_ode: step budget exhausted at t = " + fmt(t));
        if (0.1 * h <= std::abs(t) * kMachEps || h < 1e-300)
            throw NumericsError(nonfinite_reject
                                    ? "integrate_ode: persistent non-finite right-hand "
                                      "side near t = " + fmt(t)
                                    : "integrate_ode: step size underflow at t = " + fmt(t));

        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }

        const bool ok = try_step(rhs, t, y, h, s, ynew);
        const double err = ok ? error_norm(y, ynew, h, s, rtol, atol)
                              : std::numeric_limits<double>::infinity();
        nonfinite_reject = !ok;

        const double fac11 = std::pow(err, expo1);
        double fac = fac11 / std::pow(facold, beta);
        fac = std::max(facc2, std::min(facc1, fac / safe));
        double hnew = h / fac;

        if (err <= 1.0) {
            facold = std::max(err, 1e-4);
            using namespace tab;
            for (std::size_t i = 0; i < n; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = h * s.k1[i] - ydiff;
                cont[i] = y[i];
                cont[n + i] = ydiff;
                cont[2 * n + i] = bspl;
                cont[3 * n + i] = ydiff - h * s.k7[i] - bspl;
                cont[4 * n + i] = h * (d1 * s.k1[i] + d3 * s.k3[i] + d4 * s.k4[i] +
                                       d5 * s.k5[i] + d6 * s.k6[i] + d7 * s.k7[i]);
            }
            const double t_acc = last ? t1 : t + h;
            builder.push_step(t_acc, ynew, cont);
            if (on_step) on_step(builder.current());
            if (last) break;
            t = t_acc;
            std::copy(ynew.begin(), ynew.end(), y.begin());
            std::copy(s.k7.begin(), s.k7.end(), s.k1.begin());  // first-same-as-last
            if (reject) hnew = std::min(hnew, h);
            reject = false;
            h = hnew;
        } else {
            reject = true;
            h = h / std::min(facc1, fac11 / safe);
        }
    }
    return builder.take();
}

std::vector<double> integrate_ode_fixed(const OdeRhs& rhs, std::span<const double> y0,
                                        double t0, double t1, int n_steps) {
    const std::size_t n = y0.size();
    if (n == 0) throw Error("integrate_ode_fixed: empty initial state");
    if (n_steps <= 0) throw Error("integrate_ode_fixed: n_steps must be positive");
    if (!(t1 >= t0)) throw Error("integrate_ode_fixed: requires t1 >= t0");

    std::vector<double> y(y0.begin(), y0.end()), ynew(n);
    StageBuffers s(n);
    const double h = (t1 - t0) / n_steps;
    for (int step = 0; step < n_steps; ++step) {
        const double t = t0 + step * h;
        rhs(t, y, s.k1);
        if (!all_finite(s.k1) || !try_step(rhs, t, y, h, s, ynew))
            throw NumericsError("integrate_ode_fixed: non-finite value at t = " + fmt(t));
        std::copy(ynew.begin(), ynew.end(), y.begin());
    }
    return y;
}

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1]; Kronrod nodes xgk with
// weights wgk, the embedded 7-point Gauss rule sits on the odd-index nodes
// (weights wg, last entry is the centre).
namespace gk {
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace gk

struct PanelEval {
    double integral;
    double error;
};

PanelEval gk15(const ScalarFn& f, double a, double b) {
    const double centre = 0.5 * (a + b), hh = 0.5 * (b - a);
    auto sample = [&](double x) {
        const double v = f(x);
        if (!std::isfinite(v))
            throw NumericsError("adaptive_quadrature: non-finite sample at x = " + fmt(x));
        return v;
    };
    const double fc = sample(centre);
    double resk = gk::wgk[7] * fc;
    double resg = gk::wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = hh * gk::xgk[j];
        const double fsum = sample(centre - dx) + sample(centre + dx);
        resk += gk::wgk[j] * fsum;
        if (j & 1) resg += gk::wg[j / 2] * fsum;
    }
    return {resk * hh, std::abs((resk - resg) * hh)};
}

}  // namespace

QuadratureResult adaptive_quadrature(const ScalarFn& f, double a, double b,
                                     double rel_tol, double abs_tol,
                                     int max_subdivisions) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw Error("adaptive_quadrature: non-finite endpoint");
    if (b < a) throw Error("adaptive_quadrature: requires a <= b");
    if (!(rel_tol >= 0.0)) throw Error("adaptive_quadrature: negative tolerance");
    if (a == b) return {0.0, 0.0, 0};
    if (abs_tol < 0.0) abs_tol = rel_tol;

    struct Panel {
        double a, b, integral, error;
        bool operator<(const Panel& o) const { return error < o.error; }
    };
    std::priority_queue<Panel> heap;
    PanelEval whole = gk15(f, a, b);
    double total = whole.integral, err = whole.error;
    heap.push({a, b, whole.integral, whole.error});
    int splits = 0;

    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (heap.empty()) break;  // every panel at floating-point width; estimate is honest
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) continue;  // cannot split further
        if (++splits > max_subdivisions)
            throw NumericsError("adaptive_quadrature: subdivision budget exhausted "
                                "(error estimate " + fmt(err) + ")");
        const PanelEval left = gk15(f, worst.a, mid);
        const PanelEval right = gk15(f, mid, worst.b);
        total += left.integral + right.integral - worst.integral;
        err += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.integral, left.error});
        heap.push({mid, worst.b, right.integral, right.error});
    }
    return {total, std::max(err, 0.0), splits};
}

RootResult find_root(const ScalarFn& f, double lo, double hi, double tol, int max_iter) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
        throw Error("find_root: invalid interval");
    if (!(tol > 0.0)) throw Error("find_root: tolerance must be positive");

    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb))
        throw NumericsError("find_root: non-finite value at bracket endpoint");
    if (fa == 0.0) return {a, 0.0, 0};
    if (fb == 0.0) return {b, 0.0, 0};
    if ((fa > 0.0) == (fb > 0.0))
        throw NumericsError("find_root: interval does not bracket a sign change");

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 1; iter <= max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * kMachEps * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return {b, fb, iter};

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic interpolation (secant when a == c)
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if (!std::isfinite(fb))
            throw NumericsError("find_root: non-finite value at x = " + fmt(b));
    }
    throw NumericsError("find_root: iteration budget exhausted");
}

ScanReport scan_brackets(const ScalarFn& f, double lo, double hi, int n_points) {
    if (n_points < 2) throw Error("scan_brackets: need at least two points");
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
        throw Error("scan_brackets: invalid interval");

    ScanReport report;
    double prev_x = 0.0, prev_f = 0.0;
    bool have_prev = false, prev_is_first = false;
    for (int i = 0; i < n_points; ++i) {
        const double x =
            (i == n_points - 1) ? hi : lo + (hi - lo) * i / (n_points - 1);
        const double fx = f(x);
        if (!std::isfinite(fx)) {
            ++report.nonfinite_samples;
            continue;
        }
        if (have_prev) {
            bool take = false;
            if (prev_f * fx < 0.0) take = true;          // genuine sign change
            else if (fx == 0.0) take = true;             // zero at grid point owns its left interval
            else if (prev_f == 0.0 && prev_is_first) take = true;  // zero at leading edge
            if (take) report.brackets.push_back({prev_x, x});
        }
        prev_is_first = !have_prev;
        have_prev = true;
        prev_x = x;
        prev_f = fx;
    }
    return report;
}

std::optional<Bracket> scan_bracket(const ScalarFn& f, double lo, double hi, int n_points) {
    ScanReport report = scan_brackets(f, lo, hi, n_points);
    if (report.brackets.empty()) return std::nullopt;
    return report.brackets.front();
}

}  // namespace lucas
