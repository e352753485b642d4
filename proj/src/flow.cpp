#include "sewedflow/flow.hpp"

#include "sewedflow/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace sewedflow {

namespace {

constexpr double quadrature_tol = 1e-13;

double axis_integral(const std::function<double(double)>& f, double a, double b)
{
    if (a == b) {
        return 0.0;
    }
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, quadrature_tol);
}

/// Level of the upper/lower orbit family through the axis: y = level(x) - level(x0).
double axis_level(const HalfField& f, double x)
{
    if (f.constant_p && f.q_antiderivative) {
        return (*f.q_antiderivative)(x) / *f.constant_p;
    }
    return axis_integral([&f](double s) { return f.q(s, 0.0) / f.p(s, 0.0); }, 0.0, x);
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Root of the level-set equation on the far side of the fold.
double curve_sigma(const PiecewiseSystem& system, Side side, double x, double tol)
{
    const HalfField& f = system.half(side);
    const double window = system.window;
    const double sgn = side_sign(side);

    // depth(s) = sgn (level(0) - level(s)) grows with |s| on both sides; the
    // orbit through x is the set depth(s) = depth(x), and y has the sign of
    // `side` exactly where depth(s) < depth(x).
    const bool use_log = f.log_drop && f.constant_p;
    const double level0 = use_log ? 0.0 : axis_level(f, 0.0);
    auto depth = [&](double s) { return sgn * (level0 - axis_level(f, s)); };

    double target = 0.0;
    double apex = 0.0;
    if (use_log) {
        target = (*f.log_drop)(x);
        apex = std::exp(target) / std::abs(*f.constant_p);
    } else {
        target = depth(x);
        apex = target;
    }
    if (!(apex <= window * window)) {
        throw NoReturn("orbit through x = " + std::to_string(x) + " leaves the window vertically");
    }

    const double dir = x < 0.0 ? 1.0 : -1.0;
    auto g = [&](double s) {
        const double v = use_log ? (*f.log_drop)(dir * s) - target : depth(dir * s) - target;
        if (std::isnan(v)) {
            throw NoReturn("level function undefined at x = " + std::to_string(dir * s));
        }
        return v;
    };

    double s = std::min(std::abs(x), window);
    double gs = g(s);
    double s_in = 0.0;
    double g_in = 0.0;
    double s_out = 0.0;
    double g_out = 0.0;
    if (gs < 0.0) {
        while (gs < 0.0) {
            s_in = s;
            g_in = gs;
            if (s >= window) {
                throw NoReturn("no return crossing within the window from x = " + std::to_string(x));
            }
            s = std::min(2.0 * s, window);
            gs = g(s);
        }
        s_out = s;
        g_out = gs;
    } else {
        while (gs >= 0.0) {
            if (gs == 0.0) {
                return dir * s;
            }
            s_out = s;
            g_out = gs;
            s *= 0.5;
            if (s < std::numeric_limits<double>::min()) {
                return 0.0;
            }
            gs = g(s);
        }
        s_in = s;
        g_in = gs;
    }
    if (g_out == 0.0) {
        return dir * s_out;
    }

    auto converged = [tol](double a, double b) {
        return (b - a) <= tol * std::min(1.0, a) || (b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * b;
    };
    std::uintmax_t max_iter = 400;
    const auto [lo, hi] = boost::math::tools::toms748_solve(g, s_in, s_out, g_in, g_out, converged, max_iter);
    return dir * (0.5 * (lo + hi));
}

// ---------------------------------------------------------------------------
// Generic engine

using State = std::array<double, 2>;
using Stepper = boost::numeric::odeint::runge_kutta_dopri5<State>;

struct ArcResult {
    double x = 0.0;
    double time = 0.0;
};

struct ArcOptions {
    double direction = 1.0;  ///< +1 forward time, -1 backward
    double rtol = default_step_tol;
    std::vector<State>* path = nullptr;  ///< optional record of accepted states
};

ArcResult trace_arc(const HalfField& f, State start, Side side, double window, const ArcOptions& opt)
{
    const double dir = opt.direction;
    const double sgn = side_sign(side);
    const double rtol = opt.rtol;
    auto rhs = [&f, dir](const State& s, State& d, double) {
        d[0] = dir * f.p(s[0], s[1]);
        d[1] = dir * f.q(s[0], s[1]);
    };

    Stepper stepper;
    State cur = start;
    State dcur{};
    rhs(cur, dcur, 0.0);
    if (opt.path) {
        opt.path->push_back(cur);
    }

    const double x_launch = cur[0];
    const double x_sign0 = sign_of(x_launch);
    bool split_pending = x_launch != 0.0;

    constexpr double tiny = 1e-300;
    const double x_scale = std::max(std::abs(x_launch), tiny);
    double y_scale = std::abs(cur[1]);
    if (dcur[0] != 0.0) {
        y_scale = std::max(y_scale, std::abs(dcur[1] / dcur[0]) * x_scale);
    }
    y_scale = std::max(y_scale, tiny);
    const double atol_x = rtol * x_scale;
    double atol_y = rtol * y_scale;

    double h = dcur[0] != 0.0 ? 0.05 * x_scale / std::abs(dcur[0]) : 1e-3;
    double t = 0.0;

    auto crossed = [sgn](const State& s) { return sgn * s[1] < 0.0; };
    auto passed_fold = [&](const State& s) { return split_pending && (s[0] == 0.0 || sign_of(s[0]) != x_sign0); };

    constexpr long max_steps = 4'000'000;
    State next{};
    State dnext{};
    State err{};
    for (long step = 0; step < max_steps; ++step) {
        stepper.do_step(rhs, cur, dcur, t, next, dnext, h, err);
        const double ex = std::abs(err[0]) / (atol_x + rtol * std::max(std::abs(cur[0]), std::abs(next[0])));
        const double ey = std::abs(err[1]) / (atol_y + rtol * std::max(std::abs(cur[1]), std::abs(next[1])));
        const double e = std::max(ex, ey);
        if (!std::isfinite(e) || e > 1.0) {
            h *= std::isfinite(e) ? std::max(0.2, 0.9 * std::pow(e, -0.2)) : 0.25;
            if (h < tiny || h <= std::numeric_limits<double>::epsilon() * t) {
                throw StepUnderflow("step size collapsed before reaching the switching line");
            }
            continue;
        }

        const bool y_event = crossed(next);
        const bool x_event = passed_fold(next);
        if (y_event || x_event) {
            // Smallest step length at which an event has happened, re-stepping
            // from the accepted state so tiny offsets keep relative precision.
            auto trial = [&](double tau) {
                State s{};
                State ds{};
                State es{};
                stepper.do_step(rhs, cur, dcur, t, s, ds, tau, es);
                return s;
            };
            auto happened = [&](const State& s) { return crossed(s) || passed_fold(s); };
            double lo = 0.0;
            double hi = h;
            State s_lo = cur;
            State s_hi = next;
            for (int it = 0; it < 400 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) {
                    break;
                }
                const State s = trial(mid);
                if (happened(s)) {
                    hi = mid;
                    s_hi = s;
                } else {
                    lo = mid;
                    s_lo = s;
                }
            }

            if (crossed(s_hi)) {
                const double w = s_lo[1] / (s_lo[1] - s_hi[1]);
                ArcResult out;
                out.x = s_lo[0] + w * (s_hi[0] - s_lo[0]);
                out.time = t + lo + w * (hi - lo);
                if (opt.path) {
                    opt.path->push_back({out.x, 0.0});
                }
                return out;
            }

            // Restart exactly on the fold x = 0.
            const double w = s_lo[0] / (s_lo[0] - s_hi[0]);
            cur = {0.0, s_lo[1] + w * (s_hi[1] - s_lo[1])};
            t += lo + w * (hi - lo);
            rhs(cur, dcur, t);
            split_pending = false;
            if (cur[1] != 0.0) {
                atol_y = rtol * std::abs(cur[1]);
            }
            if (opt.path) {
                opt.path->push_back(cur);
            }
            continue;
        }

        cur = next;
        dcur = dnext;
        t += h;
        if (opt.path) {
            opt.path->push_back(cur);
        }
        if (std::abs(cur[0]) > window || std::abs(cur[1]) > window * window) {
            throw LeftWindow("trajectory left the working window");
        }
        h *= e > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(e, -0.2))) : 5.0;
    }
    throw StepUnderflow("step budget exhausted before reaching the switching line");
}

/// Forward if the field enters the half plane from (x, 0), backward otherwise.
double launch_direction(const HalfField& f, Side side, double x)
{
    const int s = axis_sign(f, x);
    if (s == 0) {
        throw Tangency("field is tangent to the switching line at x = " + std::to_string(x));
    }
    return side_sign(side) * s > 0 ? 1.0 : -1.0;
}

ArcResult generic_arc(const PiecewiseSystem& system, Side side, double x, double rtol,
                      std::vector<State>* path = nullptr)
{
    const HalfField& f = system.half(side);
    ArcOptions opt;
    opt.direction = launch_direction(f, side, x);
    opt.rtol = rtol;
    opt.path = path;
    try {
        return trace_arc(f, {x, 0.0}, side, system.window, opt);
    } catch (const LeftWindow& e) {
        throw NoReturn(e.what());
    }
}

} // namespace

bool curve_engine_applies(const HalfField& field) { return !field.p_depends_on_y && !field.q_depends_on_y; }

IntegralCurve::IntegralCurve(const PiecewiseSystem& system, Side side, double start_x)
    : field_(system.half(side))
    , side_(side)
    , start_x_(start_x)
    , window_(system.window)
{
    if (!curve_engine_applies(field_)) {
        throw NotApplicable("integral curves need a y-independent half field; use integrate_generic");
    }
    start_level_ = axis_level(field_, start_x_);
}

double IntegralCurve::level(double x) const { return axis_level(field_, x); }

double IntegralCurve::operator()(double x) const { return level(x) - start_level_; }

IntegralCurve integral_curve(const PiecewiseSystem& system, Side side, double x0)
{
    return IntegralCurve(system, side, x0);
}

double sigma(const PiecewiseSystem& system, Side side, double x, double tol, Engine engine)
{
    if (!(tol > 0.0)) {
        throw InvalidParameter("crossing tolerance must be positive");
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (std::abs(x) > system.window) {
        throw NoReturn("launch point outside the working window");
    }
    const HalfField& f = system.half(side);
    if (engine == Engine::automatic) {
        engine = curve_engine_applies(f) ? Engine::curve : Engine::generic;
    }
    if (engine == Engine::curve) {
        if (!curve_engine_applies(f)) {
            throw NotApplicable("curve engine needs a y-independent half field");
        }
        return curve_sigma(system, side, x, tol);
    }
    return generic_arc(system, side, x, std::max(tol, default_step_tol)).x;
}

double arc_time(const PiecewiseSystem& system, Side side, double from_x, double to_x)
{
    const HalfField& f = system.half(side);
    if (f.constant_p) {
        return std::abs(to_x - from_x) / std::abs(*f.constant_p);
    }
    return std::abs(axis_integral([&f](double s) { return 1.0 / std::abs(f.p(s, 0.0)); }, from_x, to_x));
}

std::string_view to_string(Termination t)
{
    switch (t) {
    case Termination::max_crossings:
        return "max_crossings";
    case Termination::position_underflow:
        return "position_underflow";
    case Termination::left_window:
        return "left_window";
    }
    return "?";
}

CrossingSequence crossing_sequence(const PiecewiseSystem& system, double x0, int max_crossings, double floor,
                                   double tol, Engine engine)
{
    if (x0 == 0.0) {
        throw Tangency("crossing sequence launched from the singularity");
    }
    if (!(floor > 0.0)) {
        throw InvalidParameter("floor must be positive");
    }
    CrossingSequence seq;
    seq.entries.push_back({0, x0, 0.0, 0.0});
    if (std::abs(x0) < floor) {
        seq.terminated_by = Termination::position_underflow;
        return seq;
    }

    double pos = x0;
    double t = 0.0;
    for (int r = 1; r < max_crossings; ++r) {
        // x < 0 leaves into y > 0 under the sewed-focus convention, x > 0 into y < 0.
        const Side side = pos < 0.0 ? Side::upper : Side::lower;
        const HalfField& f = system.half(side);
        const bool use_curve =
            engine == Engine::curve || (engine == Engine::automatic && curve_engine_applies(f));
        double next = 0.0;
        double dt = 0.0;
        try {
            if (use_curve) {
                next = sigma(system, side, pos, tol, Engine::curve);
                dt = arc_time(system, side, pos, next);
            } else {
                const auto arc = generic_arc(system, side, pos, std::max(tol, default_step_tol));
                next = arc.x;
                dt = arc.time;
            }
        } catch (const NoReturn&) {
            if (r == 1) {
                throw;
            }
            seq.terminated_by = Termination::left_window;
            return seq;
        }
        t += dt;
        seq.entries.push_back({r, next, dt, t});
        pos = next;
        if (std::abs(pos) < floor) {
            seq.terminated_by = Termination::position_underflow;
            return seq;
        }
    }
    seq.terminated_by = Termination::max_crossings;
    return seq;
}

GenericCrossing integrate_generic(const PiecewiseSystem& system, double x, double y, Side side, double step_tol)
{
    if (!(step_tol > 0.0)) {
        throw InvalidParameter("step tolerance must be positive");
    }
    const HalfField& f = system.half(side);
    const double sgn = side_sign(side);
    if (y == 0.0) {
        if (x == 0.0) {
            throw Tangency("integration launched from the singularity");
        }
        if (!(sgn * axis_sign(f, x) > 0)) {
            throw PreconditionFailed("field does not point into the " + std::string(to_string(side))
                                     + " half plane at the start");
        }
    } else if (!(sgn * y > 0.0)) {
        throw PreconditionFailed("start point is not in the " + std::string(to_string(side)) + " half plane");
    }
    ArcOptions opt;
    opt.rtol = step_tol;
    const auto arc = trace_arc(f, {x, y}, side, system.window, opt);
    return {arc.x, arc.time};
}

std::vector<TrajectoryPoint> sample_trajectory(const PiecewiseSystem& system, double x0, int n_arcs, int resolution,
                                               double tol)
{
    if (x0 == 0.0) {
        throw Tangency("trajectory launched from the singularity");
    }
    if (n_arcs < 1 || resolution < 2) {
        throw InvalidParameter("need n_arcs >= 1 and resolution >= 2");
    }
    std::vector<TrajectoryPoint> out;
    out.reserve(std::size_t(n_arcs) * std::size_t(resolution));
    double pos = x0;
    for (int arc = 0; arc < n_arcs; ++arc) {
        const Side side = pos < 0.0 ? Side::upper : Side::lower;
        const HalfField& f = system.half(side);
        if (curve_engine_applies(f)) {
            const double next = sigma(system, side, pos, tol, Engine::curve);
            const IntegralCurve curve(system, side, pos);
            for (int i = 0; i < resolution; ++i) {
                const double x = i + 1 == resolution ? next : pos + (next - pos) * double(i) / double(resolution - 1);
                const double y = (i == 0 || i + 1 == resolution) ? 0.0 : curve(x);
                out.push_back({arc, side, x, y});
            }
            pos = next;
            continue;
        }

        std::vector<State> path;
        const auto res = generic_arc(system, side, pos, std::max(tol, default_step_tol), &path);
        // x is monotone along an arc (P does not vanish), so resample linearly in x.
        const double next = res.x;
        std::size_t j = 0;
        for (int i = 0; i < resolution; ++i) {
            const double x = i + 1 == resolution ? next : pos + (next - pos) * double(i) / double(resolution - 1);
            const double dir = next > pos ? 1.0 : -1.0;
            while (j + 2 < path.size() && dir * path[j + 1][0] < dir * x) {
                ++j;
            }
            const State& a = path[j];
            const State& b = path[std::min(j + 1, path.size() - 1)];
            const double w = b[0] == a[0] ? 0.0 : (x - a[0]) / (b[0] - a[0]);
            const double y = (i == 0 || i + 1 == resolution) ? 0.0 : a[1] + w * (b[1] - a[1]);
            out.push_back({arc, side, x, y});
        }
        pos = next;
    }
    return out;
}

} // namespace sewedflow
