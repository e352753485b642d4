#include "sewedflow/analysis.hpp"

#include "sewedflow/errors.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace sewedflow {

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

double least_squares_slope(const std::vector<double>& u, const std::vector<double>& v)
{
    const double n = double(u.size());
    const double mu = std::accumulate(u.begin(), u.end(), 0.0) / n;
    const double mv = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        num += (u[i] - mu) * (v[i] - mv);
        den += (u[i] - mu) * (u[i] - mu);
    }
    return num / den;
}

/// chi as a function of t = |x| on one side of the origin.
struct SideChi {
    const PiecewiseSystem& system;
    double side;
    double tol;

    double operator()(double t) const { return chi(system, side * t, tol); }
};

/// Boundary between a sample above zero_tol (t_above) and one below it (t_below).
double refine_boundary(const SideChi& f, double t_above, double t_below, double zero_tol)
{
    for (int it = 0; it < 200; ++it) {
        if (std::abs(t_above - t_below) <= 1e-13 * std::max(t_above, t_below)) {
            break;
        }
        const double mid = 0.5 * (t_above + t_below);
        if (std::abs(f(mid)) <= zero_tol) {
            t_below = mid;
        } else {
            t_above = mid;
        }
    }
    return t_below;
}

double refine_sign_change(const SideChi& f, double ta, double tb, double ca, double cb)
{
    if (ta > tb) {
        std::swap(ta, tb);
        std::swap(ca, cb);
    }
    auto converged = [](double a, double b) { return (b - a) <= 1e-15 * b; };
    std::uintmax_t max_iter = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(f, ta, tb, ca, cb, converged, max_iter);
    return 0.5 * (lo + hi);
}

struct RunT {
    double t_outer = 0.0;
    double t_inner = 0.0;
    double t_best = 0.0;  ///< a point of the run with |chi| <= zero_tol
    bool reaches_inner_end = false;
};

} // namespace

double chi(const PiecewiseSystem& system, double x, double tol)
{
    return sigma_plus(system, x, tol) - sigma_minus(system, x, tol);
}

double chi_composed(const PiecewiseSystem& system, double x, double tol)
{
    if (x == 0.0) {
        return 0.0;
    }
    constexpr double no_floor = std::numeric_limits<double>::min();
    if (x < 0.0) {
        const double p = sigma_minus(system, x, tol);
        const auto seq = crossing_sequence(system, p, 3, no_floor, tol);
        if (seq.entries.size() < 3) {
            throw NoReturn("composed traversal stopped early");
        }
        return seq.entries[2].position - seq.entries[0].position;
    }
    const double p = sigma_plus(system, x, tol);
    const auto seq = crossing_sequence(system, p, 3, no_floor, tol);
    if (seq.entries.size() < 3) {
        throw NoReturn("composed traversal stopped early");
    }
    return seq.entries[0].position - seq.entries[2].position;
}

bool sign_propagation_check(const PiecewiseSystem& system, const std::vector<double>& grid, double zero_tol,
                            double tol)
{
    for (double x : grid) {
        try {
            const double a = chi(system, x, tol);
            const double b = chi(system, sigma_minus(system, x, tol), tol);
            if (std::abs(a) <= zero_tol || std::abs(b) <= zero_tol) {
                continue;
            }
            if (sign_of(a) != sign_of(b)) {
                return false;
            }
        } catch (const NoReturn&) {
            continue;
        }
    }
    return true;
}

ChiProfile chi_profile(const PiecewiseSystem& system, const ClassifyOptions& options)
{
    const double hw = options.half_width;
    const int n = options.n_samples;
    if (!(hw > 0.0) || hw > system.window) {
        throw InvalidParameter("half_width must lie in (0, window]");
    }
    if (n < 32) {
        throw InvalidParameter("n_samples must be at least 32");
    }
    if (!(options.decades > 0.0) || !(options.zero_tol > 0.0) || !(options.tol > 0.0)) {
        throw InvalidParameter("decades and tolerances must be positive");
    }
    const double s = options.positive_side ? 1.0 : -1.0;
    const SideChi f{system, s, options.tol};
    const double zt = options.zero_tol;

    std::vector<double> t(static_cast<std::size_t>(n));
    ChiProfile out;
    out.grid.resize(t.size());
    out.chi_values.resize(t.size());
    for (int i = 0; i < n; ++i) {
        t[i] = hw * std::pow(10.0, -options.decades * double(i) / double(n - 1));
        out.grid[i] = s * t[i];
        out.chi_values[i] = f(t[i]);
    }
    const auto& c = out.chi_values;
    auto below = [&](int i) { return std::abs(c[i]) <= zt; };
    auto sgn = [&](int i) { return below(i) ? 0 : sign_of(c[i]); };

    for (int i = 0; i < n; ++i) {
        if (out.sign_pattern.empty() || out.sign_pattern.back().sign != sgn(i)) {
            out.sign_pattern.push_back({sgn(i), 0});
        }
        ++out.sign_pattern.back().count;
    }

    std::vector<RunT> runs;
    for (int i = 0; i < n;) {
        if (!below(i)) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < n && below(j + 1)) {
            ++j;
        }
        RunT r;
        int best = i;
        for (int m = i + 1; m <= j; ++m) {
            if (std::abs(c[m]) < std::abs(c[best])) {
                best = m;
            }
        }
        r.t_best = t[best];
        r.t_outer = i == 0 ? t[0] : refine_boundary(f, t[i - 1], t[i], zt);
        if (j + 1 < n) {
            r.t_inner = refine_boundary(f, t[j + 1], t[j], zt);
        } else {
            r.t_inner = t[j];
            r.reaches_inner_end = true;
        }
        runs.push_back(r);
        i = j + 1;
    }

    for (int i = 0; i + 1 < n; ++i) {
        if (!below(i) && !below(i + 1) && sgn(i) != sgn(i + 1)) {
            const double tz = refine_sign_change(f, t[i], t[i + 1], c[i], c[i + 1]);
            out.zeros.push_back({s * tz, std::min(out.grid[i], out.grid[i + 1]),
                                 std::max(out.grid[i], out.grid[i + 1]), f(tz)});
        }
    }

    // Zeros where chi touches 0 without changing sign fall between samples;
    // look for them at local minima of |chi|.
    for (int i = 1; i + 1 < n; ++i) {
        if (below(i - 1) || below(i) || below(i + 1) || sgn(i - 1) != sgn(i) || sgn(i) != sgn(i + 1)) {
            continue;
        }
        if (!(std::abs(c[i]) < std::abs(c[i - 1]) && std::abs(c[i]) < std::abs(c[i + 1]))) {
            continue;
        }
        std::uintmax_t max_iter = 100;
        const auto [tm, fm] = boost::math::tools::brent_find_minima([&f](double u) { return std::abs(f(u)); },
                                                                    t[i + 1], t[i - 1], 40, max_iter);
        if (fm > zt) {
            continue;
        }
        RunT r;
        r.t_best = tm;
        r.t_outer = refine_boundary(f, t[i - 1], tm, zt);
        r.t_inner = refine_boundary(f, t[i + 1], tm, zt);
        runs.push_back(r);
    }

    for (const auto& r : runs) {
        const bool narrow = (r.t_outer - r.t_inner) < options.min_interval_fraction * r.t_outer;
        const double a = std::min(s * r.t_outer, s * r.t_inner);
        const double b = std::max(s * r.t_outer, s * r.t_inner);
        if (narrow && !r.reaches_inner_end) {
            std::uintmax_t max_iter = 100;
            const auto [tm, fm] = boost::math::tools::brent_find_minima(
                [&f](double u) { return std::abs(f(u)); }, r.t_inner, r.t_outer, 40, max_iter);
            const double tz = fm < std::abs(f(r.t_best)) ? tm : r.t_best;
            out.zeros.push_back({s * tz, a, b, f(tz)});
        } else {
            out.zero_intervals.push_back({a, b, r.reaches_inner_end});
        }
    }
    std::sort(out.zeros.begin(), out.zeros.end(), [](const auto& p, const auto& q) { return p.x < q.x; });
    std::sort(out.zero_intervals.begin(), out.zero_intervals.end(),
              [](const auto& p, const auto& q) { return p.lo < q.lo; });
    return out;
}

std::string_view to_string(FocusKind k)
{
    switch (k) {
    case FocusKind::stable_focus:
        return "StableFocus";
    case FocusKind::unstable_focus:
        return "UnstableFocus";
    case FocusKind::centre:
        return "Centre";
    case FocusKind::centre_focus:
        return "CentreFocus";
    }
    return "?";
}

std::string_view to_string(TimingVerdict v)
{
    switch (v) {
    case TimingVerdict::finite:
        return "Finite";
    case TimingVerdict::infinite_suspected:
        return "InfiniteSuspected";
    case TimingVerdict::undetermined:
        return "Undetermined";
    }
    return "?";
}

std::string_view to_string(OrbitStability s)
{
    switch (s) {
    case OrbitStability::stable:
        return "Stable";
    case OrbitStability::unstable:
        return "Unstable";
    case OrbitStability::one_sided:
        return "OneSided";
    case OrbitStability::degenerate:
        return "Degenerate";
    }
    return "?";
}

Classification classify(const PiecewiseSystem& system, const ClassifyOptions& options)
{
    if (!(options.zero_tol > 10.0 * options.tol)) {
        throw Undetermined("zero_tol must exceed ten times the crossing tolerance");
    }
    Classification out;
    out.options = options;
    out.profile = chi_profile(system, options);
    const auto& p = out.profile;
    const double hw = options.half_width;
    const double inner_limit = hw * std::pow(10.0, -(options.decades - 1.0));
    const double zt = options.zero_tol;

    const bool all_below =
        std::all_of(p.chi_values.begin(), p.chi_values.end(), [zt](double v) { return std::abs(v) <= zt; });
    if (all_below) {
        out.kind = FocusKind::centre;
        out.zero_intervals.push_back(
            {std::min(p.grid.front(), p.grid.back()), std::max(p.grid.front(), p.grid.back()), true});
        out.timing.note = "not a focus";
        return out;
    }

    int sign = 0;
    bool constant = true;
    bool outer_clear = true;
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        const double v = p.chi_values[i];
        if (std::abs(v) <= zt) {
            if (std::abs(p.grid[i]) >= inner_limit) {
                outer_clear = false;
            }
            continue;
        }
        if (sign == 0) {
            sign = sign_of(v);
        } else if (sign_of(v) != sign) {
            constant = false;
        }
    }
    for (const auto& z : p.zeros) {
        outer_clear = outer_clear && std::abs(z.x) < inner_limit;
    }
    for (const auto& z : p.zero_intervals) {
        outer_clear = outer_clear && std::max(std::abs(z.lo), std::abs(z.hi)) < inner_limit;
    }

    if (!(constant && outer_clear)) {
        out.kind = FocusKind::centre_focus;
        out.zeros = p.zeros;
        out.zero_intervals = p.zero_intervals;
        out.timing.note = "not a focus";
        return out;
    }

    out.kind = sign < 0 ? FocusKind::stable_focus : FocusKind::unstable_focus;
    try {
        if (out.kind == FocusKind::stable_focus) {
            out.timing = time_to_origin(system, -hw, 256, default_floor, options.tol);
        } else {
            out.timing = time_to_origin(time_reversed(system), -hw, 256, default_floor, options.tol);
            out.timing.note = "computed in reversed time";
        }
    } catch (const Error& e) {
        out.timing = Timing{};
        out.timing.note = e.what();
    }
    try {
        out.order = estimate_chi_order(system, hw * 1e-3, hw * 1e-1, 25, zt, options.tol);
    } catch (const NotApplicable&) {
        out.order.reset();
    }
    return out;
}

StabilityReport periodic_orbit_stability(const PiecewiseSystem& system, double x0, double h, double zero_tol,
                                         double tol)
{
    if (!(x0 > 0.0) || !(h > 0.0) || x0 + h > system.window || x0 - h <= 0.0) {
        throw BadBracket("need x0 > 0, h > 0 and 0 < x0 - h < x0 + h <= window");
    }
    if (std::abs(chi(system, -x0, tol)) > zero_tol) {
        throw PreconditionFailed("x0 does not lie on a periodic orbit: |chi(-x0)| exceeds zero_tol");
    }
    StabilityReport r;
    r.chi_outer = chi(system, -(x0 + h), tol);
    r.chi_inner = chi(system, -(x0 - h), tol);
    const bool outer_zero = std::abs(r.chi_outer) <= zero_tol;
    const bool inner_zero = std::abs(r.chi_inner) <= zero_tol;
    if (outer_zero && inner_zero) {
        r.verdict = OrbitStability::degenerate;
    } else if (outer_zero || inner_zero) {
        r.verdict = OrbitStability::one_sided;
    } else if (r.chi_outer < 0.0 && r.chi_inner > 0.0) {
        r.verdict = OrbitStability::stable;
    } else if (r.chi_outer > 0.0 && r.chi_inner < 0.0) {
        r.verdict = OrbitStability::unstable;
    } else {
        r.verdict = OrbitStability::degenerate;
    }
    return r;
}

int estimate_chi_order(const PiecewiseSystem& system, double lo, double hi, int n_samples, double zero_tol,
                       double tol)
{
    if (!(lo > 0.0) || !(hi > lo) || n_samples < 3) {
        throw InvalidParameter("need 0 < lo < hi and at least 3 samples");
    }
    std::vector<double> lx;
    std::vector<double> lc;
    int sign = 0;
    for (int i = 0; i < n_samples; ++i) {
        const double t = lo * std::pow(hi / lo, double(i) / double(n_samples - 1));
        const double v = chi(system, -t, tol);
        if (std::abs(v) <= zero_tol) {
            throw NotApplicable("chi vanishes within the fitting range");
        }
        if (sign == 0) {
            sign = sign_of(v);
        } else if (sign_of(v) != sign) {
            throw NotApplicable("chi changes sign within the fitting range");
        }
        lx.push_back(std::log(t));
        lc.push_back(std::log(std::abs(v)));
    }
    const double slope = least_squares_slope(lx, lc);
    if (!(slope >= 1.5)) {
        throw NotApplicable("local exponent of chi is " + std::to_string(slope) + ", below 2");
    }
    const long order = std::lround(slope);
    if (order % 2 != 0 || std::abs(slope - double(order)) > 0.25) {
        throw NotApplicable("local exponent of chi is " + std::to_string(slope) + ", not an even integer");
    }
    return int(order);
}

Timing time_to_origin(const PiecewiseSystem& system, double x0, int max_crossings, double floor, double tol)
{
    if (!(std::abs(x0) < 1.0) || x0 == 0.0) {
        throw InvalidParameter("time_to_origin needs 0 < |x0| < 1");
    }
    if (max_crossings < 4) {
        throw InvalidParameter("time_to_origin needs max_crossings >= 4");
    }
    const auto seq = crossing_sequence(system, x0, max_crossings, floor, tol);
    const auto& e = seq.entries;
    const std::size_t n = e.size();
    Timing out;
    out.crossings = int(n);
    if (n < 4) {
        out.note = "too few crossings";
        return out;
    }
    std::vector<double> a(n);
    for (std::size_t r = 0; r < n; ++r) {
        a[r] = std::abs(e[r].position);
    }

    // Contraction exponent over the last (up to) five steps.
    double num = 0.0;
    double den = 0.0;
    for (std::size_t r = n >= 6 ? n - 6 : 0; r + 1 < n; ++r) {
        const double l0 = std::log(a[r]);
        const double l1 = std::log(a[r + 1]);
        num += l0 * l1;
        den += l0 * l0;
    }
    out.alpha = num / den;

    if (out.alpha > 1.5) {
        const double q = a[n - 1] / a[n - 2];
        const double kappa = e[n - 1].arc_time / (a[n - 2] + a[n - 1]);
        out.tail_bound = kappa * (a[n - 1] + 2.0 * a[n - 1] * q / (1.0 - q));
        out.total_time = e[n - 1].time + out.tail_bound;
        out.verdict = TimingVerdict::finite;
        return out;
    }

    // Same-side subsequence b_m = |xi_{2m}|.
    std::vector<double> b;
    for (std::size_t r = 0; r < n; r += 2) {
        b.push_back(a[r]);
    }
    const std::size_t m = b.size();
    if (m < 9 || seq.terminated_by != Termination::max_crossings) {
        out.note = "sequence too short for a divergence test";
        return out;
    }
    std::vector<double> ratio;
    for (std::size_t j = 1; j < m; ++j) {
        ratio.push_back(b[j] / b[j - 1]);
    }
    const std::size_t half = ratio.size() / 2;
    const double first_mean = std::accumulate(ratio.begin(), ratio.begin() + long(half), 0.0) / double(half);
    const double second_mean =
        std::accumulate(ratio.begin() + long(half), ratio.end(), 0.0) / double(ratio.size() - half);
    double first_min = std::numeric_limits<double>::infinity();
    double second_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < m; ++j) {
        double& slot = j <= m / 2 ? first_min : second_min;
        slot = std::min(slot, double(j) * b[j]);
    }
    const bool slow = ratio.back() >= 0.9 && second_mean >= first_mean && out.alpha <= 1.1;
    const bool harmonic = second_min >= 0.5 * first_min;
    if (slow && harmonic) {
        out.verdict = TimingVerdict::infinite_suspected;
        out.note = "return ratio tends to 1 and n*xi_2n stays bounded below";
        return out;
    }
    out.note = "neither superlinear contraction nor harmonic decay";
    return out;
}

bool harmonic_lower_bound_check(const PiecewiseSystem& system, double x0, int n_max, double tol)
{
    if (n_max < 2) {
        throw InvalidParameter("harmonic_lower_bound_check needs N >= 2");
    }
    const double a = std::abs(x0);
    int order = 0;
    try {
        order = estimate_chi_order(system, a * 1e-2, a, 25, default_zero_tol, tol);
    } catch (const NotApplicable& e) {
        throw PreconditionFailed(std::string("not a focus of order 2: ") + e.what());
    }
    if (order != 2) {
        throw PreconditionFailed("estimated order of chi is " + std::to_string(order) + ", not 2");
    }
    if (!(chi(system, -a, tol) < 0.0)) {
        throw PreconditionFailed("focus is not stable");
    }
    const auto seq = crossing_sequence(system, x0, 2 * n_max + 1, std::numeric_limits<double>::min(), tol);
    if (int(seq.entries.size()) < 2 * n_max + 1) {
        return false;
    }
    const double x2 = std::abs(seq.entries[2].position);
    for (int k = 2; k <= n_max; ++k) {
        if (std::abs(seq.entries[std::size_t(2 * k)].position) < x2 / (2.0 * k)) {
            return false;
        }
    }
    return true;
}

} // namespace sewedflow
