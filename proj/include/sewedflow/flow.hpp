#pragma once

#include "sewedflow/fields.hpp"

#include <string_view>
#include <vector>

namespace sewedflow {

inline constexpr double default_crossing_tol = 1e-12;
inline constexpr double default_floor = 1e-14;
inline constexpr double default_step_tol = 1e-10;

/// Orbit of one half field through (start_x, 0), written as a graph y(x).
///
/// Valid when neither P nor Q of that half depends on y. Built from the
/// antiderivative of Q when P is constant, otherwise from adaptive quadrature
/// of Q/P along the axis.
class IntegralCurve {
public:
    IntegralCurve(const PiecewiseSystem& system, Side side, double start_x);

    [[nodiscard]] double operator()(double x) const;

    [[nodiscard]] Side side() const { return side_; }
    [[nodiscard]] double start_x() const { return start_x_; }
    /// The x-interval the curve is evaluated on (the working window).
    [[nodiscard]] double x_lo() const { return -window_; }
    [[nodiscard]] double x_hi() const { return window_; }

    /// Level of the curve: y(x) = level(x) - level(start_x).
    [[nodiscard]] double level(double x) const;

private:
    HalfField field_;
    Side side_;
    double start_x_;
    double window_;
    double start_level_;
};

[[nodiscard]] IntegralCurve integral_curve(const PiecewiseSystem& system, Side side, double x0);

/// Whether the exact curve engine applies to a half field.
[[nodiscard]] bool curve_engine_applies(const HalfField& field);

enum class Engine { automatic, curve, generic };

/// Half-return map: next crossing of the switching line along the flow in the
/// given half plane. If the flow does not enter that half plane from x, the
/// involution extension is used (follow the same orbit backwards), so
/// sigma(side, sigma(side, x)) = x. sigma(side, 0) = 0 exactly.
///
/// Throws NoReturn if no crossing lies in the window. The curve engine roots
/// the level-set equation to a bracket width of tol * min(1, |crossing|).
[[nodiscard]] double sigma(const PiecewiseSystem& system, Side side, double x, double tol = default_crossing_tol,
                           Engine engine = Engine::automatic);

[[nodiscard]] inline double sigma_plus(const PiecewiseSystem& system, double x, double tol = default_crossing_tol,
                                       Engine engine = Engine::automatic)
{
    return sigma(system, Side::upper, x, tol, engine);
}

[[nodiscard]] inline double sigma_minus(const PiecewiseSystem& system, double x, double tol = default_crossing_tol,
                                        Engine engine = Engine::automatic)
{
    return sigma(system, Side::lower, x, tol, engine);
}

/// Time spent on the arc of `side` between two crossings (integral of dx/|P|).
[[nodiscard]] double arc_time(const PiecewiseSystem& system, Side side, double from_x, double to_x);

enum class Termination { max_crossings, position_underflow, left_window };

[[nodiscard]] std::string_view to_string(Termination t);

struct CrossingEntry {
    int index = 0;
    double position = 0.0;  ///< signed abscissa on the switching line
    double arc_time = 0.0;  ///< duration of the arc ending here (0 for the launch point)
    double time = 0.0;      ///< cumulative time since launch
};

struct CrossingSequence {
    std::vector<CrossingEntry> entries;
    Termination terminated_by = Termination::max_crossings;
};

/// Alternates the upper and lower half-return maps forward in time from
/// (x0, 0). The launch point is entry 0, so max_crossings counts it.
/// Stops early when |position| < floor or when the next crossing would lie
/// outside the window.
[[nodiscard]] CrossingSequence crossing_sequence(const PiecewiseSystem& system, double x0, int max_crossings,
                                                 double floor = default_floor, double tol = default_crossing_tol,
                                                 Engine engine = Engine::automatic);

struct GenericCrossing {
    double crossing_x = 0.0;
    double arc_time = 0.0;
};

/// Dormand-Prince 5(4) integration of one half field from `start` until y
/// changes sign. Forward time only: the start must lie strictly inside the
/// half plane or on the line with the field pointing into it.
///
/// The arc is split where it passes x = 0 and restarted from exactly x = 0, so
/// crossings close to the singularity keep their relative precision. Events
/// are localized by bisection on the step length, re-stepping from the last
/// accepted state.
[[nodiscard]] GenericCrossing integrate_generic(const PiecewiseSystem& system, double x, double y, Side side,
                                                double step_tol = default_step_tol);

struct TrajectoryPoint {
    int arc = 0;
    Side side = Side::upper;
    double x = 0.0;
    double y = 0.0;
};

/// Plot-ready samples of the first n_arcs arcs from (x0, 0): `resolution`
/// points per arc, evenly spaced in x, endpoints included.
[[nodiscard]] std::vector<TrajectoryPoint> sample_trajectory(const PiecewiseSystem& system, double x0, int n_arcs,
                                                             int resolution, double tol = default_crossing_tol);

} // namespace sewedflow
