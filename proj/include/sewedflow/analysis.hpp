#pragma once

#include "sewedflow/flow.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sewedflow {

inline constexpr double default_zero_tol = 1e-9;

/// Displacement function chi(x) = sigma+(x) - sigma-(x).
[[nodiscard]] double chi(const PiecewiseSystem& system, double x, double tol = default_crossing_tol);

/// chi evaluated along one traversal: launched at p = sigma-(x) the flow
/// crosses at x and then at sigma+(x), and chi = xi_2 - xi_0.
[[nodiscard]] double chi_composed(const PiecewiseSystem& system, double x, double tol = default_crossing_tol);

/// True iff sign(chi(x)) == sign(chi(sigma-(x))) wherever both exceed zero_tol.
[[nodiscard]] bool sign_propagation_check(const PiecewiseSystem& system, const std::vector<double>& grid,
                                          double zero_tol = default_zero_tol, double tol = default_crossing_tol);

struct ZeroBracket {
    double x = 0.0;
    double lo = 0.0;  ///< lo <= x <= hi
    double hi = 0.0;
    double chi = 0.0;
};

struct ZeroInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool reaches_inner_end = false;  ///< the run continues past the innermost sample
};

struct SignRun {
    int sign = 0;  ///< -1, 0 (below zero_tol) or +1
    int count = 0;
};

struct ChiProfile {
    std::vector<double> grid;
    std::vector<double> chi_values;
    std::vector<ZeroBracket> zeros;
    std::vector<ZeroInterval> zero_intervals;
    std::vector<SignRun> sign_pattern;
};

struct ClassifyOptions {
    double half_width = 0.5;
    int n_samples = 512;
    double zero_tol = default_zero_tol;
    double tol = default_crossing_tol;
    double decades = 3.0;
    /// Below-tolerance runs narrower than this fraction of their outer |x| are isolated zeros.
    double min_interval_fraction = 0.1;
    /// Sample x > 0 instead of x < 0.
    bool positive_side = false;
};

/// chi on the grid x_i = -h 10^(-decades i/(n-1)), with sign changes refined
/// into isolated zeros and below-tolerance runs into zero intervals.
[[nodiscard]] ChiProfile chi_profile(const PiecewiseSystem& system, const ClassifyOptions& options = {});

enum class FocusKind { stable_focus, unstable_focus, centre, centre_focus };

[[nodiscard]] std::string_view to_string(FocusKind k);

enum class TimingVerdict { finite, infinite_suspected, undetermined };

[[nodiscard]] std::string_view to_string(TimingVerdict v);

struct Timing {
    TimingVerdict verdict = TimingVerdict::undetermined;
    double total_time = 0.0;  ///< only for finite
    double tail_bound = 0.0;  ///< extrapolated time after the last recorded crossing
    double alpha = 0.0;       ///< fitted contraction exponent
    int crossings = 0;
    std::string note;
};

struct Classification {
    FocusKind kind = FocusKind::centre;
    std::vector<ZeroBracket> zeros;
    std::vector<ZeroInterval> zero_intervals;
    Timing timing;
    std::optional<int> order;
    ChiProfile profile;
    ClassifyOptions options;
};

/// Sorts the singularity into the four kinds. Throws Undetermined when
/// zero_tol is within a factor 10 of the crossing tolerance.
[[nodiscard]] Classification classify(const PiecewiseSystem& system, const ClassifyOptions& options = {});

enum class OrbitStability { stable, unstable, one_sided, degenerate };

[[nodiscard]] std::string_view to_string(OrbitStability s);

struct StabilityReport {
    OrbitStability verdict = OrbitStability::degenerate;
    double chi_outer = 0.0;  ///< chi(-(x0 + h))
    double chi_inner = 0.0;  ///< chi(-(x0 - h))
};

/// Stability of the periodic orbit through (-x0, 0), x0 > 0. Stable when
/// chi < 0 just outside and chi > 0 just inside, so that neighbouring
/// crossings approach x0 from both sides.
[[nodiscard]] StabilityReport periodic_orbit_stability(const PiecewiseSystem& system, double x0, double h,
                                                       double zero_tol = default_zero_tol,
                                                       double tol = default_crossing_tol);

/// Even leading order 2p of chi from a log-log fit over |x| in [lo, hi].
/// NotApplicable when chi changes sign, vanishes, or the slope is not close to
/// an even integer >= 2.
[[nodiscard]] int estimate_chi_order(const PiecewiseSystem& system, double lo, double hi, int n_samples = 25,
                                     double zero_tol = default_zero_tol, double tol = default_crossing_tol);

/// Finite / infinite approach time from the crossing sequence launched at x0.
[[nodiscard]] Timing time_to_origin(const PiecewiseSystem& system, double x0, int max_crossings = 256,
                                    double floor = default_floor, double tol = default_crossing_tol);

/// xi_{2n} >= xi_2 / (2n) for 2 <= n <= N. Requires a stable focus of order 2.
[[nodiscard]] bool harmonic_lower_bound_check(const PiecewiseSystem& system, double x0, int n_max,
                                              double tol = default_crossing_tol);

} // namespace sewedflow
