#pragma once

#include "sewedflow/eset.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sewedflow {

/// Which half plane a field governs: upper is y > 0, lower is y < 0.
enum class Side { upper, lower };

[[nodiscard]] constexpr double side_sign(Side s) { return s == Side::upper ? 1.0 : -1.0; }
[[nodiscard]] constexpr Side other_side(Side s) { return s == Side::upper ? Side::lower : Side::upper; }
[[nodiscard]] std::string_view to_string(Side s);

using PlaneFunction = std::function<double(double x, double y)>;
using AxisFunction = std::function<double(double x)>;

/// One smooth half of a piecewise system.
struct HalfField {
    PlaneFunction p;  ///< horizontal speed
    PlaneFunction q;  ///< vertical speed
    bool p_depends_on_y = false;
    bool q_depends_on_y = false;
    /// Set when P is a known constant (all built-in families use ±1).
    std::optional<double> constant_p;
    /// A(x) with A' = Q(x, 0).
    std::optional<AxisFunction> q_antiderivative;
    /// ln(A(0) - A(x)) for x != 0. Lets the curve engine and the validator work
    /// where A(x) - A(0) underflows (the C-infinity family at |x| < 0.04).
    std::optional<AxisFunction> log_drop;
};

struct Smoothness {
    enum class Class { finite, infinite, analytic };
    Class cls = Class::analytic;
    int k = 0;  ///< only meaningful for Class::finite

    [[nodiscard]] std::string to_string() const;
};

struct FamilyTag {
    std::string name;
    std::map<std::string, double> params;
    std::optional<CompactSymmetricSet> set;
};

/// Two half-plane fields glued along the switching line y = 0.
struct PiecewiseSystem {
    HalfField upper;
    HalfField lower;
    Smoothness smoothness;
    FamilyTag family;
    /// Working window [-L, L] x [-L^2, L^2].
    double window = 1.0;

    [[nodiscard]] const HalfField& half(Side s) const { return s == Side::upper ? upper : lower; }
};

struct FamilyParams {
    int k = 2;
    std::optional<CompactSymmetricSet> set;
    double window = 1.0;
};

/// Names accepted by make_family, in a stable order.
[[nodiscard]] const std::vector<std::string>& family_names();

/// Builds one of the named families:
///   finite_time_ck (k >= 2), finite_time_cinf, centre_focus_sin (k >= 2),
///   sewed_centre, cubic_focus, eset (set, k >= 1).
[[nodiscard]] PiecewiseSystem make_family(std::string_view name, const FamilyParams& params = {});

/// P+ = 1, P- = -1 and Q± given by ascending polynomial coefficients in x.
[[nodiscard]] PiecewiseSystem make_polynomial_system(std::vector<double> q_upper_coeffs,
                                                     std::vector<double> q_lower_coeffs,
                                                     double window = 1.0);

/// The same phase portrait traversed backwards, mirrored in x so the
/// sewed-focus sign conventions still hold: P~(x,y) = P(-x,y), Q~(x,y) = -Q(-x,y).
/// Stable foci become unstable and vice versa.
[[nodiscard]] PiecewiseSystem time_reversed(const PiecewiseSystem& system);

/// Heaviside step with H(0) = 1.
[[nodiscard]] constexpr double heaviside(double x) { return x >= 0.0 ? 1.0 : 0.0; }

struct FieldValue {
    double dx_dt = 0.0;
    double dy_dt = 0.0;
};

[[nodiscard]] FieldValue eval_field(const PiecewiseSystem& system, double x, double y, Side side);

/// sign(Q(x, 0)) for the given half. Falls back to the slope of log_drop when
/// Q itself underflows to zero at x != 0.
[[nodiscard]] int axis_sign(const HalfField& field, double x);

struct ValidationReport {
    double b_plus = 0.0;
    double b_minus = 0.0;
    bool type3_ok = false;
    bool sf1_ok = false;
    bool sf2_ok = false;
    bool sf2strong_ok = false;
    bool no_sliding_ok = false;
    double neighbourhood = 0.0;
    int samples = 0;

    [[nodiscard]] bool sewed_focus() const { return type3_ok && sf1_ok && sf2_ok && no_sliding_ok; }
};

/// Checks the type-3 and sewed-focus conditions. sf2 and no-sliding are
/// sampled at `samples` log-spaced points per side over six decades below
/// half_width. Failures are reported as flags.
[[nodiscard]] ValidationReport validate_sewed_focus(const PiecewiseSystem& system, double half_width,
                                                    int samples = 32);

} // namespace sewedflow
