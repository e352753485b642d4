#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sewedflow {

/// One closed component on the positive half line: a point when lo == hi.
struct Component {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool is_point() const { return lo == hi; }
};

/// A compact subset E of the line with E = -E and 0 not in E.
///
/// Only the positive half is stored; the negative half is implied by
/// symmetry. Components must be strictly positive, sorted, pairwise disjoint
/// and must not touch (a shared endpoint is rejected rather than merged).
class CompactSymmetricSet {
public:
    explicit CompactSymmetricSet(std::vector<Component> components);

    /// Builds a set from point and interval lists in any order.
    static CompactSymmetricSet from_parts(std::vector<double> points,
                                          std::vector<std::pair<double, double>> intervals);

    [[nodiscard]] const std::vector<Component>& components() const { return components_; }

    /// max(E), i.e. the upper endpoint of the last component.
    [[nodiscard]] double max_abs() const { return components_.back().hi; }

    /// Membership of x in E (not E0: the origin is excluded).
    [[nodiscard]] bool contains(double x) const;

    /// "E = {p1, ...} ∪ [lo1,hi1] ∪ ..." with the negative half left implicit as ±.
    [[nodiscard]] std::string to_string() const;

private:
    std::vector<Component> components_;
};

/// A bounded open component (mid - half_width, mid + half_width) of the complement of E0.
struct Gap {
    double lo = 0.0;
    double hi = 0.0;
    double mid = 0.0;
    double half_width = 0.0;
};

struct GapDecomposition {
    /// All bounded gaps, ascending, including the mirrored negative ones.
    std::vector<Gap> gaps;
    /// The unbounded components are (-inf, -tail_start) and (tail_start, inf).
    double tail_start = 0.0;
};

[[nodiscard]] GapDecomposition decompose_gaps(const CompactSymmetricSet& set);

/// Exact distance from x to E0 = E ∪ {0}.
[[nodiscard]] double distance_to_E0(double x, const CompactSymmetricSet& set);

/// -sign(x) d(x, E0)^(k+2). Kept as an independent cross-check of f_E's sign and zero set.
[[nodiscard]] double g_E(double x, const CompactSymmetricSet& set, int k);

/// Standard bump exp(-1/(1-x^2)) on (-1, 1), zero elsewhere.
[[nodiscard]] double bump_psi(double x);
[[nodiscard]] double bump_psi_prime(double x);

/// Odd C-infinity function vanishing exactly on E0.
///
/// On each bounded gap (a - d, a + d) it is -sign(a) d psi((x - a)/d); on the
/// tails |x| > M' = max(E) it is -sign(x) exp(-M'/(|x| - M')). Supports are
/// disjoint, so evaluation locates the containing gap and evaluates one term.
class ZeroSetFunction {
public:
    explicit ZeroSetFunction(CompactSymmetricSet set);

    [[nodiscard]] double value(double x) const;
    [[nodiscard]] double derivative(double x) const;

    /// ln|f_E(x)|, -inf exactly on E0. Finite wherever f_E is nonzero, including
    /// near gap edges where the value itself underflows.
    [[nodiscard]] double log_magnitude(double x) const;

    [[nodiscard]] const CompactSymmetricSet& set() const { return set_; }

private:
    struct Term {
        enum class Kind { none, bump, tail } kind = Kind::none;
        double u = 0.0;          // scaled coordinate for bumps, tail offset for tails
        const Gap* gap = nullptr;
    };

    /// Active term at t = |x| > 0.
    [[nodiscard]] Term locate(double t) const;

    CompactSymmetricSet set_;
    std::vector<Gap> positive_gaps_;
    double tail_start_ = 0.0;
};

[[nodiscard]] double f_E(double x, const CompactSymmetricSet& set);
[[nodiscard]] double f_E_prime(double x, const CompactSymmetricSet& set);

} // namespace sewedflow
