#include "sewedflow/eset.hpp"

#include "sewedflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sewedflow {

namespace {

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::string format_real(double v)
{
    std::ostringstream os;
    os.precision(std::numeric_limits<double>::max_digits10);
    os << v;
    return os.str();
}

// 1 - u^2 without cancellation near |u| = 1.
double bump_base(double u) { return (1.0 - u) * (1.0 + u); }

} // namespace

CompactSymmetricSet::CompactSymmetricSet(std::vector<Component> components)
    : components_(std::move(components))
{
    if (components_.empty()) {
        throw InvalidSet("set must have at least one component");
    }
    for (const auto& c : components_) {
        if (!std::isfinite(c.lo) || !std::isfinite(c.hi)) {
            throw InvalidSet("set components must be finite");
        }
        if (!(c.lo > 0.0)) {
            throw InvalidSet("set components must be strictly positive (0 is not allowed in E)");
        }
        if (c.hi < c.lo) {
            throw InvalidSet("interval with hi < lo");
        }
    }
    for (std::size_t i = 1; i < components_.size(); ++i) {
        if (!(components_[i - 1].hi < components_[i].lo)) {
            throw InvalidSet("components must be sorted, disjoint and must not share endpoints");
        }
    }
}

CompactSymmetricSet CompactSymmetricSet::from_parts(std::vector<double> points,
                                                    std::vector<std::pair<double, double>> intervals)
{
    std::vector<Component> comps;
    comps.reserve(points.size() + intervals.size());
    for (double p : points) {
        comps.push_back({p, p});
    }
    for (const auto& [lo, hi] : intervals) {
        comps.push_back({lo, hi});
    }
    std::sort(comps.begin(), comps.end(),
              [](const Component& a, const Component& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
    return CompactSymmetricSet(std::move(comps));
}

bool CompactSymmetricSet::contains(double x) const
{
    const double t = std::abs(x);
    return std::any_of(components_.begin(), components_.end(),
                       [t](const Component& c) { return c.lo <= t && t <= c.hi; });
}

std::string CompactSymmetricSet::to_string() const
{
    std::string points;
    std::string intervals;
    for (const auto& c : components_) {
        if (c.is_point()) {
            points += (points.empty() ? "" : ", ") + format_real(c.lo);
        } else {
            intervals += " ∪ ±[" + format_real(c.lo) + "," + format_real(c.hi) + "]";
        }
    }
    std::string out = "E = ";
    if (!points.empty()) {
        out += "±{" + points + "}";
        out += intervals;
    } else {
        out += intervals.substr(std::string(" ∪ ").size());
    }
    return out;
}

GapDecomposition decompose_gaps(const CompactSymmetricSet& set)
{
    std::vector<Gap> positive;
    double left = 0.0;
    for (const auto& c : set.components()) {
        positive.push_back({left, c.lo, 0.5 * (left + c.lo), 0.5 * (c.lo - left)});
        left = c.hi;
    }

    GapDecomposition out;
    out.tail_start = set.max_abs();
    for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
        out.gaps.push_back({-it->hi, -it->lo, -it->mid, it->half_width});
    }
    out.gaps.insert(out.gaps.end(), positive.begin(), positive.end());
    return out;
}

double distance_to_E0(double x, const CompactSymmetricSet& set)
{
    const double t = std::abs(x);
    double best = t;
    for (const auto& c : set.components()) {
        double d = 0.0;
        if (t < c.lo) {
            d = c.lo - t;
        } else if (t > c.hi) {
            d = t - c.hi;
        }
        best = std::min(best, d);
    }
    return best;
}

double g_E(double x, const CompactSymmetricSet& set, int k)
{
    if (k < 1) {
        throw InvalidParameter("g_E needs k >= 1");
    }
    return -sign_of(x) * std::pow(distance_to_E0(x, set), k + 2);
}

double bump_psi(double x)
{
    if (!(std::abs(x) < 1.0)) {
        return 0.0;
    }
    return std::exp(-1.0 / bump_base(x));
}

double bump_psi_prime(double x)
{
    if (!(std::abs(x) < 1.0)) {
        return 0.0;
    }
    const double w = bump_base(x);
    const double e = std::exp(-1.0 / w);
    if (e == 0.0) {
        return 0.0;
    }
    return e * (-2.0 * x) / (w * w);
}

ZeroSetFunction::ZeroSetFunction(CompactSymmetricSet set)
    : set_(std::move(set))
{
    const auto dec = decompose_gaps(set_);
    for (const auto& g : dec.gaps) {
        if (g.mid > 0.0) {
            positive_gaps_.push_back(g);
        }
    }
    tail_start_ = dec.tail_start;
}

ZeroSetFunction::Term ZeroSetFunction::locate(double t) const
{
    if (t > tail_start_) {
        return {Term::Kind::tail, t - tail_start_, nullptr};
    }
    // First gap whose upper end exceeds t.
    auto it = std::upper_bound(positive_gaps_.begin(), positive_gaps_.end(), t,
                               [](double v, const Gap& g) { return v < g.hi; });
    if (it == positive_gaps_.end() || !(it->lo < t)) {
        return {};
    }
    return {Term::Kind::bump, (t - it->mid) / it->half_width, &*it};
}

double ZeroSetFunction::value(double x) const
{
    if (x == 0.0) {
        return 0.0;
    }
    const double t = std::abs(x);
    const auto term = locate(t);
    double magnitude = 0.0;
    switch (term.kind) {
    case Term::Kind::bump:
        magnitude = term.gap->half_width * bump_psi(term.u);
        break;
    case Term::Kind::tail:
        magnitude = std::exp(-tail_start_ / term.u);
        break;
    case Term::Kind::none:
        break;
    }
    return x > 0.0 ? -magnitude : magnitude;
}

double ZeroSetFunction::derivative(double x) const
{
    if (x == 0.0) {
        return 0.0;
    }
    // f_E is odd, so f_E' is even: evaluate at |x| for the positive-side term.
    const auto term = locate(std::abs(x));
    switch (term.kind) {
    case Term::Kind::bump:
        return -bump_psi_prime(term.u);
    case Term::Kind::tail: {
        const double e = std::exp(-tail_start_ / term.u);
        if (e == 0.0) {
            return 0.0;
        }
        return -e * tail_start_ / (term.u * term.u);
    }
    case Term::Kind::none:
        break;
    }
    return 0.0;
}

double ZeroSetFunction::log_magnitude(double x) const
{
    constexpr double minus_inf = -std::numeric_limits<double>::infinity();
    if (x == 0.0) {
        return minus_inf;
    }
    const auto term = locate(std::abs(x));
    switch (term.kind) {
    case Term::Kind::bump:
        return std::log(term.gap->half_width) - 1.0 / bump_base(term.u);
    case Term::Kind::tail:
        return -tail_start_ / term.u;
    case Term::Kind::none:
        break;
    }
    return minus_inf;
}

double f_E(double x, const CompactSymmetricSet& set) { return ZeroSetFunction(set).value(x); }

double f_E_prime(double x, const CompactSymmetricSet& set) { return ZeroSetFunction(set).derivative(x); }

} // namespace sewedflow
