#include "sewedflow/fields.hpp"

#include "sewedflow/errors.hpp"

#include <cmath>
#include <memory>
#include <numbers>

namespace sewedflow {

std::string_view to_string(Side s) { return s == Side::upper ? "upper" : "lower"; }

std::string Smoothness::to_string() const
{
    switch (cls) {
    case Class::finite:
        return "C^" + std::to_string(k);
    case Class::infinite:
        return "C^inf";
    case Class::analytic:
        return "C^omega";
    }
    return "?";
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

HalfField unit_half(double p_value, AxisFunction q, AxisFunction antiderivative, AxisFunction log_drop)
{
    HalfField h;
    h.p = [p_value](double, double) { return p_value; };
    h.q = [q = std::move(q)](double x, double) { return q(x); };
    h.constant_p = p_value;
    h.q_antiderivative = std::move(antiderivative);
    if (log_drop) {
        h.log_drop = std::move(log_drop);
    }
    return h;
}

/// Lower half mirroring an upper half with P = 1: Q-(x) = -Q+(-x), A-(x) = A+(-x).
HalfField mirrored_lower(const HalfField& up)
{
    HalfField h;
    h.p = [](double, double) { return -1.0; };
    h.q = [q = up.q](double x, double y) { return -q(-x, y); };
    h.constant_p = -1.0;
    if (up.q_antiderivative) {
        h.q_antiderivative = [a = *up.q_antiderivative](double x) { return a(-x); };
    }
    if (up.log_drop) {
        h.log_drop = [l = *up.log_drop](double x) { return l(-x); };
    }
    return h;
}

/// Lower field P- = -1, Q- = -2x: parabolas y = x^2 - c^2.
HalfField parabolic_lower()
{
    return unit_half(
        -1.0, [](double x) { return -2.0 * x; }, [](double x) { return -x * x; },
        [](double x) { return 2.0 * std::log(std::abs(x)); });
}

PiecewiseSystem finite_time_ck(int k)
{
    if (k < 2) {
        throw InvalidParameter("finite_time_ck needs k >= 2");
    }
    const double m = 2.0 * k;  // exponent of the antiderivative on x >= 0
    const double n = 4.0 * k;  // ... and on x < 0
    auto q = [m, n](double x) {
        // -2k x^(2k-1) H(x) - 4k x^(4k-1) H(-x)
        return -m * std::pow(x, m - 1.0) * heaviside(x) - n * std::pow(x, n - 1.0) * heaviside(-x);
    };
    auto a = [m, n](double x) { return x >= 0.0 ? -std::pow(x, m) : -std::pow(x, n); };
    auto l = [m, n](double x) { return (x >= 0.0 ? m : n) * std::log(std::abs(x)); };

    PiecewiseSystem sys;
    sys.upper = unit_half(1.0, q, a, l);
    sys.lower = mirrored_lower(sys.upper);
    sys.smoothness = {Smoothness::Class::finite, 2 * k - 2};
    sys.family = {"finite_time_ck", {{"k", double(k)}}, std::nullopt};
    return sys;
}

PiecewiseSystem finite_time_cinf()
{
    auto q = [](double x) {
        if (x < 0.0) {
            return -2.0 / (x * x * x) * std::exp(-1.0 / (x * x));
        }
        if (x > 0.0) {
            return -1.0 / (x * x) * std::exp(-1.0 / x);
        }
        return 0.0;
    };
    auto a = [](double x) {
        if (x < 0.0) {
            return -std::exp(-1.0 / (x * x));
        }
        if (x > 0.0) {
            return -std::exp(-1.0 / x);
        }
        return 0.0;
    };
    auto l = [](double x) { return x < 0.0 ? -1.0 / (x * x) : -1.0 / x; };

    PiecewiseSystem sys;
    sys.upper = unit_half(1.0, q, a, l);
    sys.lower = mirrored_lower(sys.upper);
    sys.smoothness = {Smoothness::Class::infinite, 0};
    sys.family = {"finite_time_cinf", {}, std::nullopt};
    return sys;
}

PiecewiseSystem centre_focus_sin(int k)
{
    if (k < 2) {
        throw InvalidParameter("centre_focus_sin needs k >= 2");
    }
    // f(s) = sin(2 pi s); upper curves are y = -x^2 + x^(2k) f(1/x) + const.
    auto q = [k](double x) {
        if (x == 0.0) {
            return 0.0;
        }
        const double s = 1.0 / x;
        return -2.0 * x + 2.0 * k * std::pow(x, 2 * k - 1) * std::sin(two_pi * s)
               - std::pow(x, 2 * k - 2) * two_pi * std::cos(two_pi * s);
    };
    auto a = [k](double x) {
        if (x == 0.0) {
            return 0.0;
        }
        return -x * x + std::pow(x, 2 * k) * std::sin(two_pi / x);
    };
    auto l = [k](double x) {
        return 2.0 * std::log(std::abs(x)) + std::log1p(-std::pow(x, 2 * k - 2) * std::sin(two_pi / x));
    };

    PiecewiseSystem sys;
    sys.upper = unit_half(1.0, q, a, l);
    sys.lower = parabolic_lower();
    // x^(2k-2) cos(2 pi / x) has k-2 continuous derivatives at the origin.
    sys.smoothness = {Smoothness::Class::finite, k - 2};
    sys.family = {"centre_focus_sin", {{"k", double(k)}}, std::nullopt};
    return sys;
}

PiecewiseSystem sewed_centre()
{
    PiecewiseSystem sys;
    sys.upper = unit_half(
        1.0, [](double x) { return -2.0 * x; }, [](double x) { return -x * x; },
        [](double x) { return 2.0 * std::log(std::abs(x)); });
    sys.lower = parabolic_lower();
    sys.smoothness = {Smoothness::Class::analytic, 0};
    sys.family = {"sewed_centre", {}, std::nullopt};
    return sys;
}

PiecewiseSystem cubic_focus()
{
    PiecewiseSystem sys;
    sys.upper = unit_half(
        1.0, [](double x) { return -2.0 * x - 3.0 * x * x; }, [](double x) { return -x * x - x * x * x; },
        [](double x) { return 2.0 * std::log(std::abs(x)) + std::log1p(x); });
    sys.lower = parabolic_lower();
    sys.smoothness = {Smoothness::Class::analytic, 0};
    sys.family = {"cubic_focus", {}, std::nullopt};
    return sys;
}

PiecewiseSystem eset_family(const CompactSymmetricSet& set, int k)
{
    if (k < 1) {
        throw InvalidParameter("eset needs k >= 1");
    }
    // Q+ = -2x + x^2 f_E'(x) + 2x f_E(x), i.e. A+ = -x^2 + x^2 f_E(x).
    auto fe = std::make_shared<const ZeroSetFunction>(set);
    auto q = [fe](double x) { return -2.0 * x + x * x * fe->derivative(x) + 2.0 * x * fe->value(x); };
    auto a = [fe](double x) { return -x * x + x * x * fe->value(x); };
    auto l = [fe](double x) { return 2.0 * std::log(std::abs(x)) + std::log1p(-fe->value(x)); };

    PiecewiseSystem sys;
    sys.upper = unit_half(1.0, q, a, l);
    sys.lower = parabolic_lower();
    // The bump-sum f_E is C-infinity whatever k is requested.
    sys.smoothness = {Smoothness::Class::infinite, 0};
    sys.family = {"eset", {{"k", double(k)}}, set};
    return sys;
}

double polyval(const std::vector<double>& c, double x)
{
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

std::vector<double> integrated(const std::vector<double>& c)
{
    std::vector<double> out(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        out[i + 1] = c[i] / double(i + 1);
    }
    return out;
}

} // namespace

const std::vector<std::string>& family_names()
{
    static const std::vector<std::string> names{"finite_time_ck", "finite_time_cinf", "centre_focus_sin",
                                                "sewed_centre",   "cubic_focus",      "eset"};
    return names;
}

PiecewiseSystem make_family(std::string_view name, const FamilyParams& params)
{
    if (!(params.window > 0.0)) {
        throw InvalidParameter("window must be positive");
    }
    PiecewiseSystem sys;
    if (name == "finite_time_ck") {
        sys = finite_time_ck(params.k);
    } else if (name == "finite_time_cinf") {
        sys = finite_time_cinf();
    } else if (name == "centre_focus_sin") {
        sys = centre_focus_sin(params.k);
    } else if (name == "sewed_centre") {
        sys = sewed_centre();
    } else if (name == "cubic_focus") {
        sys = cubic_focus();
    } else if (name == "eset") {
        if (!params.set) {
            throw InvalidSet("eset family needs a set");
        }
        sys = eset_family(*params.set, params.k);
    } else {
        throw UnknownFamily("unknown family '" + std::string(name) + "'");
    }
    sys.window = params.window;
    return sys;
}

PiecewiseSystem make_polynomial_system(std::vector<double> q_upper_coeffs, std::vector<double> q_lower_coeffs,
                                       double window)
{
    if (q_upper_coeffs.empty() || q_lower_coeffs.empty()) {
        throw InvalidParameter("polynomial coefficient lists must be non-empty");
    }
    auto poly_half = [](double p_value, std::vector<double> c) {
        auto ac = integrated(c);
        HalfField h;
        h.p = [p_value](double, double) { return p_value; };
        h.q = [c](double x, double) { return polyval(c, x); };
        h.constant_p = p_value;
        h.q_antiderivative = [ac](double x) { return polyval(ac, x); };
        return h;
    };

    PiecewiseSystem sys;
    sys.family = {"polynomial", {}, std::nullopt};
    for (std::size_t i = 0; i < q_upper_coeffs.size(); ++i) {
        sys.family.params["q_upper_" + std::to_string(i)] = q_upper_coeffs[i];
    }
    for (std::size_t i = 0; i < q_lower_coeffs.size(); ++i) {
        sys.family.params["q_lower_" + std::to_string(i)] = q_lower_coeffs[i];
    }
    sys.upper = poly_half(1.0, std::move(q_upper_coeffs));
    sys.lower = poly_half(-1.0, std::move(q_lower_coeffs));
    sys.smoothness = {Smoothness::Class::analytic, 0};
    sys.window = window;
    return sys;
}

PiecewiseSystem time_reversed(const PiecewiseSystem& system)
{
    auto reverse = [](const HalfField& f) {
        HalfField h;
        h.p = [p = f.p](double x, double y) { return p(-x, y); };
        h.q = [q = f.q](double x, double y) { return -q(-x, y); };
        h.p_depends_on_y = f.p_depends_on_y;
        h.q_depends_on_y = f.q_depends_on_y;
        h.constant_p = f.constant_p;
        if (f.q_antiderivative) {
            h.q_antiderivative = [a = *f.q_antiderivative](double x) { return a(-x); };
        }
        if (f.log_drop) {
            h.log_drop = [l = *f.log_drop](double x) { return l(-x); };
        }
        return h;
    };
    PiecewiseSystem out = system;
    out.upper = reverse(system.upper);
    out.lower = reverse(system.lower);
    out.family.name = system.family.name + "~reversed";
    return out;
}

FieldValue eval_field(const PiecewiseSystem& system, double x, double y, Side side)
{
    const auto& h = system.half(side);
    return {h.p(x, y), h.q(x, y)};
}

int axis_sign(const HalfField& field, double x)
{
    const double q = field.q(x, 0.0);
    if (q > 0.0) {
        return 1;
    }
    if (q < 0.0) {
        return -1;
    }
    if (x != 0.0 && field.log_drop) {
        // A = A(0) - exp(l), so sign(Q) = sign(A') = -sign(l').
        const double h = 1e-3 * std::abs(x);
        const double slope = ((*field.log_drop)(x + h) - (*field.log_drop)(x - h)) / (2.0 * h);
        if (slope > 0.0) {
            return -1;
        }
        if (slope < 0.0) {
            return 1;
        }
    }
    return 0;
}

ValidationReport validate_sewed_focus(const PiecewiseSystem& system, double half_width, int samples)
{
    if (!(half_width > 0.0) || samples < 8) {
        throw InvalidParameter("validate_sewed_focus needs half_width > 0 and samples >= 8");
    }
    ValidationReport r;
    r.neighbourhood = half_width;
    r.samples = samples;
    r.b_plus = system.upper.p(0.0, 0.0);
    r.b_minus = system.lower.p(0.0, 0.0);
    r.type3_ok = r.b_plus != 0.0 && r.b_minus != 0.0 && std::abs(system.upper.q(0.0, 0.0)) <= 1e-12
                 && std::abs(system.lower.q(0.0, 0.0)) <= 1e-12;
    r.sf1_ok = r.b_plus > 0.0 && r.b_minus < 0.0;

    constexpr double decades = 6.0;
    r.sf2_ok = true;
    r.no_sliding_ok = true;
    for (int i = 0; i < samples; ++i) {
        const double mag = half_width * std::pow(10.0, -decades * double(i) / double(samples - 1));
        for (double x : {mag, -mag}) {
            const int su = axis_sign(system.upper, x);
            const int sl = axis_sign(system.lower, x);
            const int want = x > 0.0 ? -1 : 1;
            if (su != want || sl != want) {
                r.sf2_ok = false;
            }
            if (su == 0 || sl == 0 || su != sl) {
                r.no_sliding_ok = false;
            }
        }
    }

    constexpr double h = 1e-6;
    constexpr double strict = -1.5e-8;
    const double du = (system.upper.q(h, 0.0) - system.upper.q(-h, 0.0)) / (2.0 * h);
    const double dl = (system.lower.q(h, 0.0) - system.lower.q(-h, 0.0)) / (2.0 * h);
    r.sf2strong_ok = du < strict && dl < strict;
    return r;
}

} // namespace sewedflow
