#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sewedflow/errors.hpp"
#include "sewedflow/fields.hpp"

#include <cmath>
#include <vector>

using namespace sewedflow;

namespace {

std::vector<PiecewiseSystem> all_families()
{
    std::vector<PiecewiseSystem> out;
    for (int k : {2, 3, 4}) {
        FamilyParams p;
        p.k = k;
        out.push_back(make_family("finite_time_ck", p));
        out.push_back(make_family("centre_focus_sin", p));
    }
    out.push_back(make_family("finite_time_cinf"));
    out.push_back(make_family("sewed_centre"));
    out.push_back(make_family("cubic_focus"));
    for (const auto& set : {CompactSymmetricSet::from_parts({0.5}, {}),
                            CompactSymmetricSet::from_parts({0.5}, {{0.2, 0.3}}),
                            CompactSymmetricSet::from_parts({0.15, 0.45}, {{0.25, 0.3}})}) {
        FamilyParams p;
        p.set = set;
        out.push_back(make_family("eset", p));
    }
    out.push_back(make_polynomial_system({0.0, -2.0, 1.0}, {0.0, -2.0}));
    return out;
}

} // namespace

TEST_CASE("family names and construction errors")
{
    CHECK(family_names().size() == 6);
    for (const auto& n : family_names()) {
        if (n == "eset") {
            CHECK_THROWS_AS((void)make_family(n), InvalidSet);
        } else {
            CHECK_NOTHROW((void)make_family(n));
        }
    }
    CHECK_THROWS_AS((void)make_family("spiral"), UnknownFamily);
    FamilyParams bad;
    bad.k = 1;
    CHECK_THROWS_AS((void)make_family("finite_time_ck", bad), InvalidParameter);
    CHECK_THROWS_AS((void)make_family("centre_focus_sin", bad), InvalidParameter);
    bad.k = 0;
    bad.set = CompactSymmetricSet::from_parts({0.5}, {});
    CHECK_THROWS_AS((void)make_family("eset", bad), InvalidParameter);
    FamilyParams neg;
    neg.window = -1.0;
    CHECK_THROWS_AS((void)make_family("sewed_centre", neg), InvalidParameter);
    CHECK_THROWS_AS((void)make_polynomial_system({}, {0.0}), InvalidParameter);
}

TEST_CASE("type 3 and time convention hold for every built-in family")
{
    for (const auto& s : all_families()) {
        CAPTURE(s.family.name);
        CHECK(s.upper.q(0.0, 0.0) == 0.0);
        CHECK(s.lower.q(0.0, 0.0) == 0.0);
        CHECK(s.upper.p(0.0, 0.0) > 0.0);
        CHECK(s.lower.p(0.0, 0.0) < 0.0);
        const auto f = eval_field(s, 0.0, 0.0, Side::upper);
        CHECK(f.dx_dt == s.upper.p(0.0, 0.0));
        CHECK(f.dy_dt == 0.0);
    }
}

TEST_CASE("sf2 on 0 < |x| <= 0.1")
{
    for (const auto& s : all_families()) {
        CAPTURE(s.family.name);
        for (int i = 0; i <= 60; ++i) {
            const double x = 0.1 * std::pow(10.0, -0.1 * i);
            for (double sx : {x, -x}) {
                CHECK(axis_sign(s.upper, sx) * sx < 0.0);
                CHECK(axis_sign(s.lower, sx) * sx < 0.0);
                CHECK(sx * s.upper.q(sx, 0.0) <= 0.0);
                CHECK(sx * s.lower.q(sx, 0.0) <= 0.0);
            }
        }
    }
}

TEST_CASE("finite_time_ck matches its defining formula")
{
    for (int k : {2, 3, 4}) {
        FamilyParams p;
        p.k = k;
        const auto s = make_family("finite_time_ck", p);
        for (double x : {0.05, 0.2, 0.5, 0.9}) {
            CHECK(s.upper.q(x, 0.3) == doctest::Approx(-2.0 * k * std::pow(x, 2 * k - 1)));
            CHECK(s.upper.q(-x, 0.0) == doctest::Approx(-4.0 * k * std::pow(-x, 4 * k - 1)));
            CHECK(s.lower.q(-x, 0.0) == doctest::Approx(-s.upper.q(x, 0.0)));
            CHECK(s.lower.q(x, 0.0) == doctest::Approx(-s.upper.q(-x, 0.0)));
        }
        CHECK(s.smoothness.cls == Smoothness::Class::finite);
        CHECK(s.smoothness.k == 2 * k - 2);
    }
    const auto s = make_family("finite_time_ck");
    CHECK(s.upper.q(0.5, 0.0) == -0.5);
    CHECK(s.upper.q(-0.5, 0.0) == doctest::Approx(-8.0 * std::pow(-0.5, 7)));
}

TEST_CASE("field evaluation")
{
    const auto ck = make_family("finite_time_ck");
    const auto a = eval_field(ck, 0.5, 0.0, Side::upper);
    CHECK(a.dx_dt == 1.0);
    CHECK(a.dy_dt == -0.5);

    const auto cubic = make_family("cubic_focus");
    const auto b = eval_field(cubic, 0.1, 0.0, Side::upper);
    CHECK(b.dx_dt == 1.0);
    CHECK(b.dy_dt == doctest::Approx(-0.23));
    const auto lb = eval_field(cubic, 0.1, -0.2, Side::lower);
    CHECK(lb.dx_dt == -1.0);
    CHECK(lb.dy_dt == doctest::Approx(-0.2));

    const auto cinf = make_family("finite_time_cinf");
    CHECK(cinf.upper.q(-0.5, 0.0) == doctest::Approx(-(2.0 / -0.125) * std::exp(-4.0)));
    CHECK(cinf.upper.q(0.5, 0.0) == doctest::Approx(-4.0 * std::exp(-2.0)));
    CHECK(cinf.upper.q(0.0, 0.0) == 0.0);
}

TEST_CASE("evaluation is deterministic")
{
    for (const auto& s : all_families()) {
        for (double x : {-0.37, -0.01, 0.013, 0.29}) {
            const auto a = eval_field(s, x, 0.1, Side::upper);
            const auto b = eval_field(s, x, 0.1, Side::upper);
            CHECK(a.dx_dt == b.dx_dt);
            CHECK(a.dy_dt == b.dy_dt);
        }
    }
}

TEST_CASE("q does not depend on y for the built-ins")
{
    for (const auto& s : all_families()) {
        CHECK_FALSE(s.upper.q_depends_on_y);
        CHECK_FALSE(s.lower.q_depends_on_y);
        for (double x : {-0.4, -0.05, 0.07, 0.3}) {
            CHECK(s.upper.q(x, 0.0) == s.upper.q(x, 0.7));
            CHECK(s.lower.q(x, 0.0) == s.lower.q(x, -0.7));
        }
    }
}

TEST_CASE("antiderivative and log drop agree with Q")
{
    for (const auto& s : all_families()) {
        CAPTURE(s.family.name);
        for (const HalfField* h : {&s.upper, &s.lower}) {
            REQUIRE(h->q_antiderivative);
            const auto& a = *h->q_antiderivative;
            for (double x : {-0.3, -0.12, -0.07, 0.06, 0.11, 0.27}) {
                const double step = 1e-6;
                const double fd = (a(x + step) - a(x - step)) / (2.0 * step);
                const double q = h->q(x, 0.0);
                CHECK(std::abs(fd - q) <= 1e-6 * std::abs(q) + 1e-12);
                if (h->log_drop) {
                    CHECK((*h->log_drop)(x) == doctest::Approx(std::log(a(0.0) - a(x))).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("validation reports")
{
    const auto ck = validate_sewed_focus(make_family("finite_time_ck"), 0.1);
    CHECK(ck.type3_ok);
    CHECK(ck.sf1_ok);
    CHECK(ck.sf2_ok);
    CHECK(ck.no_sliding_ok);
    CHECK_FALSE(ck.sf2strong_ok);
    CHECK(ck.sewed_focus());
    CHECK(ck.b_plus == 1.0);
    CHECK(ck.b_minus == -1.0);

    const auto centre = validate_sewed_focus(make_family("sewed_centre"), 0.1);
    CHECK(centre.type3_ok);
    CHECK(centre.sf1_ok);
    CHECK(centre.sf2_ok);
    CHECK(centre.sf2strong_ok);
    CHECK(centre.no_sliding_ok);

    FamilyParams p;
    p.set = CompactSymmetricSet::from_parts({0.5}, {});
    CHECK(validate_sewed_focus(make_family("eset", p), 0.1).sf2_ok);

    CHECK(validate_sewed_focus(make_family("finite_time_cinf"), 0.5).sewed_focus());

    // Q+ and Q- of opposite sign on x > 0: sliding.
    const auto sliding = make_polynomial_system({0.0, -1.0}, {0.0, 1.0});
    const auto r = validate_sewed_focus(sliding, 0.1);
    CHECK_FALSE(r.no_sliding_ok);
    CHECK_FALSE(r.sewed_focus());

    const auto not_type3 = make_polynomial_system({0.1, -1.0}, {0.0, -1.0});
    CHECK_FALSE(validate_sewed_focus(not_type3, 0.1).type3_ok);

    CHECK_THROWS_AS((void)validate_sewed_focus(make_family("sewed_centre"), 0.0), InvalidParameter);
    CHECK_THROWS_AS((void)validate_sewed_focus(make_family("sewed_centre"), 0.1, 4), InvalidParameter);
}

TEST_CASE("sf2strong implies sf2 on the built-ins")
{
    for (const auto& s : all_families()) {
        const auto r = validate_sewed_focus(s, 0.1);
        if (r.sf2strong_ok) {
            CHECK(r.sf2_ok);
        }
    }
}

TEST_CASE("time reversal mirrors the field")
{
    const auto s = make_family("cubic_focus");
    const auto r = time_reversed(s);
    for (double x : {-0.2, 0.05, 0.3}) {
        CHECK(r.upper.q(x, 0.0) == -s.upper.q(-x, 0.0));
        CHECK(r.upper.p(x, 0.0) == s.upper.p(-x, 0.0));
        CHECK((*r.upper.q_antiderivative)(x) == (*s.upper.q_antiderivative)(-x));
    }
    CHECK(validate_sewed_focus(r, 0.1).sewed_focus());
}

TEST_CASE("heaviside and smoothness labels")
{
    CHECK(heaviside(0.0) == 1.0);
    CHECK(heaviside(-1e-300) == 0.0);
    CHECK(make_family("finite_time_cinf").smoothness.to_string() == "C^inf");
    CHECK(make_family("sewed_centre").smoothness.cls == Smoothness::Class::analytic);
    CHECK(make_family("centre_focus_sin").smoothness.k == 0);
}
