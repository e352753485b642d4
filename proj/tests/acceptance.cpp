// Acceptance checks. Usage: acceptance [criterion...]; no argument runs all.
// Prints one PASS/FAIL line per criterion; exit status 1 if any failed.

#include "oracles.hpp"
#include "sewedflow/analysis.hpp"
#include "sewedflow/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace sewedflow;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

PiecewiseSystem family(const char* name, int k = 2)
{
    FamilyParams p;
    p.k = k;
    return make_family(name, p);
}

PiecewiseSystem eset_system(const CompactSymmetricSet& set, int k = 2)
{
    FamilyParams p;
    p.k = k;
    p.set = set;
    return make_family("eset", p);
}

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Outcome squaring_cascade()
{
    const auto ck = family("finite_time_ck");
    double curve_err = 0.0;
    double generic_err = 0.0;
    for (double x0 : {0.1, 0.2, 0.3, 0.4, 0.5}) {
        const auto a = crossing_sequence(ck, -x0, 6, 1e-300, default_crossing_tol, Engine::curve);
        const auto b = crossing_sequence(ck, -x0, 6, 1e-300, default_crossing_tol, Engine::generic);
        if (a.entries.size() < 6 || b.entries.size() < 6) {
            return {false, "sequence ended early"};
        }
        for (int r = 0; r <= 5; ++r) {
            const double e = oracle::squared(x0, r);
            curve_err = std::max(curve_err, std::abs(std::abs(a.entries[r].position) - e) / e);
            generic_err = std::max(generic_err, std::abs(std::abs(b.entries[r].position) - e) / e);
        }
    }
    return {curve_err <= 1e-9 && generic_err <= 1e-6,
            "max rel err curve " + fmt("%.2e", curve_err) + ", generic " + fmt("%.2e", generic_err)};
}

Outcome finite_total_time()
{
    Outcome o;
    const double t_star = oracle::cascade_total_time(0.5);
    std::vector<std::pair<std::string, PiecewiseSystem>> systems{{"ck2", family("finite_time_ck", 2)},
                                                                  {"ck3", family("finite_time_ck", 3)},
                                                                  {"ck4", family("finite_time_ck", 4)},
                                                                  {"cinf", family("finite_time_cinf")}};
    for (const auto& [name, s] : systems) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto t = time_to_origin(s, -0.5);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double err = std::abs(t.total_time - t_star);
        const bool ok = t.verdict == TimingVerdict::finite && err <= 1e-10 && secs < 1.0;
        o.ok = o.ok && ok;
        o.detail += name + " " + std::string(to_string(t.verdict)) + " |T-T*|=" + fmt("%.1e", err) + "; ";
    }
    o.detail += "T*=" + fmt("%.16g", t_star);
    return o;
}

Outcome trichotomy()
{
    struct Case {
        std::string name;
        PiecewiseSystem system;
        double half_width;
        FocusKind expected;
    };
    const std::vector<Case> cases{
        {"finite_time_ck", family("finite_time_ck"), 0.5, FocusKind::stable_focus},
        {"cubic_focus", family("cubic_focus"), 0.5, FocusKind::stable_focus},
        {"sewed_centre", family("sewed_centre"), 0.5, FocusKind::centre},
        {"centre_focus_sin", family("centre_focus_sin"), 0.3, FocusKind::centre_focus},
        {"eset{0.5}", eset_system(CompactSymmetricSet::from_parts({0.5}, {})), 0.6, FocusKind::centre_focus},
        {"eset[0.2,0.3]u{0.5}", eset_system(CompactSymmetricSet::from_parts({0.5}, {{0.2, 0.3}})), 0.6,
         FocusKind::centre_focus},
    };
    int wrong = 0;
    std::string detail;
    for (const auto& c : cases) {
        ClassifyOptions o;
        o.half_width = c.half_width;
        std::string got;
        try {
            const auto k = classify(c.system, o).kind;
            got = std::string(to_string(k));
            wrong += k != c.expected;
        } catch (const Error& e) {
            got = e.what();
            ++wrong;
        }
        detail += c.name + "=" + got + " ";
    }
    return {wrong == 0, detail + "misclassified " + std::to_string(wrong)};
}

Outcome sin_orbits()
{
    const auto s = family("centre_focus_sin");
    Outcome o;
    for (int n = 4; n <= 10; ++n) {
        const double x0 = 1.0 / n;
        const double c = std::abs(chi(s, -x0));
        const double h = 0.1 * (1.0 / n - 1.0 / (n + 1));
        const auto r = periodic_orbit_stability(s, x0, h);
        const auto expected = n % 2 == 0 ? OrbitStability::stable : OrbitStability::unstable;
        o.ok = o.ok && c <= 1e-8 && r.verdict == expected;
        o.detail += "n=" + std::to_string(n) + ":" + std::string(to_string(r.verdict)) + fmt("(|chi|=%.0e) ", c);
    }
    return o;
}

Outcome eset_iff()
{
    struct SetCase {
        std::string name;
        CompactSymmetricSet set;
        std::vector<double> inside;
        std::vector<double> outside;
    };
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) {
        grid.push_back(0.2 + 0.01 * i);
    }
    grid.push_back(0.5);
    std::vector<double> three_in{0.15, 0.45};
    for (int i = 0; i <= 5; ++i) {
        three_in.push_back(0.25 + 0.01 * i);
    }
    const std::vector<SetCase> sets{
        {"[0.2,0.3]u{0.5}", CompactSymmetricSet::from_parts({0.5}, {{0.2, 0.3}}), grid,
         {0.1, 0.15, 0.35, 0.4, 0.45, 0.55, 0.6}},
        {"{0.5}", CompactSymmetricSet::from_parts({0.5}, {}), {0.5}, {0.1, 0.2, 0.3, 0.4, 0.45, 0.55, 0.6}},
        {"{0.15}u[0.25,0.3]u{0.45}", CompactSymmetricSet::from_parts({0.15, 0.45}, {{0.25, 0.3}}), three_in,
         {0.1, 0.2, 0.35, 0.4, 0.5, 0.55}},
    };
    Outcome o;
    for (const auto& c : sets) {
        const auto s = eset_system(c.set);
        double worst_in = 0.0;
        double least_out = INFINITY;
        for (double x0 : c.inside) {
            worst_in = std::max(worst_in, std::abs(sigma_plus(s, -x0) - x0));
        }
        for (double x0 : c.outside) {
            least_out = std::min(least_out, std::abs(sigma_plus(s, -x0) - x0));
        }
        const auto v = validate_sewed_focus(s, s.window);
        const bool ok = worst_in <= 1e-8 && least_out >= 1e-6 && v.sf2_ok && v.no_sliding_ok;
        o.ok = o.ok && ok;
        o.detail += c.name + fmt(" in<=%.1e", worst_in) + fmt(" out>=%.1e", least_out) +
                    (v.sf2_ok && v.no_sliding_ok ? " sf2+no-sliding; " : " validation failed; ");
    }
    return o;
}

Outcome infinite_time()
{
    const auto cubic = family("cubic_focus");
    const bool harmonic = harmonic_lower_bound_check(cubic, -0.05, 50);
    const auto t = time_to_origin(cubic, -0.05);
    return {harmonic && t.verdict == TimingVerdict::infinite_suspected,
            std::string("harmonic bound N=50 ") + (harmonic ? "holds" : "fails") + ", time " +
                std::string(to_string(t.verdict)) + fmt(" (alpha=%.4f)", t.alpha)};
}

Outcome properties()
{
    std::vector<PiecewiseSystem> systems;
    for (int k : {2, 3, 4}) {
        systems.push_back(family("finite_time_ck", k));
        systems.push_back(family("centre_focus_sin", k));
    }
    systems.push_back(family("finite_time_cinf"));
    systems.push_back(family("sewed_centre"));
    systems.push_back(family("cubic_focus"));
    const std::vector<CompactSymmetricSet> sets{CompactSymmetricSet::from_parts({0.5}, {}),
                                                CompactSymmetricSet::from_parts({0.5}, {{0.2, 0.3}}),
                                                CompactSymmetricSet::from_parts({0.15, 0.45}, {{0.25, 0.3}})};
    for (const auto& e : sets) {
        systems.push_back(eset_system(e));
    }

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> mag(0.01, 0.3);
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<std::size_t> pick(0, systems.size() - 1);
    double inv = 0.0;
    int sign_fail = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto& s = systems[pick(rng)];
        const double x = (coin(rng) ? 1.0 : -1.0) * mag(rng);
        const Side side = coin(rng) ? Side::upper : Side::lower;
        const double y = sigma(s, side, x);
        sign_fail += !(x * y < 0.0);
        inv = std::max(inv, std::abs(sigma(s, side, y) - x));
    }

    int odd_fail = 0;
    int zero_fail = 0;
    double deriv = 0.0;
    for (const auto& e : sets) {
        const ZeroSetFunction f(e);
        std::uniform_real_distribution<double> u(-2.0 * e.max_abs(), 2.0 * e.max_abs());
        for (int i = 0; i < 10000; ++i) {
            const double x = u(rng);
            odd_fail += f.value(-x) != -f.value(x);
            const bool in_e0 = distance_to_E0(x, e) == 0.0;
            zero_fail += std::isinf(f.log_magnitude(x)) != in_e0 || (in_e0 && f.value(x) != 0.0);
            if (distance_to_E0(x, e) >= 1e-3) {
                const double h = 1e-6;
                const double fd = (f.value(x + h) - f.value(x - h)) / (2.0 * h);
                const double d = f.derivative(x);
                deriv = std::max(deriv, std::abs(d - fd) / (1.0 + std::abs(d)));
            }
        }
    }

    double engines = 0.0;
    for (const auto& s : systems) {
        for (double x : {-0.25, -0.13, -0.05, 0.05, 0.17}) {
            const double a = sigma_plus(s, x, default_crossing_tol, Engine::curve);
            const double b = sigma_plus(s, x, default_crossing_tol, Engine::generic);
            engines = std::max(engines, std::abs(a - b) / std::abs(a));
        }
    }
    const bool ok = inv <= 1e-10 && sign_fail == 0 && odd_fail == 0 && zero_fail == 0 && deriv <= 1e-5 &&
                    engines <= 1e-7;
    return {ok, fmt("involution %.1e", inv) + ", sign failures " + std::to_string(sign_fail) + ", oddness failures " +
                    std::to_string(odd_fail) + ", zero-set failures " + std::to_string(zero_fail) +
                    fmt(", f_E' rel err %.1e", deriv) + fmt(", engine rel diff %.1e", engines)};
}

Outcome order_estimate()
{
    const int cubic = estimate_chi_order(family("cubic_focus"), 1e-3, 1e-1);
    bool not_applicable = false;
    try {
        (void)estimate_chi_order(family("finite_time_ck"), 1e-3, 1e-1);
    } catch (const NotApplicable&) {
        not_applicable = true;
    }
    return {cubic == 2 && not_applicable, "cubic_focus order " + std::to_string(cubic) + ", finite_time_ck " +
                                              (not_applicable ? "NotApplicable" : "returned an order")};
}

struct Criterion {
    const char* title;
    double budget_seconds;
    std::function<Outcome()> check;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria{
        {"squaring cascade", 1.0, squaring_cascade},
        {"finite total time", 4.0, finite_total_time},
        {"classification trichotomy", 10.0, trichotomy},
        {"sin-family periodic orbits", 5.0, sin_orbits},
        {"prescribed periodic set", 10.0, eset_iff},
        {"infinite-time evidence", 2.0, infinite_time},
        {"property suite", 30.0, properties},
        {"order estimation", 2.0, order_estimate},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int n = std::atoi(argv[i]);
        if (n < 1 || n > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "acceptance: no criterion '%s'\n", argv[i]);
            return 2;
        }
        selected.push_back(n);
    }
    if (selected.empty()) {
        for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
            selected.push_back(n);
        }
    }

    bool all = true;
    for (int n : selected) {
        const auto& c = criteria[n - 1];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        while (!o.detail.empty() && (o.detail.back() == ' ' || o.detail.back() == ';')) {
            o.detail.pop_back();
        }
        const bool in_time = secs < c.budget_seconds;
        const bool ok = o.ok && in_time;
        all = all && ok;
        std::printf("criterion %d %s: %s (%s; %.3f s of %.0f s%s)\n", n, c.title, ok ? "PASS" : "FAIL",
                    o.detail.c_str(), secs, c.budget_seconds, in_time ? "" : ", over budget");
    }
    return all ? 0 : 1;
}
