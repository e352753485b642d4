#include "sewedflow/cli.hpp"

#include "sewedflow/analysis.hpp"
#include "sewedflow/errors.hpp"
#include "sewedflow/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sewedflow {

using nlohmann::json;

namespace {

constexpr double periodic_tol = 1e-8;
constexpr double displacement_floor = 1e-6;

std::string pick_format(const RunConfig& c, const char* fallback)
{
    const std::string f = c.format.empty() ? fallback : c.format;
    if (f != "csv" && f != "json") {
        throw InvalidParameter("--format must be csv or json");
    }
    return f;
}

PiecewiseSystem load_system(const RunConfig& c)
{
    if (c.system_spec.empty()) {
        throw InvalidParameter("--system is required for '" + c.command + "'");
    }
    return system_from_json(load_json_argument(c.system_spec), c.window);
}

void emit_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

int cmd_families(const RunConfig& c, std::ostream& os)
{
    const auto& names = family_names();
    if (pick_format(c, "csv") == "json") {
        emit_json(os, json(names));
    } else {
        os << "family\n";
        for (const auto& n : names) {
            os << n << '\n';
        }
    }
    return 0;
}

int cmd_validate(const RunConfig& c, std::ostream& os)
{
    const auto sys = load_system(c);
    const double hw = c.half_width.value_or(0.1);
    if (!(hw > 0.0) || hw > c.window) {
        throw InvalidParameter("--half-width must lie in (0, window]");
    }
    const auto report = validate_sewed_focus(sys, hw, c.samples);
    json j = to_json(report);
    j["system"] = describe_system(sys);
    emit_json(os, j);
    return 0;
}

int cmd_simulate(const RunConfig& c, std::ostream& os, std::ostream& err)
{
    const auto sys = load_system(c);
    const int arcs = c.n_crossings.value_or(4);
    std::vector<TrajectoryPoint> pts;
    try {
        pts = sample_trajectory(sys, c.x0, arcs, c.resolution, c.tol);
    } catch (const NoReturn& e) {
        err << "sewedflow: " << e.what() << '\n';
    }
    if (pick_format(c, "csv") == "json") {
        json rows = json::array();
        for (const auto& p : pts) {
            rows.push_back({{"arc_index", p.arc}, {"side", std::string(to_string(p.side))}, {"x", p.x}, {"y", p.y}});
        }
        emit_json(os, rows);
    } else {
        write_trajectory_csv(os, pts);
    }
    return 0;
}

int cmd_return_map(const RunConfig& c, std::ostream& os, std::ostream& err)
{
    const auto sys = load_system(c);
    CrossingSequence seq;
    std::string error;
    try {
        seq = crossing_sequence(sys, c.x0, c.n_crossings.value_or(8), default_floor, c.tol);
    } catch (const NoReturn& e) {
        error = e.what();
        seq.entries.push_back({0, c.x0, 0.0, 0.0});
        seq.terminated_by = Termination::left_window;
    }
    if (pick_format(c, "csv") == "json") {
        json j = to_json(seq);
        if (!error.empty()) {
            j["error"] = error;
        }
        emit_json(os, j);
    } else {
        if (!error.empty()) {
            err << "sewedflow: " << error << '\n';
        }
        write_crossings_csv(os, seq);
    }
    return 0;
}

int cmd_chi(const RunConfig& c, std::ostream& os, std::ostream& err)
{
    const auto sys = load_system(c);
    const int n = c.grid.value_or(64);
    const double hw = c.half_width.value_or(0.5);
    std::vector<double> xs;
    std::vector<double> vs;
    for (int i = 0; i < n; ++i) {
        const double x = -hw * std::pow(10.0, -3.0 * double(i) / double(n - 1));
        double v = std::nan("");
        try {
            v = chi(sys, x, c.tol);
        } catch (const NoReturn& e) {
            err << "sewedflow: x = " << format_real(x) << ": " << e.what() << '\n';
        }
        xs.push_back(x);
        vs.push_back(v);
    }
    if (pick_format(c, "csv") == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            rows.push_back({{"x", xs[i]}, {"chi", std::isfinite(vs[i]) ? json(vs[i]) : json(nullptr)}});
        }
        emit_json(os, rows);
    } else {
        write_chi_csv(os, xs, vs);
    }
    return 0;
}

int cmd_classify(const RunConfig& c, std::ostream& os)
{
    const auto sys = load_system(c);
    ClassifyOptions opt;
    opt.half_width = c.half_width.value_or(0.5);
    opt.n_samples = c.grid.value_or(opt.n_samples);
    opt.tol = c.tol;
    pick_format(c, "json");
    json j;
    try {
        j = to_json(classify(sys, opt));
    } catch (const Undetermined& e) {
        j["kind"] = "Undetermined";
        j["error"] = e.what();
    } catch (const NoReturn& e) {
        j["kind"] = "Undetermined";
        j["error"] = e.what();
    }
    j["system"] = describe_system(sys);
    emit_json(os, j);
    return 0;
}

int cmd_time(const RunConfig& c, std::ostream& os)
{
    const auto sys = load_system(c);
    pick_format(c, "json");
    json j;
    try {
        j = to_json(time_to_origin(sys, c.x0, c.n_crossings.value_or(256), default_floor, c.tol));
    } catch (const NoReturn& e) {
        j = to_json(Timing{});
        j["error"] = e.what();
    }
    j["x0"] = c.x0;
    j["system"] = describe_system(sys);
    emit_json(os, j);
    return 0;
}

struct Probe {
    double x0 = 0.0;
    bool in_set = false;
    double displacement = 0.0;
    double predicted = 0.0;
    std::string status;
};

int cmd_synthesize(const RunConfig& c, std::ostream& os)
{
    if (c.set_spec.empty()) {
        throw InvalidParameter("--set is required for 'synthesize'");
    }
    if (c.probes < 1) {
        throw InvalidParameter("--probes must be positive");
    }
    FamilyParams params;
    params.k = c.k;
    params.window = c.window;
    params.set = set_from_json(load_json_argument(c.set_spec));
    const auto sys = make_family("eset", params);
    const ZeroSetFunction fe(*params.set);
    const double reach = params.set->max_abs() + 0.2;
    if (reach > c.window) {
        throw InvalidParameter("max(E) + 0.2 exceeds the window");
    }

    std::vector<double> xs;
    for (int i = 1; i <= c.probes; ++i) {
        xs.push_back(reach * double(i) / double(c.probes));
    }
    for (const auto& comp : params.set->components()) {
        xs.push_back(comp.lo);
        if (!comp.is_point()) {
            xs.push_back(0.5 * (comp.lo + comp.hi));
            xs.push_back(comp.hi);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    bool consistent = true;
    std::vector<Probe> probes;
    for (double x : xs) {
        Probe p;
        p.x0 = x;
        p.in_set = params.set->contains(x);
        p.predicted = x * std::exp(fe.log_magnitude(x));
        try {
            p.displacement = std::abs(sigma_plus(sys, -x, c.tol) - x);
            if (p.in_set) {
                p.status = p.displacement <= periodic_tol ? "pass" : "FAIL";
            } else if (p.displacement >= displacement_floor) {
                p.status = "pass";
            } else {
                p.status = p.predicted < displacement_floor ? "inconclusive" : "FAIL";
            }
        } catch (const NoReturn&) {
            p.displacement = std::nan("");
            p.status = "FAIL";
        }
        consistent = consistent && p.status != "FAIL";
        probes.push_back(p);
    }
    const auto report = validate_sewed_focus(sys, c.window, c.samples);
    const bool window_ok = report.sf2_ok && report.no_sliding_ok;
    consistent = consistent && window_ok;

    if (pick_format(c, "csv") == "json") {
        json j;
        j["set"] = params.set->to_string();
        j["k"] = c.k;
        j["validation"] = to_json(report);
        j["probes"] = json::array();
        for (const auto& p : probes) {
            j["probes"].push_back({{"x0", p.x0},
                                   {"in_E", p.in_set},
                                   {"displacement", std::isfinite(p.displacement) ? json(p.displacement) : json(nullptr)},
                                   {"predicted", p.predicted},
                                   {"status", p.status}});
        }
        j["thresholds"] = {{"periodic", periodic_tol}, {"displaced", displacement_floor}};
        j["consistent"] = consistent;
        emit_json(os, j);
    } else {
        os << "x0,in_E,displacement,predicted,status\n";
        for (const auto& p : probes) {
            os << format_real(p.x0) << ',' << (p.in_set ? "true" : "false") << ',' << format_real(p.displacement)
               << ',' << format_real(p.predicted) << ',' << p.status << '\n';
        }
        os << "# " << params.set->to_string() << " k=" << c.k << " sf2=" << (report.sf2_ok ? "ok" : "fail")
           << " no_sliding=" << (report.no_sliding_ok ? "ok" : "fail")
           << " consistent=" << (consistent ? "true" : "false") << '\n';
    }
    return consistent ? 0 : 2;
}

int dispatch(const RunConfig& c, std::ostream& os, std::ostream& err)
{
    if (!(c.tol > 0.0)) {
        throw InvalidParameter("--tol must be positive");
    }
    if (!(c.window > 0.0)) {
        throw InvalidParameter("--window must be positive");
    }
    if (c.half_width && (!(*c.half_width > 0.0) || *c.half_width > c.window)) {
        throw InvalidParameter("--half-width must lie in (0, window]");
    }
    if (c.grid && *c.grid < 2) {
        throw InvalidParameter("--grid must be at least 2");
    }
    if (c.command == "families") {
        return cmd_families(c, os);
    }
    if (c.command == "validate") {
        return cmd_validate(c, os);
    }
    if (c.command == "simulate") {
        return cmd_simulate(c, os, err);
    }
    if (c.command == "return-map") {
        return cmd_return_map(c, os, err);
    }
    if (c.command == "chi") {
        return cmd_chi(c, os, err);
    }
    if (c.command == "classify") {
        return cmd_classify(c, os);
    }
    if (c.command == "time") {
        return cmd_time(c, os);
    }
    if (c.command == "synthesize") {
        return cmd_synthesize(c, os);
    }
    throw InvalidParameter("unknown command '" + c.command + "'");
}

} // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        std::ostringstream buffer;
        const int status = dispatch(config, buffer, err);
        if (config.out.empty()) {
            out << buffer.str();
        } else {
            std::ofstream file(config.out);
            if (!file) {
                err << "sewedflow: cannot write '" << config.out << "'\n";
                return 1;
            }
            file << buffer.str();
        }
        return status;
    } catch (const Error& e) {
        err << "sewedflow: " << e.what() << '\n';
        return 1;
    } catch (const json::exception& e) {
        err << "sewedflow: " << e.what() << '\n';
        return 1;
    }
}

int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Sewed focus analysis for planar piecewise-smooth systems"};
    app.require_subcommand(1);
    RunConfig c;
    std::optional<double> window;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--window", window, "working window half-width L");
        sub->add_option("--format", c.format, "csv or json");
        sub->add_option("--out", c.out, "output file (default stdout)");
    };
    auto add_system = [&](CLI::App* sub) {
        sub->add_option("--system", c.system_spec, "system spec: inline JSON or path")->required();
        sub->add_option("--tol", c.tol, "crossing tolerance");
    };

    auto* families = app.add_subcommand("families", "list built-in families");
    add_common(families);

    auto* validate = app.add_subcommand("validate", "check the sewed-focus conditions");
    add_common(validate);
    add_system(validate);
    validate->add_option("--half-width", c.half_width, "sampling neighbourhood");
    validate->add_option("--samples", c.samples, "samples per side");

    auto* simulate = app.add_subcommand("simulate", "trajectory samples as CSV");
    add_common(simulate);
    add_system(simulate);
    simulate->add_option("--x0", c.x0, "launch abscissa");
    simulate->add_option("--n-crossings", c.n_crossings, "number of arcs");
    simulate->add_option("--resolution", c.resolution, "points per arc");

    auto* return_map = app.add_subcommand("return-map", "crossing sequence");
    add_common(return_map);
    add_system(return_map);
    return_map->add_option("--x0", c.x0, "launch abscissa");
    return_map->add_option("--n-crossings", c.n_crossings, "entries including the launch point");

    auto* chi_cmd = app.add_subcommand("chi", "displacement function on a log grid");
    add_common(chi_cmd);
    add_system(chi_cmd);
    chi_cmd->add_option("--grid", c.grid, "number of samples");
    chi_cmd->add_option("--half-width", c.half_width, "outermost |x|");

    auto* classify_cmd = app.add_subcommand("classify", "focus / centre / centre-focus report");
    add_common(classify_cmd);
    add_system(classify_cmd);
    classify_cmd->add_option("--grid", c.grid, "number of samples");
    classify_cmd->add_option("--half-width", c.half_width, "outermost |x|");

    auto* time_cmd = app.add_subcommand("time", "finite or infinite approach time");
    add_common(time_cmd);
    add_system(time_cmd);
    time_cmd->add_option("--x0", c.x0, "launch abscissa");
    time_cmd->add_option("--n-crossings", c.n_crossings, "maximum crossings");

    auto* synthesize = app.add_subcommand("synthesize", "build the eset system and verify its periodic set");
    add_common(synthesize);
    synthesize->add_option("--set", c.set_spec, "set spec: inline JSON or path")->required();
    synthesize->add_option("--k", c.k, "smoothness parameter");
    synthesize->add_option("--probes", c.probes, "uniform probes on (0, max(E) + 0.2]");
    synthesize->add_option("--tol", c.tol, "crossing tolerance");
    synthesize->add_option("--samples", c.samples, "validation samples per side");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "sewedflow: " << e.what() << '\n';
        return 1;
    }
    for (auto* sub : app.get_subcommands()) {
        c.command = sub->get_name();
    }
    if (window) {
        c.window = *window;
    } else if (const char* env = std::getenv("SEWEDFLOW_WINDOW")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0') {
            err << "sewedflow: SEWEDFLOW_WINDOW is not a number\n";
            return 1;
        }
        c.window = v;
    }
    return run(c, out, err);
}

} // namespace sewedflow
