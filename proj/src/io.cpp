#include "sewedflow/io.hpp"

#include "sewedflow/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace sewedflow {

using nlohmann::json;

namespace {

std::vector<double> real_list(const json& j, const char* what)
{
    if (!j.is_array()) {
        throw InvalidParameter(std::string(what) + " must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) {
            throw InvalidParameter(std::string(what) + " must be an array of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

std::string format_real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CompactSymmetricSet set_from_json(const json& j)
{
    if (!j.is_object()) {
        throw InvalidSet("set must be an object with \"points\" and/or \"intervals\"");
    }
    for (const auto& [key, _] : j.items()) {
        if (key != "points" && key != "intervals") {
            throw InvalidSet("unknown set key '" + key + "'");
        }
    }
    std::vector<double> points;
    std::vector<std::pair<double, double>> intervals;
    if (j.contains("points")) {
        points = real_list(j.at("points"), "set.points");
    }
    if (j.contains("intervals")) {
        const auto& iv = j.at("intervals");
        if (!iv.is_array()) {
            throw InvalidSet("set.intervals must be an array of [lo, hi] pairs");
        }
        for (const auto& pair : iv) {
            const auto v = real_list(pair, "set.intervals entry");
            if (v.size() != 2) {
                throw InvalidSet("set.intervals entries must be [lo, hi]");
            }
            intervals.emplace_back(v[0], v[1]);
        }
    }
    return CompactSymmetricSet::from_parts(std::move(points), std::move(intervals));
}

PiecewiseSystem system_from_json(const json& j, double window)
{
    if (!j.is_object()) {
        throw InvalidParameter("system spec must be a JSON object");
    }
    static const std::set<std::string> known{"family", "k", "set", "q_upper_coeffs", "q_lower_coeffs"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) {
            throw InvalidParameter("unknown system key '" + key + "'");
        }
    }
    const bool has_family = j.contains("family");
    const bool has_coeffs = j.contains("q_upper_coeffs") || j.contains("q_lower_coeffs");
    if (has_family == has_coeffs) {
        throw InvalidParameter("system spec needs exactly one of \"family\" or the coefficient lists");
    }
    if (has_coeffs) {
        if (j.contains("k") || j.contains("set")) {
            throw InvalidParameter("\"k\" and \"set\" only apply to named families");
        }
        if (!j.contains("q_upper_coeffs") || !j.contains("q_lower_coeffs")) {
            throw InvalidParameter("both q_upper_coeffs and q_lower_coeffs are required");
        }
        return make_polynomial_system(real_list(j.at("q_upper_coeffs"), "q_upper_coeffs"),
                                      real_list(j.at("q_lower_coeffs"), "q_lower_coeffs"), window);
    }
    if (!j.at("family").is_string()) {
        throw InvalidParameter("\"family\" must be a string");
    }
    FamilyParams params;
    params.window = window;
    if (j.contains("k")) {
        if (!j.at("k").is_number_integer()) {
            throw InvalidParameter("\"k\" must be an integer");
        }
        params.k = j.at("k").get<int>();
    }
    if (j.contains("set")) {
        params.set = set_from_json(j.at("set"));
    }
    return make_family(j.at("family").get<std::string>(), params);
}

json load_json_argument(std::string_view text_or_path)
{
    const auto first = text_or_path.find_first_not_of(" \t\r\n");
    std::string text;
    if (first != std::string_view::npos && text_or_path[first] == '{') {
        text = std::string(text_or_path);
    } else {
        std::ifstream in{std::string(text_or_path)};
        if (!in) {
            throw InvalidParameter("cannot read '" + std::string(text_or_path) + "'");
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidParameter(std::string("malformed JSON: ") + e.what());
    }
}

json describe_system(const PiecewiseSystem& system)
{
    json j;
    j["family"] = system.family.name;
    j["params"] = system.family.params;
    j["smoothness"] = system.smoothness.to_string();
    j["window"] = system.window;
    if (system.family.set) {
        j["set"] = system.family.set->to_string();
    }
    return j;
}

json to_json(const ValidationReport& r)
{
    return json{{"b_plus", r.b_plus},           {"b_minus", r.b_minus},
                {"type3_ok", r.type3_ok},       {"sf1_ok", r.sf1_ok},
                {"sf2_ok", r.sf2_ok},           {"sf2strong_ok", r.sf2strong_ok},
                {"no_sliding_ok", r.no_sliding_ok}, {"sewed_focus", r.sewed_focus()},
                {"neighbourhood", r.neighbourhood}, {"samples", r.samples}};
}

json to_json(const Timing& t)
{
    json j;
    j["verdict"] = std::string(to_string(t.verdict));
    j["T"] = t.verdict == TimingVerdict::finite ? real_or_null(t.total_time) : json(nullptr);
    j["tail_bound"] = t.verdict == TimingVerdict::finite ? real_or_null(t.tail_bound) : json(nullptr);
    j["alpha"] = real_or_null(t.alpha);
    j["crossings"] = t.crossings;
    j["note"] = t.note;
    return j;
}

json to_json(const Classification& c)
{
    json j;
    j["kind"] = std::string(to_string(c.kind));
    j["zeros"] = json::array();
    for (const auto& z : c.zeros) {
        j["zeros"].push_back({{"x", z.x}, {"lo", z.lo}, {"hi", z.hi}, {"chi", z.chi}});
    }
    j["zero_intervals"] = json::array();
    for (const auto& z : c.zero_intervals) {
        j["zero_intervals"].push_back({{"lo", z.lo}, {"hi", z.hi}, {"reaches_inner_end", z.reaches_inner_end}});
    }
    j["order"] = c.order ? json(*c.order) : json(nullptr);
    j["timing"] = to_json(c.timing);
    const auto& o = c.options;
    j["tolerances"] = {{"zero_tol", o.zero_tol},
                       {"crossing_tol", o.tol},
                       {"half_width", o.half_width},
                       {"n_samples", o.n_samples},
                       {"decades", o.decades},
                       {"min_interval_fraction", o.min_interval_fraction}};
    return j;
}

json to_json(const CrossingSequence& s)
{
    json j;
    j["terminated_by"] = std::string(to_string(s.terminated_by));
    j["crossings"] = json::array();
    for (const auto& e : s.entries) {
        j["crossings"].push_back({{"r", e.index}, {"xi", e.position}, {"dt", e.arc_time}, {"t", e.time}});
    }
    return j;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& points)
{
    os << "arc_index,side,x,y\n";
    for (const auto& p : points) {
        os << p.arc << ',' << to_string(p.side) << ',' << format_real(p.x) << ',' << format_real(p.y) << '\n';
    }
}

void write_crossings_csv(std::ostream& os, const CrossingSequence& seq)
{
    os << "r,xi_r,dt_r,t_r\n";
    for (const auto& e : seq.entries) {
        os << e.index << ',' << format_real(e.position) << ',' << format_real(e.arc_time) << ','
           << format_real(e.time) << '\n';
    }
}

void write_chi_csv(std::ostream& os, const std::vector<double>& x, const std::vector<double>& chi)
{
    os << "x,chi\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        os << format_real(x[i]) << ',' << format_real(chi[i]) << '\n';
    }
}

} // namespace sewedflow
