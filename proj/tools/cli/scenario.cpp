#include <array>
#include "cli/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <regex>
#include <sstream>

namespace ringflux::cli {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
    require_object(j, where);
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

const json& required(const json& j, const std::string& key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ConfigError(where + ": missing key '" + key + "'");
    }
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) {
        throw ConfigError(where + ": expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError(where + ": must be finite");
    }
    return x;
}

std::size_t count(const json& v, const std::string& where) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(where + ": expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

// 1-based index in the file, 0-based in memory.
std::size_t index_from_file(const json& v, std::size_t bound, const std::string& where) {
    const std::size_t i = count(v, where);
    if (i < 1 || i > bound) {
        throw ConfigError(where + ": index " + std::to_string(i) + " outside 1.." + std::to_string(bound));
    }
    return i - 1;
}

std::string text(const json& v, const std::string& where) {
    if (!v.is_string()) {
        throw ConfigError(where + ": expected a string");
    }
    return v.get<std::string>();
}

GridSpec parse_grid(const json& j, const std::string& where) {
    check_keys(j, {"min", "max", "points"}, where);
    GridSpec g;
    g.min = number(required(j, "min", where), where + ".min");
    g.max = number(required(j, "max", where), where + ".max");
    g.points = count(required(j, "points", where), where + ".points");
    if (g.points == 0) {
        throw ConfigError(where + ".points must be at least 1");
    }
    if (g.max < g.min) {
        throw ConfigError(where + ": max below min");
    }
    return g;
}

json grid_json(const GridSpec& g) { return {{"min", g.min}, {"max", g.max}, {"points", g.points}}; }

template <typename Enum, std::size_t N>
Enum parse_enum(const json& v, const std::array<std::pair<std::string_view, Enum>, N>& names,
                const std::string& where) {
    const std::string s = text(v, where);
    for (const auto& [name, value] : names) {
        if (name == s) {
            return value;
        }
    }
    throw ConfigError(where + ": unknown value '" + s + "'");
}

constexpr std::array<std::pair<std::string_view, TaskKind>, 5> task_names{{
    {"sweep", TaskKind::sweep},
    {"diode", TaskKind::diode},
    {"gyro", TaskKind::gyro},
    {"check-symmetry", TaskKind::check_symmetry},
    {"validate", TaskKind::validate}}};

constexpr std::array<std::pair<std::string_view, SweepParameter>, 4> parameter_names{{
    {"energy", SweepParameter::energy},
    {"lead_t", SweepParameter::lead_t},
    {"omega", SweepParameter::omega},
    {"flux", SweepParameter::flux}}};

constexpr std::array<std::pair<std::string_view, CouplingRule>, 3> coupling_names{{
    {"fixed", CouplingRule::fixed},
    {"g_equals_t", CouplingRule::g_equals_t},
    {"g2_over_t_equals_J", CouplingRule::g2_over_t_equals_J}}};

constexpr std::array<std::pair<std::string_view, FluxDistribution>, 2> distribution_names{{
    {"uniform", FluxDistribution::uniform},
    {"single_bond", FluxDistribution::single_bond}}};

template <typename Enum, std::size_t N>
std::string_view enum_name(Enum value, const std::array<std::pair<std::string_view, Enum>, N>& names) {
    for (const auto& [name, v] : names) {
        if (v == value) {
            return name;
        }
    }
    return "?";
}

LatticeSpec parse_lattice(const json& j) {
    require_object(j, "lattice");
    if (j.contains("ring")) {
        check_keys(j, {"ring"}, "lattice");
        const json& r = j["ring"];
        check_keys(r, {"n", "J", "omega", "flux", "distribution"}, "lattice.ring");
        RingSpec ring;
        ring.n = count(required(r, "n", "lattice.ring"), "lattice.ring.n");
        ring.J = number(required(r, "J", "lattice.ring"), "lattice.ring.J");
        ring.omega = r.contains("omega") ? number(r["omega"], "lattice.ring.omega") : 0.0;
        ring.flux = r.contains("flux") ? parse_angle(r["flux"], "lattice.ring.flux") : 0.0;
        if (r.contains("distribution")) {
            ring.distribution = parse_enum(r["distribution"], distribution_names, "lattice.ring.distribution");
        }
        if (ring.n < 3) {
            throw ConfigError("lattice.ring.n must be at least 3");
        }
        if (!(ring.J > 0.0)) {
            throw ConfigError("lattice.ring.J must be positive");
        }
        return ring;
    }

    check_keys(j, {"n_sites", "hoppings", "onsite"}, "lattice");
    const std::size_t n = count(required(j, "n_sites", "lattice"), "lattice.n_sites");
    const json& hops = required(j, "hoppings", "lattice");
    if (!hops.is_array()) {
        throw ConfigError("lattice.hoppings: expected an array");
    }
    std::vector<Hopping> bonds;
    for (std::size_t i = 0; i < hops.size(); ++i) {
        const std::string where = "lattice.hoppings[" + std::to_string(i) + "]";
        const json& h = hops[i];
        check_keys(h, {"from", "to", "amplitude", "phase"}, where);
        Hopping b;
        b.from = index_from_file(required(h, "from", where), n, where + ".from");
        b.to = index_from_file(required(h, "to", where), n, where + ".to");
        b.amplitude = number(required(h, "amplitude", where), where + ".amplitude");
        b.phase = h.contains("phase") ? parse_angle(h["phase"], where + ".phase") : 0.0;
        bonds.push_back(b);
    }
    std::vector<double> onsite(n, 0.0);
    if (j.contains("onsite")) {
        const json& o = j["onsite"];
        if (!o.is_array() || o.size() != n) {
            throw ConfigError("lattice.onsite: expected an array with one entry per site");
        }
        for (std::size_t i = 0; i < n; ++i) {
            onsite[i] = number(o[i], "lattice.onsite[" + std::to_string(i) + "]");
        }
    }
    try {
        return CentralLattice(n, std::move(bonds), std::move(onsite));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("lattice: ") + e.what());
    }
}

std::size_t site_count(const LatticeSpec& lattice) {
    return std::visit(
        [](const auto& l) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(l)>, RingSpec>) {
                return l.n;
            } else {
                return l.size();
            }
        },
        lattice);
}

}  // namespace

std::vector<double> GridSpec::values() const {
    std::vector<double> v(points);
    if (points == 1) {
        v[0] = min;
        return v;
    }
    const double step = (max - min) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        v[i] = min + step * static_cast<double>(i);
    }
    v.back() = max;
    return v;
}

double parse_angle(const json& value, const std::string& where) {
    if (value.is_number()) {
        return number(value, where);
    }
    if (!value.is_string()) {
        throw ConfigError(where + ": expected a number or an angle such as \"pi/2\"");
    }
    static const std::regex pattern(R"(^\s*(-)?\s*([0-9]*\.?[0-9]*)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)");
    const std::string s = value.get<std::string>();
    {
        double plain = 0.0;
        const char* first = s.data();
        const char* last = s.data() + s.size();
        const auto [ptr, ec] = std::from_chars(first, last, plain);
        if (ec == std::errc() && ptr == last && std::isfinite(plain)) {
            return plain;
        }
    }
    std::smatch m;
    if (!std::regex_match(s, m, pattern)) {
        throw ConfigError(where + ": cannot parse angle '" + s + "'");
    }
    double x = std::numbers::pi;
    if (m[2].length() > 0) {
        x *= std::stod(m[2].str());
    }
    if (m[3].matched) {
        const double d = std::stod(m[3].str());
        if (d == 0.0) {
            throw ConfigError(where + ": division by zero in angle");
        }
        x /= d;
    }
    return m[1].matched ? -x : x;
}

std::string_view to_string(TaskKind task) { return enum_name(task, task_names); }
std::string_view to_string(SweepParameter parameter) { return enum_name(parameter, parameter_names); }

Scenario parse_scenario(const json& doc) {
    check_keys(doc,
               {"energy_unit", "lattice", "leads", "rotation", "task", "sweep", "diode", "gyro", "symmetry",
                "validate"},
               "scenario");
    Scenario s;
    if (doc.contains("energy_unit")) {
        s.energy_unit = text(doc["energy_unit"], "energy_unit");
    }
    s.lattice = parse_lattice(required(doc, "lattice", "scenario"));
    const std::size_t n = site_count(s.lattice);

    const json& leads = required(doc, "leads", "scenario");
    if (!leads.is_array()) {
        throw ConfigError("leads: expected an array");
    }
    for (std::size_t i = 0; i < leads.size(); ++i) {
        const std::string where = "leads[" + std::to_string(i) + "]";
        check_keys(leads[i], {"site", "g", "t"}, where);
        LeadSpec lead;
        lead.site = index_from_file(required(leads[i], "site", where), n, where + ".site");
        lead.coupling = number(required(leads[i], "g", where), where + ".g");
        lead.hopping = number(required(leads[i], "t", where), where + ".t");
        s.leads.push_back(lead);
    }

    if (doc.contains("rotation")) {
        const json& r = doc["rotation"];
        check_keys(r, {"omega_rot", "K"}, "rotation");
        RotationParams rot;
        rot.angular_velocity = number(required(r, "omega_rot", "rotation"), "rotation.omega_rot");
        rot.geometry_constant = number(required(r, "K", "rotation"), "rotation.K");
        if (rot.geometry_constant < 0.0) {
            throw ConfigError("rotation.K must be non-negative");
        }
        s.rotation = rot;
    }
    if (doc.contains("task")) {
        s.task = parse_enum(doc["task"], task_names, "task");
    }
    if (doc.contains("sweep")) {
        const json& j = doc["sweep"];
        check_keys(j, {"parameter", "grid", "energy", "coupling"}, "sweep");
        SweepSpec sw;
        if (j.contains("parameter")) {
            sw.parameter = parse_enum(j["parameter"], parameter_names, "sweep.parameter");
        }
        sw.grid = parse_grid(required(j, "grid", "sweep"), "sweep.grid");
        if (j.contains("energy")) {
            sw.energy = number(j["energy"], "sweep.energy");
        }
        if (j.contains("coupling")) {
            sw.coupling = parse_enum(j["coupling"], coupling_names, "sweep.coupling");
        }
        s.sweep = sw;
    }
    if (doc.contains("diode")) {
        const json& j = doc["diode"];
        check_keys(j, {"energy", "source", "drain"}, "diode");
        DiodeSpec d;
        if (j.contains("energy")) {
            d.energy = number(j["energy"], "diode.energy");
        }
        if (j.contains("source")) {
            d.source = index_from_file(j["source"], s.leads.size(), "diode.source");
        }
        if (j.contains("drain")) {
            d.drain = index_from_file(j["drain"], s.leads.size(), "diode.drain");
        }
        s.diode = d;
    }
    if (doc.contains("gyro")) {
        const json& j = doc["gyro"];
        check_keys(j, {"flux", "omega_scan", "trace"}, "gyro");
        GyroSpec gy;
        if (j.contains("flux")) {
            gy.flux = parse_grid(j["flux"], "gyro.flux");
        }
        if (j.contains("omega_scan")) {
            gy.omega_scan = parse_grid(j["omega_scan"], "gyro.omega_scan");
        }
        if (j.contains("trace")) {
            gy.trace = text(j["trace"], "gyro.trace");
        }
        s.gyro = gy;
    }
    if (doc.contains("symmetry")) {
        const json& j = doc["symmetry"];
        check_keys(j, {"energy"}, "symmetry");
        SymmetrySpec sym;
        if (j.contains("energy")) {
            sym.energy = parse_grid(j["energy"], "symmetry.energy");
        }
        s.symmetry = sym;
    }
    if (doc.contains("validate")) {
        const json& j = doc["validate"];
        check_keys(j, {"energy"}, "validate");
        ValidateSpec v;
        if (j.contains("energy")) {
            v.energy = parse_grid(j["energy"], "validate.energy");
        }
        s.validate = v;
    }

    try {
        (void)s.system();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario " + path.string() + ": " + e.what());
    }
    return parse_scenario(doc);
}

json to_json(const Scenario& s) {
    json doc;
    doc["energy_unit"] = s.energy_unit;
    if (const auto* ring = std::get_if<RingSpec>(&s.lattice)) {
        doc["lattice"] = {{"ring",
                           {{"n", ring->n},
                            {"J", ring->J},
                            {"omega", ring->omega},
                            {"flux", ring->flux},
                            {"distribution", enum_name(ring->distribution, distribution_names)}}}};
    } else {
        const auto& lattice = std::get<CentralLattice>(s.lattice);
        json hops = json::array();
        for (const auto& h : lattice.hoppings()) {
            hops.push_back({{"from", h.from + 1}, {"to", h.to + 1}, {"amplitude", h.amplitude}, {"phase", h.phase}});
        }
        doc["lattice"] = {{"n_sites", lattice.size()},
                          {"hoppings", hops},
                          {"onsite", std::vector<double>(lattice.onsite().begin(), lattice.onsite().end())}};
    }
    json leads = json::array();
    for (const auto& l : s.leads) {
        leads.push_back({{"site", l.site + 1}, {"g", l.coupling}, {"t", l.hopping}});
    }
    doc["leads"] = leads;
    if (s.rotation) {
        doc["rotation"] = {{"omega_rot", s.rotation->angular_velocity}, {"K", s.rotation->geometry_constant}};
    }
    if (s.task) {
        doc["task"] = to_string(*s.task);
    }
    if (s.sweep) {
        doc["sweep"] = {{"parameter", to_string(s.sweep->parameter)},
                        {"grid", grid_json(s.sweep->grid)},
                        {"energy", s.sweep->energy},
                        {"coupling", enum_name(s.sweep->coupling, coupling_names)}};
    }
    if (s.diode) {
        json d = {{"energy", s.diode->energy}, {"source", s.diode->source + 1}};
        if (s.diode->drain) {
            d["drain"] = *s.diode->drain + 1;
        }
        doc["diode"] = d;
    }
    if (s.gyro) {
        json g = {{"flux", grid_json(s.gyro->flux)}};
        if (s.gyro->omega_scan) {
            g["omega_scan"] = grid_json(*s.gyro->omega_scan);
        }
        if (s.gyro->trace) {
            g["trace"] = *s.gyro->trace;
        }
        doc["gyro"] = g;
    }
    if (s.symmetry) {
        json j = json::object();
        if (s.symmetry->energy) {
            j["energy"] = grid_json(*s.symmetry->energy);
        }
        doc["symmetry"] = j;
    }
    if (s.validate) {
        json j = json::object();
        if (s.validate->energy) {
            j["energy"] = grid_json(*s.validate->energy);
        }
        doc["validate"] = j;
    }
    return doc;
}

ScatteringSystem Scenario::system() const {
    ScatteringSystem base = std::visit(
        [&](const auto& l) -> ScatteringSystem {
            if constexpr (std::is_same_v<std::decay_t<decltype(l)>, RingSpec>) {
                return ring_system(l.n, l.J, l.omega, l.flux, l.distribution, leads);
            } else {
                return ScatteringSystem(l, leads);
            }
        },
        lattice);
    if (rotation) {
        return apply_rotation(base, *rotation);
    }
    return base;
}

bool Scenario::is_symmetric_three_ring() const {
    const auto* ring = std::get_if<RingSpec>(&lattice);
    if (ring == nullptr || ring->n != 3 || leads.size() != 3) {
        return false;
    }
    for (std::size_t l = 0; l < 3; ++l) {
        if (leads[l].site != l || leads[l].coupling != leads[0].coupling || leads[l].hopping != leads[0].hopping) {
            return false;
        }
    }
    return true;
}

}  // namespace ringflux::cli
