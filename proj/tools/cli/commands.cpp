#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "ringflux/bethe.hpp"
#include "ringflux/complex_matrix.hpp"
#include "ringflux/gyroscope.hpp"
#include "ringflux/negf.hpp"
#include "ringflux/random_system.hpp"
#include "ringflux/symmetry.hpp"

namespace ringflux::cli {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        f << content;
        f.flush();
        if (!f) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::pair<std::vector<double>, std::vector<double>> read_omega_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open trace file " + path.string());
    }
    std::vector<double> times;
    std::vector<double> omegas;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double t = 0.0;
        double w = 0.0;
        if (!(fields >> t >> w)) {
            if (times.empty() && line_no == 1) {
                continue;  // header
            }
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected two numbers");
        }
        times.push_back(t);
        omegas.push_back(w);
    }
    return {times, omegas};
}

namespace {

void emit(const Options& opts, std::ostream& out, const std::string& content) {
    if (opts.out) {
        write_file_atomically(*opts.out, content);
    } else {
        out << content;
    }
}

GridSpec with_points(GridSpec grid, const Options& opts) {
    if (opts.grid_points) {
        if (*opts.grid_points == 0) {
            throw ConfigError("--grid-points must be at least 1");
        }
        grid.points = *opts.grid_points;
    }
    return grid;
}

double min_lead_hopping(const Scenario& s) {
    double t = std::numeric_limits<double>::infinity();
    for (const auto& lead : s.leads) {
        t = std::min(t, lead.hopping);
    }
    return t;
}

const RingSpec& ring_or_throw(const Scenario& s, const char* why) {
    const auto* ring = std::get_if<RingSpec>(&s.lattice);
    if (ring == nullptr) {
        throw ConfigError(std::string(why) + " needs a ring lattice");
    }
    return *ring;
}

Scenario with_parameter(Scenario s, SweepParameter parameter, double value, CouplingRule rule) {
    switch (parameter) {
        case SweepParameter::energy:
            break;
        case SweepParameter::lead_t: {
            if (!(value > 0.0)) {
                throw ConfigError("lead hopping t must be positive in a lead_t sweep");
            }
            for (auto& lead : s.leads) {
                lead.hopping = value;
                if (rule == CouplingRule::g_equals_t) {
                    lead.coupling = value;
                } else if (rule == CouplingRule::g2_over_t_equals_J) {
                    lead.coupling = std::sqrt(ring_or_throw(s, "coupling rule g2_over_t_equals_J").J * value);
                }
            }
            break;
        }
        case SweepParameter::omega:
            if (auto* ring = std::get_if<RingSpec>(&s.lattice)) {
                ring->omega = value;
            } else {
                const auto& l = std::get<CentralLattice>(s.lattice);
                s.lattice = CentralLattice(l.size(), std::vector<Hopping>(l.hoppings().begin(), l.hoppings().end()),
                                           std::vector<double>(l.size(), value));
            }
            break;
        case SweepParameter::flux: {
            auto* ring = std::get_if<RingSpec>(&s.lattice);
            if (ring == nullptr) {
                throw ConfigError("a flux sweep needs a ring lattice");
            }
            ring->flux = value;
            break;
        }
    }
    return s;
}

std::string_view column_name(SweepParameter parameter) {
    switch (parameter) {
        case SweepParameter::energy: return "E";
        case SweepParameter::lead_t: return "t";
        case SweepParameter::omega: return "omega";
        case SweepParameter::flux: return "flux";
    }
    return "x";
}

std::string csv_header(const Scenario& s, SweepParameter parameter) {
    std::string h(column_name(parameter));
    if (s.is_symmetric_three_ring()) {
        return h + ",T_R,T_L,R\n";
    }
    const std::size_t m = s.leads.size();
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = 0; q < m; ++q) {
            if (p != q) {
                h += ",T_" + std::to_string(p + 1) + std::to_string(q + 1);
            }
        }
    }
    for (std::size_t p = 0; p < m; ++p) {
        h += ",R_" + std::to_string(p + 1);
    }
    return h + "\n";
}

std::vector<double> csv_values(const Scenario& s, const std::optional<TransmissionMatrix>& tm) {
    const std::size_t m = s.leads.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> v;
    if (s.is_symmetric_three_ring()) {
        if (!tm) {
            return {nan, nan, nan};
        }
        const auto d = diode_coefficients(*tm);
        return {d.T_R, d.T_L, d.R};
    }
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = 0; q < m; ++q) {
            if (p != q) {
                v.push_back(tm ? (*tm)(p, q) : nan);
            }
        }
    }
    for (std::size_t p = 0; p < m; ++p) {
        v.push_back(tm ? tm->reflection[p] : nan);
    }
    return v;
}

void append_row(std::string& csv, double x, const std::vector<double>& values) {
    csv += format_double(x);
    for (double v : values) {
        csv += ',';
        csv += format_double(v);
    }
    csv += '\n';
}

SweepSpec sweep_or_default(const Scenario& s) {
    if (s.sweep) {
        return *s.sweep;
    }
    const double edge = 2.0 * min_lead_hopping(s);
    SweepSpec sw;
    sw.grid = {-edge, edge, 201};
    return sw;
}

// One evaluated point of a parameter scan.
struct ScanPoint {
    double value = 0.0;
    double energy = 0.0;
    std::optional<TransmissionMatrix> result;
    std::string error;
};

std::vector<ScanPoint> run_scan(const Scenario& s, const SweepSpec& sw, const Options& opts) {
    const std::vector<double> grid = with_points(sw.grid, opts).values();
    std::vector<ScanPoint> points;
    if (sw.parameter == SweepParameter::energy) {
        const ScatteringSystem system = s.system();
        for (auto& p : sweep(system, grid, opts.threads)) {
            points.push_back({p.energy, p.energy, std::move(p.result), std::move(p.error)});
        }
        return points;
    }
    for (double value : grid) {
        ScatteringSystem system = [&] {
            try {
                return with_parameter(s, sw.parameter, value, sw.coupling).system();
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }();
        ScanPoint point{value, sw.energy, std::nullopt, {}};
        try {
            point.result = transmission(system, sw.energy);
        } catch (const std::exception& e) {
            point.error = e.what();
        }
        points.push_back(std::move(point));
    }
    return points;
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_code::config_error;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return exit_code::config_error;
    } catch (const SingularMatrixError& e) {
        err << "numeric failure: " << e.what() << " (condition estimate " << format_double(e.condition_estimate())
            << ")\n";
        return exit_code::numeric_failure;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return exit_code::numeric_failure;
    }
}

json verdict_json(const ReciprocityVerdict& v) {
    return {{"protected", v.is_protected}, {"rule", to_string(v.rule)}, {"detail", v.detail}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

int cmd_sweep(const Scenario& scenario, const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const SweepSpec sw = sweep_or_default(scenario);
        const auto points = run_scan(scenario, sw, opts);
        std::string csv = csv_header(scenario, sw.parameter);
        std::size_t gaps = 0;
        for (const auto& p : points) {
            if (!p.result) {
                ++gaps;
                err << "warning: " << column_name(sw.parameter) << "=" << format_double(p.value)
                    << " left as a gap: " << p.error << '\n';
            }
            append_row(csv, p.value, csv_values(scenario, p.result));
        }
        emit(opts, out, csv);
        if (!points.empty() && gaps == points.size()) {
            err << "numeric failure: no grid point could be evaluated\n";
            return exit_code::numeric_failure;
        }
        return exit_code::ok;
    });
}

int cmd_diode(const Scenario& scenario, const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const DiodeSpec d = scenario.diode.value_or(DiodeSpec{});
        const std::size_t source = d.source;
        const std::size_t drain = d.drain.value_or(scenario.leads.size() - 1);
        if (source == drain) {
            throw ConfigError("diode source and drain must differ");
        }
        auto point_json = [&](const TransmissionMatrix& tm) {
            const double forward = tm(source, drain);
            const double backward = tm(drain, source);
            return json{{"energy", tm.energy},
                        {"T_R", forward},
                        {"T_L", backward},
                        {"R", tm.reflection[source]},
                        {"contrast", forward - backward},
                        {"band_edge", tm.band_edge}};
        };

        json report;
        report["source"] = source + 1;
        report["drain"] = drain + 1;
        if (!scenario.sweep) {
            const ScatteringSystem system = scenario.system();
            const TransmissionMatrix tm = transmission(system, d.energy);
            json p = point_json(tm);
            p["solver_deviation"] = max_deviation(tm, bethe_transmission(system, d.energy));
            report.update(p);
            emit(opts, out, dump(report));
            return exit_code::ok;
        }

        const SweepSpec sw = *scenario.sweep;
        const auto points = run_scan(scenario, sw, opts);
        json rows = json::array();
        std::optional<std::pair<double, double>> best;
        for (const auto& p : points) {
            if (!p.result) {
                err << "warning: " << column_name(sw.parameter) << "=" << format_double(p.value)
                    << " skipped: " << p.error << '\n';
                continue;
            }
            json row = point_json(*p.result);
            row["value"] = p.value;
            const double contrast = row["contrast"].get<double>();
            if (!best || contrast > best->second) {
                best = {p.value, contrast};
            }
            rows.push_back(std::move(row));
        }
        report["parameter"] = to_string(sw.parameter);
        report["points"] = rows;
        if (!best) {
            emit(opts, out, dump(report));
            err << "numeric failure: no grid point could be evaluated\n";
            return exit_code::numeric_failure;
        }
        report["best"] = {{"value", best->first}, {"contrast", best->second}};
        emit(opts, out, dump(report));
        return exit_code::ok;
    });
}

int cmd_gyro(const Scenario& scenario, const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!scenario.is_symmetric_three_ring()) {
            throw ConfigError("gyro needs a three-site ring with identical leads on sites 1, 2, 3");
        }
        const auto& ring = std::get<RingSpec>(scenario.lattice);
        const GyroParams params{scenario.leads[0].coupling, scenario.leads[0].hopping, ring.J, ring.omega};
        const GyroSpec spec = scenario.gyro.value_or(GyroSpec{});
        const std::vector<double> grid = with_points(spec.flux, opts).values();

        const ResponseCurve curve = delta_response(params, grid, ring.flux);
        std::string csv = "Phi_Omega,delta\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            append_row(csv, curve.abscissa[i], {curve.delta[i]});
        }

        const double slope = linear_slope(params);
        const auto t0 = zero_flux_transmission(params);
        double worst_linearity = 0.0;
        for (int i = -20; i <= 20; ++i) {
            if (i == 0) {
                continue;
            }
            const double phi = 0.1 * i / 20.0;
            const double linear = slope * phi;
            worst_linearity = std::max(worst_linearity, std::abs(delta_at(params, phi) - linear) / std::abs(linear));
        }

        json report = {
            {"params",
             {{"g", params.g}, {"t", params.t}, {"J", params.J}, {"omega", params.omega}, {"static_flux", ring.flux}}},
            {"delta_at_zero", delta_at(params, 0.0, ring.flux)},
            {"slope", slope},
            {"printed_linear_coefficient", printed_linear_coefficient(params)},
            {"zero_flux_transmission",
             {{"printed", t0.printed}, {"exact", t0.exact}, {"discrepancy", t0.discrepancy}}},
            {"linearity", {{"window", 0.1}, {"max_relative_error", worst_linearity}}}};

        if (scenario.rotation) {
            const RotationParams& rot = *scenario.rotation;
            const double phi_omega = rotation_to_flux(rot, ring.J, 0.0, 3);
            const auto d = diode_coefficients(transmission(scenario.system(), 0.0));
            json r = {{"omega_rot", rot.angular_velocity},
                      {"K", rot.geometry_constant},
                      {"phi_omega", phi_omega},
                      {"total_flux", ring.flux + phi_omega},
                      {"delta", d.T_R - d.T_L}};
            if (rot.geometry_constant > 0.0 && slope != 0.0) {
                r["recovered_omega_rot"] = angular_velocity_from_delta(d.T_R - d.T_L, slope, rot.geometry_constant,
                                                                       ring.J, 3);
            }
            report["rotation"] = r;
        }
        if (spec.omega_scan) {
            const SlopeScan scan = slope_scan(params, spec.omega_scan->values());
            report["omega_scan"] = {{"omega", scan.omega},
                                    {"slope", scan.slope},
                                    {"best_omega", scan.best_omega},
                                    {"best_slope", scan.best_slope}};
        }
        if (spec.trace) {
            const auto [times, omegas] = read_omega_trace(*spec.trace);
            AngularTrace trace;
            try {
                trace = integrate_angle(times, omegas);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("gyro.trace: ") + e.what());
            }
            report["trace"] = {{"samples", trace.times.size()},
                               {"duration", trace.times.empty() ? 0.0 : trace.times.back() - trace.times.front()},
                               {"final_angle", trace.final_angle()}};
        }

        if (opts.out) {
            write_file_atomically(*opts.out, csv);
            out << dump(report);
        } else {
            out << csv;
            err << dump(report);
        }
        return exit_code::ok;
    });
}

int cmd_check_symmetry(const Scenario& scenario, const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScatteringSystem system = scenario.system();
        std::vector<double> energies;
        if (scenario.symmetry && scenario.symmetry->energy) {
            energies = with_points(*scenario.symmetry->energy, opts).values();
        } else {
            const std::size_t n = opts.grid_points.value_or(50);
            const double edge = 2.0 * min_lead_hopping(scenario);
            for (std::size_t i = 0; i < n; ++i) {
                energies.push_back(-edge + 2.0 * edge * static_cast<double>(i + 1) / static_cast<double>(n + 1));
            }
        }
        const ReciprocityReport report = verify_reciprocity(system, energies);
        const BipartiteColoring coloring = bipartite_coloring(system.lattice());
        json j = {{"verdict", verdict_json(report.verdict)},
                  {"bipartite", coloring.is_bipartite},
                  {"sublattice_sizes", {coloring.size_a, coloring.size_b}},
                  {"grid_points", energies.size()},
                  {"evaluated_points", report.evaluated_points},
                  {"max_deviation", report.max_deviation},
                  {"worst_energy", report.worst_energy},
                  {"protected_points", report.protected_points},
                  {"max_protected_deviation", report.max_protected_deviation},
                  {"tolerance", report.tolerance},
                  {"consistent", report.consistent},
                  {"skipped", report.skipped},
                  {"notes",
                   {"a 'none' verdict makes no claim about asymmetry",
                    "odd-N lead placement rule combines its two clauses with AND"}}};
        emit(opts, out, dump(j));
        if (!report.consistent) {
            err << "numeric failure: predicted reciprocity violated (max deviation "
                << format_double(report.max_protected_deviation) << ")\n";
            return exit_code::numeric_failure;
        }
        return exit_code::ok;
    });
}

int cmd_validate(const std::optional<Scenario>& scenario, const Options& opts, std::ostream& out,
                 std::ostream& err) {
    return guarded(err, [&] {
        double max_dev = 0.0;
        double max_unitarity = 0.0;
        double max_residual = 0.0;
        std::optional<double> max_closed_form;
        std::size_t cases = 0;

        auto compare = [&](const ScatteringSystem& system, double energy) {
            const TransmissionMatrix g = transmission(system, energy);
            const TransmissionMatrix b = bethe_transmission(system, energy);
            max_dev = std::max(max_dev, max_deviation(g, b));
            max_unitarity = std::max({max_unitarity, g.unitarity_defect(), b.unitarity_defect()});
            if (!g.band_edge) {
                for (std::size_t p = 0; p < system.lead_count(); ++p) {
                    max_residual = std::max(max_residual, schrodinger_residual(system, solve_scattering(system, p, energy)));
                }
            }
            ++cases;
            return g;
        };

        json report;
        if (opts.random) {
            std::mt19937_64 rng(opts.seed);
            for (std::size_t i = 0; i < *opts.random; ++i) {
                const RandomCase c = random_case(rng);
                compare(c.system, c.energy);
            }
            report["mode"] = "random";
            report["seed"] = opts.seed;
        } else {
            if (!scenario) {
                throw ConfigError("validate needs --scenario or --random");
            }
            const Scenario& s = *scenario;
            std::vector<double> energies;
            if (s.validate && s.validate->energy) {
                energies = with_points(*s.validate->energy, opts).values();
            } else if (s.sweep && s.sweep->parameter == SweepParameter::energy) {
                energies = with_points(s.sweep->grid, opts).values();
            } else if (s.diode) {
                energies = {s.diode->energy};
            } else {
                energies = {0.0};
            }
            const ScatteringSystem system = s.system();
            const bool closed_form = s.is_symmetric_three_ring() && !s.rotation;
            for (double e : energies) {
                const TransmissionMatrix g = compare(system, e);
                if (closed_form && !g.band_edge) {
                    const auto& ring = std::get<RingSpec>(s.lattice);
                    const auto cf = closed_form_3site(ClosedForm3Site::at_energy(
                        s.leads[0].coupling, s.leads[0].hopping, ring.J, ring.omega, ring.flux, e));
                    const auto d = diode_coefficients(g);
                    const double dev = std::max({std::abs(cf.T_R - d.T_R), std::abs(cf.T_L - d.T_L),
                                                 std::abs(cf.R - d.R)});
                    max_closed_form = std::max(max_closed_form.value_or(0.0), dev);
                }
            }
            report["mode"] = "scenario";
        }
        const bool passed = max_dev <= validation_tolerance;
        report["cases"] = cases;
        report["max_deviation"] = max_dev;
        report["max_unitarity_defect"] = max_unitarity;
        report["max_schrodinger_residual"] = max_residual;
        if (max_closed_form) {
            report["max_closed_form_deviation"] = *max_closed_form;
        }
        report["tolerance"] = validation_tolerance;
        report["passed"] = passed;
        emit(opts, out, dump(report));
        if (!passed) {
            err << "numeric failure: solvers disagree by " << format_double(max_dev) << '\n';
            return exit_code::numeric_failure;
        }
        return exit_code::ok;
    });
}

int cmd_run(const Scenario& scenario, const Options& opts, std::ostream& out, std::ostream& err) {
    if (!scenario.task) {
        err << "config error: scenario has no 'task'\n";
        return exit_code::config_error;
    }
    switch (*scenario.task) {
        case TaskKind::sweep: return cmd_sweep(scenario, opts, out, err);
        case TaskKind::diode: return cmd_diode(scenario, opts, out, err);
        case TaskKind::gyro: return cmd_gyro(scenario, opts, out, err);
        case TaskKind::check_symmetry: return cmd_check_symmetry(scenario, opts, out, err);
        case TaskKind::validate: return cmd_validate(scenario, opts, out, err);
    }
    return exit_code::config_error;
}

}  // namespace ringflux::cli
