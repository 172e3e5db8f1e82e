#include "h2grid/pipeline.hpp"

#include "h2grid/catalog.hpp"
#include "h2grid/coupling.hpp"
#include "h2grid/frlm.hpp"
#include "h2grid/highway.hpp"
#include "h2grid/io.hpp"
#include "h2grid/metrics.hpp"
#include "h2grid/power.hpp"
#include "h2grid/report.hpp"
#include "h2grid/synth.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

#ifndef H2GRID_VERSION
#define H2GRID_VERSION "0.0.0"
#endif

namespace h2g::pipeline {

std::string_view version() noexcept { return H2GRID_VERSION; }

std::string sha256_hex(std::string_view data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::Internal, "SHA-256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

std::string sha256_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

class Run {
public:
    Run(std::string_view command, const RunConfig& cfg) : cfg(cfg)
    {
        report.command = std::string(command);
        auto out = cfg.path("out");
        report.out_dir = out ? *out : fs::path("out");
    }

    const RunConfig& cfg;
    RunReport report;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256

    void stage(const std::string& name, const std::function<void()>& fn)
    {
        StageRecord rec{name, "ok", 0.0};
        const auto t0 = Clock::now();
        auto finish = [&](const char* status) {
            rec.status = status;
            rec.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
            report.stages.push_back(rec);
        };
        try {
            fn();
        } catch (const Error& e) {
            finish("failed");
            const std::string msg = e.what();
            throw Error(e.code(), msg.starts_with(name + ":") ? msg : name + ": " + msg, e.details());
        } catch (const std::exception& e) {
            finish("failed");
            throw Error(ErrorCode::Internal, name + ": " + e.what());
        }
        finish("ok");
    }

    void warn(std::string w) { report.warnings.push_back(std::move(w)); }

    void emit(const fs::path& rel, std::string_view text)
    {
        io::write_text(report.out_dir / rel, text);
        report.outputs.push_back(rel);
    }

    const fs::path& input(const fs::path& p)
    {
        inputs.emplace_back(p.string(), sha256_file(p));
        return p;
    }

    void input_dir(const fs::path& dir)
    {
        if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "power directory '" + dir.string() + "' does not exist");
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir)) {
            if (e.is_regular_file()) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) input(f);
    }

    void solver(const std::string& stage_name, const lp::LinearProgram& lp, const lp::Solution& sol)
    {
        const lp::CheckReport chk = lp::check_solution(lp, sol);
        report.solvers.push_back({stage_name, std::string(lp::to_string(sol.status)), sol.objective, sol.iterations, chk.relative_gap});
        if (!chk.ok()) throw Error(ErrorCode::Internal, "solution failed verification: " + chk.issues.front(), chk.issues);
    }

    void verify_case(const std::string& stage_name, const power::SolvedCase& c)
    {
        power::require_optimal(c, stage_name);
        solver(stage_name, c.model.lp, c.solution);
        const power::CaseCheck chk = power::check_case(c);
        if (!chk.issues.empty()) throw Error(ErrorCode::Internal, "solved case failed checks: " + chk.issues.front(), chk.issues);
    }

    bool geojson() const { return cfg.text("format") == "geojson"; }
};

void check_format(const RunConfig& cfg)
{
    const std::string f = cfg.text("format");
    if (f != "csv" && f != "geojson") throw Error(ErrorCode::Param, "format must be csv or geojson, got '" + f + "'");
}

// ---- siting ---------------------------------------------------------------

frlm::FrlmConfig frlm_config(const RunConfig& cfg)
{
    frlm::FrlmConfig fc;
    fc.range_km = cfg.number("range_km");
    if (cfg.has("initial_fuel_km")) fc.initial_fuel_km = cfg.number("initial_fuel_km");
    fc.fuel_per_km = cfg.number("fuel_per_km");
    fc.node_capacity = cfg.number("node_capacity_kg");
    fc.validate();
    return fc;
}

struct Siting {
    highway::HighwayNetwork net;
    frlm::FrlmModel model;
    frlm::SitingSolution sol;
};

Siting run_siting(Run& run)
{
    Siting s;
    std::vector<highway::GeoNode> nodes;
    std::vector<highway::Edge> edges;
    std::vector<highway::OdTrip> trips;
    frlm::FrlmConfig fc;
    run.stage("ingest highway", [&] {
        fc = frlm_config(run.cfg);
        nodes = io::read_nodes(run.input(run.cfg.required_path("nodes")));
        edges = io::read_edges(run.input(run.cfg.required_path("edges")));
        trips = io::read_trips(run.input(run.cfg.required_path("trips")));
    });
    std::vector<highway::RoutedTrip> routed;
    run.stage("route", [&] {
        s.net = highway::HighwayNetwork(std::move(nodes), std::move(edges));
        const double min_km = run.cfg.number("min_trip_km");
        routed = highway::filter_trips(highway::route_trips(s.net, trips, fc.range_km), min_km);
        if (routed.size() < trips.size()) {
            run.warn(std::to_string(trips.size() - routed.size()) + " trip(s) shorter than " + io::format_number(min_km) +
                     " km dropped");
        }
        if (routed.empty()) run.warn("no trips to serve; no stations sited");
    });
    run.stage("siting", [&] {
        s.model = frlm::build_model(s.net, routed, fc);
        s.sol = frlm::solve_siting(s.model);
        const auto issues = frlm::verify_solution(s.sol, s.model);
        if (!issues.empty()) throw Error(ErrorCode::Internal, "siting solution failed verification: " + issues.front(), issues);
        run.report.solvers.push_back({"siting", "optimal", static_cast<double>(s.sol.objective), s.sol.nodes_explored, 0.0});
    });
    return s;
}

void emit_siting(Run& run, const Siting& s, const std::string& prefix = "")
{
    run.stage("write siting", [&] {
        run.emit(prefix + "stations.csv", report::stations_csv(s.model, s.sol));
        run.emit(prefix + "allocations.csv", report::allocations_csv(s.sol, s.model));
        run.emit(prefix + "siting_summary.csv", report::siting_summary_csv(s.model, s.sol));
        run.emit(prefix + "hrs_sites.csv", io::sites_csv(coupling::sites_from_siting(s.net, s.sol)));
        if (run.geojson()) run.emit(prefix + "stations.geojson", report::stations_geojson(s.net, s.sol));
    });
}

// ---- power and coupling -----------------------------------------------------

power::PowerSystem load_power(Run& run)
{
    power::PowerSystem sys;
    run.stage("ingest power", [&] {
        const fs::path dir = run.cfg.required_path("power");
        run.input_dir(dir);
        sys = io::read_power_system(dir, run.cfg.number("dt_hours"));
        sys.year_hours = run.cfg.number("year_hours");
        sys.co2_cap = run.cfg.number("co2_cap_t");
        sys.discount_rate = run.cfg.number("discount_rate");
        const auto issues = power::validate_system(sys);
        if (!issues.empty()) throw Error(ErrorCode::Validation, "invalid power system: " + issues.front(), issues);
    });
    return sys;
}

std::vector<catalog::HrsSite> load_sites(Run& run, const std::string& siting_prefix)
{
    std::vector<catalog::HrsSite> sites;
    if (run.cfg.has("stations")) {
        run.stage("ingest stations", [&] { sites = io::read_sites(run.input(run.cfg.required_path("stations"))); });
        return sites;
    }
    if (!run.cfg.has("nodes")) {
        throw Error(ErrorCode::Param, "either 'stations' or the highway inputs ('nodes', 'edges', 'trips') are required");
    }
    Siting s = run_siting(run);
    emit_siting(run, s, siting_prefix);
    return coupling::sites_from_siting(s.net, s.sol);
}

catalog::HrsDemandProfile load_profile(const RunConfig& cfg, const power::PowerSystem& sys)
{
    catalog::ProfileParams pp;
    pp.night_factor = cfg.number("profile_night");
    pp.weekend_factor = cfg.number("profile_weekend");
    pp.seasonal_amplitude = cfg.number("profile_seasonal");
    pp.validate();
    return catalog::synth_profile(pp, sys.snapshots(), cfg.number("dt_hours"));
}

coupling::CouplingCosts load_costs(const RunConfig& cfg)
{
    coupling::CouplingCosts c;
    c.electrolyzer_capex_per_mw = cfg.number("electrolyzer_capex_per_mw");
    c.efficiency = cfg.number("electrolyzer_efficiency");
    c.storage_capex_per_mwh = cfg.number("storage_capex_per_mwh");
    c.storage_cap_mwh = cfg.number("storage_cap_mwh");
    c.connection_per_mw_km = cfg.number("connection_eur_per_mw_km");
    c.discount_rate = cfg.number("discount_rate");
    c.validate();
    return c;
}

std::vector<int> modes_of(const RunConfig& cfg)
{
    const std::string m = cfg.text("mode");
    if (m == "1") return {1};
    if (m == "2") return {2};
    if (m == "both") return {1, 2};
    throw Error(ErrorCode::Param, "mode must be 1, 2 or both, got '" + m + "'");
}

// Writes the per-case files under `dir` and returns the summary row.
report::CaseSummary emit_case(Run& run, const std::string& label, const std::string& dir, const power::SolvedCase& c,
                              const coupling::ScenarioResult* scenario)
{
    report::CaseSummary sum;
    sum.label = label;
    run.stage("write " + label, [&] {
        const std::string p = dir.empty() ? "" : dir + "/";
        const auto lmp = metrics::extract_lmp(c);
        sum.cost = metrics::system_cost_report(c);
        run.emit(p + "cost_report.csv", report::cost_report_csv(sum.cost));
        run.emit(p + "lmp.csv", report::lmp_csv(lmp));
        run.emit(p + "lmp_summary.csv", report::lmp_summary_csv(lmp));
        run.emit(p + "capacities.csv", report::capacities_csv(c));
        if (run.geojson()) run.emit(p + "buses.geojson", report::buses_geojson(c.system, lmp));
        if (!scenario) return;

        run.emit(p + "designs.csv", report::designs_csv(scenario->designs));
        if (!scenario->local_designs.empty()) run.emit(p + "local_designs.csv", report::designs_csv(scenario->local_designs));
        std::vector<report::StationLcoh> rows;
        std::vector<metrics::LcohBreakdown> produced;
        for (const auto& st : scenario->stations) {
            report::StationLcoh row{st.site, st.attachment.bus_id, std::nullopt};
            try {
                row.lcoh = metrics::lcoh(st.site, c);
                produced.push_back(*row.lcoh);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::ZeroProduction) throw;
                run.warn(label + ": station " + st.site.id + " produces no hydrogen; LCOH undefined");
            }
            rows.push_back(std::move(row));
        }
        for (const auto& d : scenario->designs) {
            sum.electrolyzer_mw += d.power_mw;
            sum.hydrogen_storage_mwh += d.energy_mwh;
        }
        if (!produced.empty()) {
            sum.weighted_lcoh = metrics::weighted_lcoh(produced);
            double capex = 0.0, total = 0.0;
            for (const auto& b : produced) {
                capex += b.capex();
                total += b.total();
            }
            if (total > 0.0) sum.capex_share = capex / total;
        }
        run.emit(p + "lcoh.csv", report::lcoh_csv(rows));
        if (run.geojson()) run.emit(p + "hrs_stations.geojson", report::hrs_geojson(rows));
    });
    return sum;
}

coupling::ScenarioResult solve_scenario(Run& run, int mode, const power::PowerSystem& sys,
                                        const std::vector<catalog::HrsSite>& sites,
                                        const catalog::HrsDemandProfile& profile, const coupling::CouplingCosts& costs)
{
    const std::string name = "scenario " + std::to_string(mode);
    coupling::ScenarioResult res;
    run.stage(name, [&] {
        coupling::ScenarioSpec spec;
        spec.mode = coupling::scenario_mode(mode);
        spec.costs = costs;
        res = coupling::run_scenario(sys, sites, profile, spec);
        run.verify_case(name, res.solved);
    });
    return res;
}

// ---- commands ---------------------------------------------------------------

void cmd_site(Run& run)
{
    Siting s = run_siting(run);
    emit_siting(run, s);
}

void cmd_power(Run& run)
{
    power::PowerSystem sys = load_power(run);
    power::SolvedCase c;
    run.stage("baseline", [&] {
        c = power::solve_case(sys, "baseline");
        run.verify_case("baseline", c);
    });
    auto sum = emit_case(run, "baseline", "", c, nullptr);
    run.stage("write chart", [&] { run.emit("costs.svg", report::cost_chart_svg({sum})); });
}

void cmd_couple(Run& run)
{
    const std::vector<int> modes = modes_of(run.cfg);
    coupling::CouplingCosts costs;
    run.stage("configure", [&] { costs = load_costs(run.cfg); });
    const auto sites = load_sites(run, "");
    if (sites.empty()) run.warn("no stations; scenarios reduce to the baseline");
    power::PowerSystem sys = load_power(run);
    catalog::HrsDemandProfile profile;
    run.stage("profile", [&] { profile = load_profile(run.cfg, sys); });

    std::vector<report::CaseSummary> cases;
    for (int m : modes) {
        const auto res = solve_scenario(run, m, sys, sites, profile, costs);
        const std::string label = "scenario" + std::to_string(m);
        cases.push_back(emit_case(run, label, modes.size() > 1 ? label : "", res.solved, &res));
    }
    run.stage("write chart", [&] {
        run.emit("costs.svg", report::cost_chart_svg(cases));
        if (cases.size() > 1) run.emit("comparison.csv", report::summary_csv(cases));
    });
}

void cmd_report(Run& run)
{
    coupling::CouplingCosts costs;
    run.stage("configure", [&] { costs = load_costs(run.cfg); });
    const auto sites = load_sites(run, "siting/");
    power::PowerSystem sys = load_power(run);
    catalog::HrsDemandProfile profile;
    run.stage("profile", [&] { profile = load_profile(run.cfg, sys); });

    std::vector<report::CaseSummary> cases;
    power::SolvedCase base;
    run.stage("baseline", [&] {
        base = power::solve_case(sys, "baseline");
        run.verify_case("baseline", base);
    });
    cases.push_back(emit_case(run, "baseline", "baseline", base, nullptr));
    for (int m : {1, 2}) {
        const auto res = solve_scenario(run, m, sys, sites, profile, costs);
        const std::string label = "scenario" + std::to_string(m);
        cases.push_back(emit_case(run, label, label, res.solved, &res));
    }
    run.stage("write summary", [&] {
        run.emit("summary.csv", report::summary_csv(cases));
        run.emit("costs.svg", report::cost_chart_svg(cases));
    });
}

std::size_t count_key(const RunConfig& cfg, const std::string& key, long min)
{
    const long v = cfg.integer(key);
    if (v < min) throw Error(ErrorCode::Param, "config key '" + key + "' must be at least " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

void cmd_synth(Run& run)
{
    synth::SynthParams p;
    double range = 600.0;
    run.stage("configure", [&] {
        const long seed = run.cfg.integer("seed");
        if (seed < 0) throw Error(ErrorCode::Param, "seed must be non-negative");
        p.seed = static_cast<std::uint64_t>(seed);
        p.nodes = count_key(run.cfg, "synth_nodes", 2);
        p.trips = count_key(run.cfg, "synth_trips", 0);
        p.buses = count_key(run.cfg, "synth_buses", 1);
        p.snapshots = count_key(run.cfg, "synth_snapshots", 1);
        p.snapshot_hours = run.cfg.number("dt_hours");
        if (run.cfg.has("range_km")) range = run.cfg.number("range_km");
        if (!(range > 0.0)) throw Error(ErrorCode::Param, "range_km must be positive");
    });
    synth::HighwayInstance inst;
    power::PowerSystem sys;
    run.stage("generate", [&] {
        inst = synth::synth_highway(p);
        sys = synth::synth_power(p);
    });
    run.stage("post-check", [&] {
        const auto issues = power::validate_system(sys);
        if (!issues.empty()) throw Error(ErrorCode::Internal, "generated power system is invalid: " + issues.front(), issues);
        frlm::FrlmConfig fc;
        fc.range_km = range;
        for (int attempt = 0;; ++attempt) {
            try {
                highway::HighwayNetwork net(inst.nodes, inst.edges);
                auto routed = highway::filter_trips(highway::route_trips(net, inst.trips, fc.range_km));
                frlm::solve_siting(frlm::build_model(net, routed, fc));
                break;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::Infeasible || attempt == 8) throw;
            }
            p.flow_scale *= 0.5;
            inst = synth::synth_highway(p);
            run.warn("siting infeasible at generated flows; trip flows scaled by " + io::format_number(p.flow_scale));
        }
    });
    run.stage("write", [&] {
        run.emit("nodes.csv", io::nodes_csv(inst.nodes));
        run.emit("edges.csv", io::edges_csv(inst.edges));
        run.emit("trips.csv", io::trips_csv(inst.trips));
        for (const fs::path& f : io::write_power_system(sys, run.report.out_dir / "power")) {
            run.report.outputs.push_back(fs::path("power") / f.filename());
        }
        std::string conf = "# synthetic instance, seed " + std::to_string(p.seed) + "\n";
        conf += "nodes = nodes.csv\nedges = edges.csv\ntrips = trips.csv\npower = power\n";
        conf += "range_km = " + io::format_number(range) + "\n";
        conf += "dt_hours = " + io::format_number(p.snapshot_hours) + "\n";
        conf += "seed = " + std::to_string(p.seed) + "\n";
        run.emit("config.txt", conf);
    });
}

// ---- manifest ---------------------------------------------------------------

void write_manifest(Run& run)
{
    RunReport& rep = run.report;
    json m;
    m["tool"] = "h2grid";
    m["version"] = std::string(version());
    m["command"] = rep.command;
    m["exit_code"] = rep.exit_code;
    m["status"] = rep.exit_code == 0 ? "ok" : "failed";
    m["message"] = rep.message;
    m["warnings"] = rep.warnings;
    m["config_sha256"] = sha256_hex(run.cfg.canonical());
    json conf = json::object();
    for (const auto& [k, v] : run.cfg.values()) conf[k] = v;
    m["config"] = std::move(conf);
    json inputs = json::array();
    for (const auto& [path, sha] : run.inputs) inputs.push_back({{"path", path}, {"sha256", sha}});
    m["inputs"] = std::move(inputs);
    json stages = json::array();
    for (const auto& s : rep.stages) stages.push_back({{"name", s.name}, {"status", s.status}, {"seconds", s.seconds}});
    m["stages"] = std::move(stages);
    json solvers = json::array();
    for (const auto& s : rep.solvers) {
        solvers.push_back({{"stage", s.stage}, {"status", s.status}, {"objective", s.objective},
                           {"iterations", s.iterations}, {"duality_gap", s.duality_gap}});
    }
    m["solvers"] = std::move(solvers);
    json outputs = json::array();
    for (const auto& rel : rep.outputs) {
        const fs::path full = rep.out_dir / rel;
        json o = {{"path", rel.generic_string()}};
        std::error_code ec;
        const auto size = fs::file_size(full, ec);
        o["bytes"] = ec ? 0 : size;
        try {
            o["sha256"] = sha256_file(full);
        } catch (const Error&) {
            o["sha256"] = nullptr;
        }
        outputs.push_back(std::move(o));
    }
    m["outputs"] = std::move(outputs);
    io::write_text(rep.out_dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace

RunReport run(std::string_view command, const RunConfig& cfg, const std::optional<Error>& config_error)
{
    Run r(command, cfg);
    auto fail = [&](const Error& e) {
        r.report.exit_code = exit_code_for(e.code());
        r.report.message = e.what();
        std::string diag = std::string(e.what()) + "\n";
        diag += "error: " + std::string(to_string(e.code())) + "\n";
        for (const auto& d : e.details()) diag += "  " + d + "\n";
        try {
            r.emit("diagnostic.txt", diag);
        } catch (const std::exception&) {
        }
    };
    try {
        if (config_error) throw Error(config_error->code(), "config: " + std::string(config_error->what()), config_error->details());
        check_format(cfg);
        if (command == "site") {
            cmd_site(r);
        } else if (command == "power") {
            cmd_power(r);
        } else if (command == "couple") {
            cmd_couple(r);
        } else if (command == "synth") {
            cmd_synth(r);
        } else if (command == "report") {
            cmd_report(r);
        } else {
            throw Error(ErrorCode::Param, "unknown command '" + std::string(command) + "'");
        }
    } catch (const Error& e) {
        fail(e);
    } catch (const std::exception& e) {
        fail(Error(ErrorCode::Internal, e.what()));
    }
    try {
        write_manifest(r);
    } catch (const std::exception& e) {
        r.report.warnings.push_back(std::string("manifest not written: ") + e.what());
        if (r.report.exit_code == 0) {
            r.report.exit_code = 1;
            r.report.message = std::string("manifest not written: ") + e.what();
        }
    }
    return r.report;
}

}  // namespace h2g::pipeline
