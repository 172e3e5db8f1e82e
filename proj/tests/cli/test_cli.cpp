// End-to-end runs of the command-line tool against the bundled fixtures.
#include "h2grid/io.hpp"
#include "h2grid/pipeline.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

using namespace h2g;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path kData = H2G_DATA_DIR;
const fs::path kScratch = H2G_SCRATCH_DIR;

struct Outcome {
    int code = -1;
    std::string err;
    fs::path out;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs `h2grid <args> --out <scratch/name>` from a fresh output directory.
Outcome cli(const std::string& name, const std::string& args, const std::string& env = "")
{
    Outcome o;
    o.out = kScratch / name;
    fs::remove_all(o.out);
    fs::create_directories(kScratch);
    const fs::path err = kScratch / (name + ".stderr");
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + std::string(H2G_CLI) + "\" " + args + " --out \"" +
                            o.out.string() + "\" -q 2> \"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.err = slurp(err);
    return o;
}

std::string fixture(const std::string& name) { return "\"" + (kData / "fixtures" / name / "config.txt").string() + "\""; }

json manifest(const Outcome& o) { return json::parse(slurp(o.out / "manifest.json")); }

std::map<std::string, std::string> checksums(const Outcome& o)
{
    std::map<std::string, std::string> m;
    const json doc = manifest(o);
    for (const auto& f : doc["outputs"]) m[f["path"].get<std::string>()] = f["sha256"].get<std::string>();
    return m;
}

double metric(const fs::path& csv, const std::string& name, std::size_t col = 1)
{
    auto t = io::CsvTable::read(csv);
    for (std::size_t r = 0; r < t.rows(); ++r) {
        if (t.cell(r, 0) == name) return t.number(r, col);
    }
    FAIL("metric " << name << " missing from " << csv);
    return 0.0;
}

}  // namespace

TEST_CASE("site on the tiny fixture opens one station carrying 1320 kg/day")
{
    auto o = cli("t1", "site -c " + fixture("t1"));
    REQUIRE(o.code == 0);
    auto t = io::CsvTable::read(o.out / "stations.csv");
    int open = 0;
    double load = 0.0;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        if (t.boolean(r, t.require_column("open"))) {
            ++open;
            load += t.number(r, t.require_column("load_kg_per_day"));
        }
    }
    CHECK(open == 1);
    CHECK(load == doctest::Approx(1320.0).epsilon(1e-12));
    CHECK(metric(o.out / "siting_summary.csv", "stations") == 1.0);

    // Every listed output exists with the recorded checksum.
    const json m = manifest(o);
    CHECK(m["exit_code"] == 0);
    CHECK(m["inputs"].size() == 3);
    for (const auto& f : m["outputs"]) {
        CHECK(pipeline::sha256_file(o.out / f["path"].get<std::string>()) == f["sha256"]);
    }
}

TEST_CASE("site with no trips sites nothing and warns")
{
    auto o = cli("empty", "site -c " + fixture("empty_trips"));
    REQUIRE(o.code == 0);
    CHECK(metric(o.out / "siting_summary.csv", "stations") == 0.0);
    CHECK(o.err.find("warning") != std::string::npos);
    CHECK(manifest(o)["warnings"].size() >= 1);
}

TEST_CASE("malformed CSV exits 1 with the line number and still writes a manifest")
{
    auto o = cli("malformed", "site -c " + fixture("malformed"));
    CHECK(o.code == 1);
    CHECK(o.err.find("nodes.csv:3") != std::string::npos);
    const json m = manifest(o);
    CHECK(m["exit_code"] == 1);
    CHECK(m["status"] == "failed");
}

TEST_CASE("unknown config keys and bad flags are input errors")
{
    auto o = cli("badkey", "site -c " + fixture("t1") + " --set no_such_key=1");
    CHECK(o.code == 1);
    CHECK(manifest(o)["message"].get<std::string>().find("no_such_key") != std::string::npos);
    auto f = cli("badflag", "site --mode 7");
    CHECK(f.code == 1);
    auto r = cli("norange", "site -c " + fixture("t1") + " --set range_km=");
    CHECK(r.code == 1);
    CHECK(r.err.find("range_km") != std::string::npos);
}

TEST_CASE("an unreachable CO2 cap exits 2 with a diagnostic file")
{
    auto o = cli("gas", "power -c " + fixture("gas_only"));
    CHECK(o.code == 2);
    CHECK(fs::exists(o.out / "diagnostic.txt"));
    CHECK(manifest(o)["exit_code"] == 2);
    auto ok = cli("gas_capped", "power -c " + fixture("gas_only") + " --set co2_cap_t=inf");
    CHECK(ok.code == 0);
}

TEST_CASE("power runs are reproducible bit for bit")
{
    auto a = cli("power_a", "power -c " + fixture("two_bus"));
    auto b = cli("power_b", "power -c " + fixture("two_bus"));
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(checksums(a) == checksums(b));
    const json m = manifest(a);
    REQUIRE(m["solvers"].size() == 1);
    CHECK(m["solvers"][0]["duality_gap"].get<double>() <= 1e-6);
    // Golden value recorded once from a run that passed the independent LP check.
    CHECK(metric(a.out / "cost_report.csv", "total_cost") == doctest::Approx(412653367.5166238).epsilon(1e-9));
}

TEST_CASE("halving the snapshot length with repeated series leaves the objective unchanged")
{
    const fs::path src = kData / "fixtures" / "two_bus" / "power";
    auto sys = io::read_power_system(src, 2.0);
    auto twice = [](const std::vector<double>& v) {
        std::vector<double> out;
        for (double x : v) out.insert(out.end(), {x, x});
        return out;
    };
    for (auto& b : sys.buses) b.load = twice(b.load);
    for (auto& g : sys.generators) {
        if (!g.availability.empty()) g.availability = twice(g.availability);
    }
    sys.snapshot_hours.assign(2 * sys.snapshot_hours.size(), 1.0);
    const fs::path dir = kScratch / "half_dt_power";
    fs::remove_all(dir);
    io::write_power_system(sys, dir);

    auto base = cli("dt2", "power -c " + fixture("two_bus"));
    auto half = cli("dt1", "power --set power=\"" + dir.string() + "\" --set dt_hours=1");
    REQUIRE(base.code == 0);
    REQUIRE(half.code == 0);
    const double a = metric(base.out / "cost_report.csv", "total_cost");
    const double b = metric(half.out / "cost_report.csv", "total_cost");
    CHECK(std::abs(a - b) / std::abs(a) <= 1e-6);
}

TEST_CASE("couple runs both scenarios and scenario 2 is never dearer")
{
    auto o = cli("couple", "couple -c " + fixture("two_bus") + " --mode both --format geojson");
    REQUIRE(o.code == 0);
    const fs::path cmp = o.out / "comparison.csv";
    REQUIRE(fs::exists(cmp));
    const double s1 = metric(cmp, "total_annual_system_cost", 2);
    const double s2 = metric(cmp, "total_annual_system_cost", 3);
    CHECK(s2 <= s1 * (1.0 + 1e-6));
    for (const char* dir : {"scenario1", "scenario2"}) {
        CHECK(fs::exists(o.out / dir / "designs.csv"));
        auto t = io::CsvTable::read(o.out / dir / "lcoh.csv");
        CHECK(t.rows() == 2);
        const json gj = json::parse(slurp(o.out / dir / "hrs_stations.geojson"));
        CHECK(gj["type"] == "FeatureCollection");
        CHECK(gj["features"].size() == 2);
        CHECK(gj["features"][0]["geometry"]["coordinates"].size() == 2);
    }
    CHECK(fs::exists(o.out / "scenario1" / "local_designs.csv"));
    CHECK(slurp(o.out / "costs.svg").starts_with("<svg"));

    // The congested corridor makes hydrogen dearer at the load center.
    auto t = io::CsvTable::read(o.out / "scenario2" / "lcoh.csv");
    std::map<std::string, double> l;
    for (std::size_t r = 0; r < t.rows(); ++r) l[t.cell(r, 0)] = t.number(r, t.require_column("lcoh_eur_per_kg"));
    CHECK(l.at("H_North") < l.at("H_South"));
}

TEST_CASE("couple without stations reproduces the baseline in both modes")
{
    const fs::path empty = kScratch / "no_stations.csv";
    io::write_text(empty, "id,lat,lon,daily_demand_kg\n");
    auto base = cli("nost_base", "power -c " + fixture("two_bus"));
    auto o = cli("nost", "couple -c " + fixture("two_bus") + " --mode both --set stations=\"" + empty.string() + "\"");
    REQUIRE(base.code == 0);
    REQUIRE(o.code == 0);
    const double b = metric(base.out / "cost_report.csv", "total_cost");
    CHECK(metric(o.out / "comparison.csv", "total_annual_system_cost", 2) == doctest::Approx(b).epsilon(1e-9));
    CHECK(metric(o.out / "comparison.csv", "total_annual_system_cost", 3) == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("synth is seeded, sized as requested and feeds the other commands")
{
    auto a = cli("synth_a", "synth --seed 42");
    auto b = cli("synth_b", "synth --seed 42");
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(checksums(a) == checksums(b));
    for (const auto& [path, sha] : checksums(a)) CHECK(slurp(a.out / path) == slurp(b.out / path));
    CHECK(io::read_nodes(a.out / "nodes.csv").size() == 8);

    auto c = cli("synth_c", "synth --seed 43 --set synth_nodes=12");
    REQUIRE(c.code == 0);
    CHECK(io::read_nodes(c.out / "nodes.csv").size() == 12);
    CHECK(checksums(c) != checksums(a));

    const std::string conf = "\"" + (a.out / "config.txt").string() + "\"";
    auto s = cli("synth_site", "site -c " + conf);
    CHECK(s.code == 0);
    CHECK(metric(s.out / "siting_summary.csv", "stations") >= 1.0);
}

TEST_CASE("emitted CSV files read back through the parsers")
{
    auto o = cli("roundtrip", "site -c " + fixture("t1"));
    REQUIRE(o.code == 0);
    auto sites = io::read_sites(o.out / "hrs_sites.csv");
    REQUIRE(sites.size() == 1);
    CHECK(io::sites_csv(sites) == slurp(o.out / "hrs_sites.csv"));

    auto syn = cli("roundtrip_synth", "synth --seed 7");
    REQUIRE(syn.code == 0);
    CHECK(io::nodes_csv(io::read_nodes(syn.out / "nodes.csv")) == slurp(syn.out / "nodes.csv"));
    CHECK(io::edges_csv(io::read_edges(syn.out / "edges.csv")) == slurp(syn.out / "edges.csv"));
    CHECK(io::trips_csv(io::read_trips(syn.out / "trips.csv")) == slurp(syn.out / "trips.csv"));

    auto rep = cli("roundtrip_report", "report -c " + fixture("two_bus"));
    REQUIRE(rep.code == 0);
    for (const auto& [path, sha] : checksums(rep)) {
        if (!path.ends_with(".csv")) continue;
        const auto t = io::CsvTable::read(rep.out / path);
        CHECK(t.header().size() >= 2);
        std::string again = io::csv_line(t.header());
        for (std::size_t r = 0; r < t.rows(); ++r) {
            std::vector<std::string> row;
            for (std::size_t c = 0; c < t.header().size(); ++c) row.push_back(t.cell(r, c));
            again += io::csv_line(row);
        }
        CHECK_MESSAGE(again == slurp(rep.out / path), path);
    }
    auto t = io::CsvTable::read(rep.out / "summary.csv");
    CHECK(t.header().size() == 5);  // metric, unit, baseline, scenario1, scenario2
}

TEST_CASE("environment overrides the file and flags override both")
{
    auto env = cli("env", "site -c " + fixture("t1"), "H2G_RANGE_KM=300");
    REQUIRE(env.code == 0);
    CHECK(manifest(env)["config"]["range_km"] == "300");
    auto flag = cli("flag", "site -c " + fixture("t1") + " --set range_km=350", "H2G_RANGE_KM=300");
    REQUIRE(flag.code == 0);
    CHECK(manifest(flag)["config"]["range_km"] == "350");
    auto file = cli("file", "site -c " + fixture("t1"));
    CHECK(manifest(file)["config"]["range_km"] == "250");
}
