#include "h2grid/io.hpp"

#include "h2grid/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace h2g::io {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// Splits one record. Quoted fields may contain commas and doubled quotes but
// not newlines.
std::vector<std::string> split_record(std::string_view line, bool& ok)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    ok = true;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && trim(cur).empty()) {
            quoted = true;
            was_quoted = true;
            cur.clear();
        } else if (c == ',') {
            out.push_back(was_quoted ? cur : trim(cur));
            cur.clear();
            was_quoted = false;
        } else {
            cur += c;
        }
    }
    if (quoted) ok = false;
    out.push_back(was_quoted ? cur : trim(cur));
    return out;
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::optional<double> optional_number(const CsvTable& t, std::size_t row, std::optional<std::size_t> col)
{
    if (!col || t.cell(row, *col).empty()) return std::nullopt;
    return t.number(row, *col);
}

}  // namespace

CsvTable CsvTable::parse(std::string_view text, std::string source)
{
    CsvTable t;
    t.source_ = std::move(source);
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    std::size_t pos = 0, line_no = 0;
    bool have_header = false;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (trim(raw).empty()) continue;
        bool ok = true;
        auto fields = split_record(raw, ok);
        if (!ok) throw Error(ErrorCode::Parse, t.source_ + ":" + std::to_string(line_no) + ": unterminated quote");
        if (!have_header) {
            std::set<std::string> seen;
            for (const auto& h : fields) {
                if (h.empty()) throw Error(ErrorCode::Parse, t.source_ + ":" + std::to_string(line_no) + ": empty column name in header");
                if (!seen.insert(h).second) {
                    throw Error(ErrorCode::Parse, t.source_ + ":" + std::to_string(line_no) + ": duplicate column '" + h + "'");
                }
            }
            t.header_ = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header_.size()) {
            throw Error(ErrorCode::Parse, t.source_ + ":" + std::to_string(line_no) + ": expected " +
                                              std::to_string(t.header_.size()) + " fields, found " + std::to_string(fields.size()));
        }
        t.rows_.push_back(std::move(fields));
        t.lines_.push_back(line_no);
    }
    if (!have_header) throw Error(ErrorCode::Parse, t.source_ + ":1: missing header row");
    return t;
}

CsvTable CsvTable::read(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t CsvTable::require_column(std::string_view name) const
{
    if (auto c = column(name)) return *c;
    throw Error(ErrorCode::Parse, source_ + ":1: missing column '" + std::string(name) + "'");
}

void CsvTable::fail(std::size_t row, const std::string& what) const
{
    throw Error(ErrorCode::Parse, source_ + ":" + std::to_string(lines_[row]) + ": " + what);
}

double CsvTable::number(std::size_t row, std::size_t col) const
{
    const std::string& s = cell(row, col);
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (s.empty() || ec != std::errc() || ptr != last || std::isnan(v)) {
        fail(row, "column '" + header_[col] + "': '" + s + "' is not a number");
    }
    return v;
}

bool CsvTable::boolean(std::size_t row, std::size_t col) const
{
    const std::string s = lower(cell(row, col));
    if (s == "1" || s == "true" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "no") return false;
    fail(row, "column '" + header_[col] + "': '" + cell(row, col) + "' is not a boolean");
}

std::string format_number(double v)
{
    if (v == 0.0) return "0";  // folds -0
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string csv_line(const std::vector<std::string>& fields)
{
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n") != std::string::npos || (!f.empty() && (f.front() == ' ' || f.back() == ' '))) {
            out += '"';
            for (char c : f) {
                if (c == '"') out += '"';
                out += c;
            }
            out += '"';
        } else {
            out += f;
        }
    }
    out += '\n';
    return out;
}

void write_text(const fs::path& path, std::string_view text)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
}

std::vector<highway::GeoNode> read_nodes(const fs::path& path)
{
    const CsvTable t = CsvTable::read(path);
    const auto id = t.require_column("id"), lat = t.require_column("lat"), lon = t.require_column("lon");
    const auto cand = t.require_column("is_candidate");
    std::vector<highway::GeoNode> out;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        if (t.cell(r, id).empty()) t.fail(r, "empty node id");
        out.push_back({t.cell(r, id), t.number(r, lat), t.number(r, lon), t.boolean(r, cand)});
    }
    return out;
}

std::vector<highway::Edge> read_edges(const fs::path& path)
{
    const CsvTable t = CsvTable::read(path);
    const auto from = t.require_column("from"), to = t.require_column("to"), len = t.require_column("length_km");
    std::vector<highway::Edge> out;
    for (std::size_t r = 0; r < t.rows(); ++r) out.push_back({t.cell(r, from), t.cell(r, to), t.number(r, len)});
    return out;
}

std::vector<highway::OdTrip> read_trips(const fs::path& path)
{
    const CsvTable t = CsvTable::read(path);
    const auto id = t.require_column("id"), o = t.require_column("origin"), d = t.require_column("destination");
    const auto f = t.require_column("flow_per_day");
    std::vector<highway::OdTrip> out;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        if (t.cell(r, id).empty()) t.fail(r, "empty trip id");
        out.push_back({t.cell(r, id), t.cell(r, o), t.cell(r, d), t.number(r, f)});
    }
    return out;
}

std::string nodes_csv(const std::vector<highway::GeoNode>& nodes)
{
    std::string s = csv_line({"id", "lat", "lon", "is_candidate"});
    for (const auto& n : nodes) s += csv_line({n.id, format_number(n.lat), format_number(n.lon), n.is_candidate ? "1" : "0"});
    return s;
}

std::string edges_csv(const std::vector<highway::Edge>& edges)
{
    std::string s = csv_line({"from", "to", "length_km"});
    for (const auto& e : edges) s += csv_line({e.from, e.to, format_number(e.length_km)});
    return s;
}

std::string trips_csv(const std::vector<highway::OdTrip>& trips)
{
    std::string s = csv_line({"id", "origin", "destination", "flow_per_day"});
    for (const auto& q : trips) s += csv_line({q.id, q.origin, q.destination, format_number(q.flow_per_day)});
    return s;
}

std::vector<catalog::HrsSite> read_sites(const fs::path& path)
{
    const CsvTable t = CsvTable::read(path);
    const auto id = t.require_column("id"), lat = t.require_column("lat"), lon = t.require_column("lon");
    const auto kg = t.require_column("daily_demand_kg");
    std::vector<catalog::HrsSite> out;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        try {
            out.push_back(catalog::make_site(t.cell(r, id), t.number(r, lat), t.number(r, lon), t.number(r, kg)));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Parse) throw;
            t.fail(r, e.what());
        }
    }
    return out;
}

std::string sites_csv(const std::vector<catalog::HrsSite>& sites)
{
    std::string s = csv_line({"id", "lat", "lon", "daily_demand_kg"});
    for (const auto& x : sites) s += csv_line({x.id, format_number(x.lat), format_number(x.lon), format_number(x.daily_demand_kg)});
    return s;
}

namespace {

struct Matrix {
    std::vector<std::string> buses;
    std::vector<std::vector<double>> values;  // [snapshot][bus]
};

Matrix read_matrix(const fs::path& path)
{
    const CsvTable t = CsvTable::read(path);
    const auto snap = t.require_column("snapshot");
    Matrix m;
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < t.header().size(); ++c) {
        if (c == snap) continue;
        m.buses.push_back(t.header()[c]);
        cols.push_back(c);
    }
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const double s = t.number(r, snap);
        if (s != static_cast<double>(r)) t.fail(r, "snapshots must be numbered 0, 1, 2, ... in order");
        auto& row = m.values.emplace_back();
        for (std::size_t c : cols) row.push_back(t.number(r, c));
    }
    return m;
}

std::string matrix_csv(const std::vector<std::string>& buses, const std::vector<const std::vector<double>*>& series, std::size_t T)
{
    std::vector<std::string> head{"snapshot"};
    head.insert(head.end(), buses.begin(), buses.end());
    std::string s = csv_line(head);
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<std::string> row{std::to_string(t)};
        for (const auto* v : series) row.push_back(format_number(v->empty() ? 0.0 : (*v)[t]));
        s += csv_line(row);
    }
    return s;
}

void set_if(std::optional<double> v, double& field)
{
    if (v) field = *v;
}

}  // namespace

power::PowerSystem read_power_system(const fs::path& dir, double snapshot_hours)
{
    if (!(snapshot_hours > 0.0)) throw Error(ErrorCode::Param, "snapshot duration must be positive");
    power::PowerSystem sys;
    {
        const CsvTable t = CsvTable::read(dir / "buses.csv");
        const auto id = t.require_column("id"), lat = t.require_column("lat"), lon = t.require_column("lon");
        for (std::size_t r = 0; r < t.rows(); ++r) sys.buses.push_back({t.cell(r, id), t.number(r, lat), t.number(r, lon), {}});
    }
    const Matrix loads = read_matrix(dir / "loads.csv");
    const std::size_t T = loads.values.size();
    if (T == 0) throw Error(ErrorCode::Parse, (dir / "loads.csv").string() + ":2: no snapshots");
    sys.snapshot_hours.assign(T, snapshot_hours);
    for (std::size_t c = 0; c < loads.buses.size(); ++c) {
        auto b = sys.bus_index(loads.buses[c]);
        if (!b) throw Error(ErrorCode::Parse, (dir / "loads.csv").string() + ":1: unknown bus '" + loads.buses[c] + "'");
        auto& series = sys.buses[*b].load;
        for (std::size_t t = 0; t < T; ++t) series.push_back(loads.values[t][c]);
    }

    if (fs::exists(dir / "lines.csv")) {
        const CsvTable t = CsvTable::read(dir / "lines.csv");
        const auto id = t.require_column("id"), from = t.require_column("from"), to = t.require_column("to");
        const auto len = t.require_column("length_km"), x = t.require_column("reactance"), ex = t.require_column("existing_mw");
        const auto mx = t.column("max_mw"), uf = t.column("usable_fraction"), cap = t.column("capex_per_mw_km");
        const auto fom = t.column("fom_pct"), life = t.column("lifetime");
        for (std::size_t r = 0; r < t.rows(); ++r) {
            power::AcLine l;
            l.id = t.cell(r, id);
            l.from = t.cell(r, from);
            l.to = t.cell(r, to);
            l.length_km = t.number(r, len);
            l.reactance = t.number(r, x);
            l.existing_mw = t.number(r, ex);
            set_if(optional_number(t, r, mx), l.max_mw);
            set_if(optional_number(t, r, uf), l.usable_fraction);
            set_if(optional_number(t, r, cap), l.capex_per_mw_km);
            set_if(optional_number(t, r, fom), l.fom_pct);
            set_if(optional_number(t, r, life), l.lifetime);
            sys.lines.push_back(std::move(l));
        }
    }
    if (fs::exists(dir / "links.csv")) {
        const CsvTable t = CsvTable::read(dir / "links.csv");
        const auto id = t.require_column("id"), from = t.require_column("from"), to = t.require_column("to");
        const auto len = t.require_column("length_km"), ex = t.require_column("existing_mw");
        const auto mx = t.column("max_mw"), inv = t.column("inverter_capex_per_mw"), cap = t.column("capex_per_mw_km");
        const auto fom = t.column("fom_pct"), life = t.column("lifetime");
        for (std::size_t r = 0; r < t.rows(); ++r) {
            power::DcLink k;
            k.id = t.cell(r, id);
            k.from = t.cell(r, from);
            k.to = t.cell(r, to);
            k.length_km = t.number(r, len);
            k.existing_mw = t.number(r, ex);
            set_if(optional_number(t, r, mx), k.max_mw);
            set_if(optional_number(t, r, inv), k.inverter_capex_per_mw);
            set_if(optional_number(t, r, cap), k.capex_per_mw_km);
            set_if(optional_number(t, r, fom), k.fom_pct);
            set_if(optional_number(t, r, life), k.lifetime);
            sys.links.push_back(std::move(k));
        }
    }

    std::map<std::string, Matrix> availability;
    {
        const CsvTable t = CsvTable::read(dir / "generators.csv");
        const auto id = t.require_column("id"), bus = t.require_column("bus"), carrier = t.require_column("carrier");
        const auto pmax = t.column("p_nom_max"), pmin = t.column("p_nom_min"), capex = t.column("capex_per_mw");
        const auto fom = t.column("fom_pct"), vom = t.column("vom"), fuel = t.column("fuel_cost");
        const auto eff = t.column("efficiency"), co2 = t.column("co2_per_mwh_th"), life = t.column("lifetime");
        for (std::size_t r = 0; r < t.rows(); ++r) {
            power::Generator g;
            const std::string& c = t.cell(r, carrier);
            try {
                g = power::generator_defaults(c);
            } catch (const Error&) {
                g.carrier = c;  // custom technology, all parameters from the columns
            }
            g.id = t.cell(r, id);
            g.bus = t.cell(r, bus);
            set_if(optional_number(t, r, pmax), g.p_nom_max);
            set_if(optional_number(t, r, pmin), g.p_nom_min);
            set_if(optional_number(t, r, capex), g.capex_per_mw);
            set_if(optional_number(t, r, fom), g.fom_pct);
            set_if(optional_number(t, r, vom), g.vom);
            set_if(optional_number(t, r, fuel), g.fuel_cost);
            set_if(optional_number(t, r, eff), g.efficiency);
            set_if(optional_number(t, r, co2), g.co2_per_mwh_th);
            set_if(optional_number(t, r, life), g.lifetime);
            const fs::path avail = dir / ("availability_" + c + ".csv");
            if (fs::exists(avail)) {
                auto it = availability.find(c);
                if (it == availability.end()) it = availability.emplace(c, read_matrix(avail)).first;
                const Matrix& m = it->second;
                if (m.values.size() != T) {
                    throw Error(ErrorCode::Parse, avail.string() + ": " + std::to_string(m.values.size()) +
                                                      " snapshots, loads.csv has " + std::to_string(T));
                }
                auto col = std::find(m.buses.begin(), m.buses.end(), g.bus);
                if (col != m.buses.end()) {
                    const std::size_t k = static_cast<std::size_t>(col - m.buses.begin());
                    for (std::size_t s = 0; s < T; ++s) g.availability.push_back(m.values[s][k]);
                }
            }
            sys.generators.push_back(std::move(g));
        }
    }
    if (fs::exists(dir / "storages.csv")) {
        const CsvTable t = CsvTable::read(dir / "storages.csv");
        const auto id = t.require_column("id"), bus = t.require_column("bus"), kind = t.require_column("kind");
        const std::vector<std::pair<std::string, double power::StorageUnit::*>> fields{
            {"power_capex_per_mw", &power::StorageUnit::power_capex_per_mw},
            {"power_fom_pct", &power::StorageUnit::power_fom_pct},
            {"power_lifetime", &power::StorageUnit::power_lifetime},
            {"energy_capex_per_mwh", &power::StorageUnit::energy_capex_per_mwh},
            {"energy_fom_pct", &power::StorageUnit::energy_fom_pct},
            {"energy_lifetime", &power::StorageUnit::energy_lifetime},
            {"eta_charge", &power::StorageUnit::eta_charge},
            {"eta_discharge", &power::StorageUnit::eta_discharge},
            {"max_hours", &power::StorageUnit::max_hours},
            {"p_nom_max", &power::StorageUnit::p_nom_max},
            {"e_nom_max", &power::StorageUnit::e_nom_max},
        };
        for (std::size_t r = 0; r < t.rows(); ++r) {
            power::StorageUnit s;
            try {
                s = power::storage_defaults(t.cell(r, kind));
            } catch (const Error&) {
                s.kind = t.cell(r, kind);
            }
            s.id = t.cell(r, id);
            s.bus = t.cell(r, bus);
            for (const auto& [name, member] : fields) set_if(optional_number(t, r, t.column(name)), s.*member);
            sys.storages.push_back(std::move(s));
        }
    }
    return sys;
}

std::vector<fs::path> write_power_system(const power::PowerSystem& sys, const fs::path& dir)
{
    const std::size_t T = sys.snapshots();
    for (double h : sys.snapshot_hours) {
        if (h != sys.snapshot_hours.front()) throw Error(ErrorCode::Validation, "power directories need a uniform snapshot length");
    }
    std::vector<fs::path> written;
    auto emit = [&](const std::string& name, const std::string& text) {
        write_text(dir / name, text);
        written.push_back(dir / name);
    };

    std::string s = csv_line({"id", "lat", "lon"});
    for (const auto& b : sys.buses) s += csv_line({b.id, format_number(b.lat), format_number(b.lon)});
    emit("buses.csv", s);

    std::vector<std::string> ids;
    std::vector<const std::vector<double>*> series;
    for (const auto& b : sys.buses) {
        ids.push_back(b.id);
        series.push_back(&b.load);
    }
    emit("loads.csv", matrix_csv(ids, series, T));

    if (!sys.lines.empty()) {
        s = csv_line({"id", "from", "to", "length_km", "reactance", "existing_mw", "max_mw", "usable_fraction", "capex_per_mw_km", "fom_pct", "lifetime"});
        for (const auto& l : sys.lines) {
            s += csv_line({l.id, l.from, l.to, format_number(l.length_km), format_number(l.reactance), format_number(l.existing_mw),
                           format_number(l.max_mw), format_number(l.usable_fraction), format_number(l.capex_per_mw_km),
                           format_number(l.fom_pct), format_number(l.lifetime)});
        }
        emit("lines.csv", s);
    }
    if (!sys.links.empty()) {
        s = csv_line({"id", "from", "to", "length_km", "existing_mw", "max_mw", "inverter_capex_per_mw", "capex_per_mw_km", "fom_pct", "lifetime"});
        for (const auto& k : sys.links) {
            s += csv_line({k.id, k.from, k.to, format_number(k.length_km), format_number(k.existing_mw), format_number(k.max_mw),
                           format_number(k.inverter_capex_per_mw), format_number(k.capex_per_mw_km), format_number(k.fom_pct),
                           format_number(k.lifetime)});
        }
        emit("links.csv", s);
    }

    s = csv_line({"id", "bus", "carrier", "p_nom_max", "p_nom_min", "capex_per_mw", "fom_pct", "vom", "fuel_cost", "efficiency",
                  "co2_per_mwh_th", "lifetime"});
    std::map<std::string, std::map<std::string, const std::vector<double>*>> by_carrier;
    for (const auto& g : sys.generators) {
        s += csv_line({g.id, g.bus, g.carrier, format_number(g.p_nom_max), format_number(g.p_nom_min), format_number(g.capex_per_mw),
                       format_number(g.fom_pct), format_number(g.vom), format_number(g.fuel_cost), format_number(g.efficiency),
                       format_number(g.co2_per_mwh_th), format_number(g.lifetime)});
        if (g.availability.empty()) continue;
        auto& cols = by_carrier[g.carrier];
        auto [it, fresh] = cols.emplace(g.bus, &g.availability);
        if (!fresh && *it->second != g.availability) {
            throw Error(ErrorCode::Validation, "two '" + g.carrier + "' generators at bus '" + g.bus +
                                                   "' have different availability; one column per carrier and bus");
        }
    }
    emit("generators.csv", s);
    for (const auto& [carrier, cols] : by_carrier) {
        ids.clear();
        series.clear();
        for (const auto& b : sys.buses) {
            auto it = cols.find(b.id);
            if (it == cols.end()) continue;
            ids.push_back(b.id);
            series.push_back(it->second);
        }
        emit("availability_" + carrier + ".csv", matrix_csv(ids, series, T));
    }

    if (!sys.storages.empty()) {
        s = csv_line({"id", "bus", "kind", "power_capex_per_mw", "power_fom_pct", "power_lifetime", "energy_capex_per_mwh",
                      "energy_fom_pct", "energy_lifetime", "eta_charge", "eta_discharge", "max_hours", "p_nom_max", "e_nom_max"});
        for (const auto& st : sys.storages) {
            s += csv_line({st.id, st.bus, st.kind, format_number(st.power_capex_per_mw), format_number(st.power_fom_pct),
                           format_number(st.power_lifetime), format_number(st.energy_capex_per_mwh), format_number(st.energy_fom_pct),
                           format_number(st.energy_lifetime), format_number(st.eta_charge), format_number(st.eta_discharge),
                           format_number(st.max_hours), format_number(st.p_nom_max), format_number(st.e_nom_max)});
        }
        emit("storages.csv", s);
    }
    return written;
}

}  // namespace h2g::io
