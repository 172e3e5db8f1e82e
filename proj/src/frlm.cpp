#include "h2grid/frlm.hpp"

#include "h2grid/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

namespace h2g::frlm {
namespace {

std::string x_name(const std::string& node, const std::string& trip)
{
    return "x[" + node + "][" + trip + "]";
}

std::string describe_row(const lp::Constraint& row)
{
    if (row.tag == "cover") return "coverage requirement " + row.name + " (no open station can refuel this arc)";
    if (row.tag == "capacity") return "capacity limit " + row.name;
    if (row.tag == "arc_alloc") return "arc allocation " + row.name;
    if (row.tag == "refuel") return "refuel-occasion requirement " + row.name;
    return row.name;
}

}  // namespace

void FrlmConfig::validate() const
{
    std::vector<std::string> issues;
    if (!(range_km > 0.0)) issues.push_back("range_km must be positive");
    if (!(effective_initial_fuel() > 0.0)) issues.push_back("initial_fuel_km must be positive");
    if (!(fuel_per_km > 0.0)) issues.push_back("fuel_per_km must be positive");
    if (!(node_capacity > 0.0)) issues.push_back("node_capacity must be positive");
    if (coverage_target != 1.0) issues.push_back("coverage_target must be 1.0");
    if (!issues.empty()) throw Error(ErrorCode::Param, "invalid siting parameters: " + issues.front(), issues);
}

FrlmModel build_model(const highway::HighwayNetwork& net, const std::vector<highway::RoutedTrip>& trips,
                      const std::vector<std::vector<highway::CandidateSet>>& candidate_sets,
                      const FrlmConfig& cfg)
{
    cfg.validate();
    if (candidate_sets.size() != trips.size()) {
        throw Error(ErrorCode::InconsistentInput, "candidate sets are missing for some trips");
    }

    FrlmModel model;
    model.config = cfg;
    lp::LinearProgram& lp = model.lp;

    for (const highway::GeoNode& n : net.nodes()) {
        if (n.is_candidate) model.candidates.push_back(n.id);
    }
    std::sort(model.candidates.begin(), model.candidates.end());
    std::unordered_map<std::string, std::size_t> cand_index;
    for (const std::string& id : model.candidates) {
        cand_index.emplace(id, model.z.size());
        model.z.push_back(lp.add_variable("z[" + id + "]", 0.0, 1.0, 1.0, true));
    }

    // Per candidate node: terms of the capacity row.
    std::vector<std::vector<lp::Term>> capacity_terms(model.candidates.size());

    for (std::size_t q = 0; q < trips.size(); ++q) {
        const highway::RoutedTrip& rt = trips[q];
        const highway::TripPath& path = rt.path;
        const auto& sets = candidate_sets[q];
        if (sets.size() != path.arcs.size()) {
            throw Error(ErrorCode::InconsistentInput,
                        "trip '" + rt.trip.id + "' has " + std::to_string(sets.size()) +
                            " candidate sets for " + std::to_string(path.arcs.size()) + " arcs");
        }
        if (!(rt.trip.flow_per_day > 0.0)) {
            throw Error(ErrorCode::InconsistentInput, "trip '" + rt.trip.id + "' must have positive flow");
        }

        TripData td;
        td.id = rt.trip.id;
        td.flow = rt.trip.flow_per_day;
        td.distance_km = path.total_distance;
        td.refuel_occasions = path.refuel_occasions > 0 ? path.refuel_occasions
                                                        : highway::refuel_occasions(path.total_distance, cfg.range_km);
        const double kg_per_unit = td.flow * cfg.fuel_per_km * td.distance_km / td.refuel_occasions;

        std::unordered_map<std::string, lp::VarId> xvars;
        for (const std::string& node : path.node_sequence) {
            auto it = cand_index.find(node);
            if (it == cand_index.end() || xvars.count(node) != 0) continue;
            const lp::VarId v = lp.add_variable(x_name(node, td.id), 0.0, 1.0);
            xvars.emplace(node, v);
            td.path_candidates.push_back(node);
            model.x.push_back({node, q, v, kg_per_unit});
            capacity_terms[it->second].push_back({v, kg_per_unit});
            lp.add_constraint("link[" + node + "][" + td.id + "]", {{v, 1.0}, {model.z[it->second], -1.0}},
                              lp::Sense::LessEqual, 0.0, "link");
        }

        for (const highway::CandidateSet& cs : sets) {
            if (cs.trip_id != rt.trip.id) {
                throw Error(ErrorCode::InconsistentInput,
                            "candidate set for trip '" + cs.trip_id + "' supplied for trip '" + rt.trip.id + "'");
            }
            if (cs.pre_covered) continue;
            const std::string arc = "[" + td.id + "][" + cs.arc.from + ">" + cs.arc.to + "]";
            std::vector<lp::Term> cover;
            std::vector<lp::Term> alloc;
            for (const std::string& m : cs.members) {
                auto c = cand_index.find(m);
                auto xv = xvars.find(m);
                if (c == cand_index.end() || xv == xvars.end()) {
                    throw Error(ErrorCode::InconsistentInput,
                                "candidate set member '" + m + "' is not an on-path candidate of trip '" + td.id + "'");
                }
                cover.push_back({model.z[c->second], 1.0});
                alloc.push_back({xv->second, 1.0});
            }
            lp.add_constraint("cover" + arc, std::move(cover), lp::Sense::GreaterEqual, 1.0, "cover");
            lp.add_constraint("alloc" + arc, std::move(alloc), lp::Sense::Equal, 1.0, "arc_alloc");
        }

        std::vector<lp::Term> total;
        for (const auto& node : td.path_candidates) total.push_back({xvars.at(node), 1.0});
        lp.add_constraint("refuel[" + td.id + "]", std::move(total), lp::Sense::Equal,
                          static_cast<double>(td.refuel_occasions), "refuel");
        model.trips.push_back(std::move(td));
    }

    for (std::size_t i = 0; i < model.candidates.size(); ++i) {
        if (capacity_terms[i].empty()) continue;
        auto terms = std::move(capacity_terms[i]);
        terms.push_back({model.z[i], -cfg.node_capacity});
        lp.add_constraint("capacity[" + model.candidates[i] + "]", std::move(terms), lp::Sense::LessEqual, 0.0,
                          "capacity");
    }
    return model;
}

FrlmModel build_model(const highway::HighwayNetwork& net, const std::vector<highway::RoutedTrip>& trips,
                      const FrlmConfig& cfg)
{
    cfg.validate();
    std::vector<std::vector<highway::CandidateSet>> sets;
    sets.reserve(trips.size());
    for (const auto& t : trips) {
        sets.push_back(highway::build_candidate_sets(net, t.path, cfg.range_km, cfg.effective_initial_fuel()));
    }
    return build_model(net, trips, sets, cfg);
}

SitingSolution solve_siting(const FrlmModel& model, const lp::SolverOptions& options)
{
    const lp::Solution sol = lp::solve_milp(model.lp, options);
    if (sol.status == lp::Status::Infeasible) {
        // With every station open the program is the loosest it can be, so its
        // phase-1 residual rows name requirements no siting can satisfy.
        lp::LinearProgram open = model.lp;
        for (lp::VarId z : model.z) open.set_bounds(z, 1.0, 1.0);
        const lp::Solution relaxed = lp::solve_lp(open, options);
        std::vector<std::string> details;
        for (const std::string& row : relaxed.infeasible_rows) {
            if (auto id = model.lp.find_constraint(row)) details.push_back(describe_row(model.lp.constraint(*id)));
        }
        if (details.empty()) details.push_back("no combination of stations satisfies the coverage and capacity limits");
        throw Error(ErrorCode::Infeasible, "siting problem is infeasible: " + details.front(), details);
    }
    if (!sol.optimal()) {
        throw Error(ErrorCode::Internal, std::string("siting solve ended with status ") +
                                             std::string(lp::to_string(sol.status)));
    }

    SitingSolution out;
    out.nodes_explored = sol.nodes;
    for (std::size_t i = 0; i < model.candidates.size(); ++i) {
        if (sol.value(model.z[i]) > 0.5) out.stations.push_back(model.candidates[i]);
    }
    out.objective = static_cast<int>(out.stations.size());
    std::map<std::string, double> load;
    for (const std::string& s : out.stations) load[s] = 0.0;
    for (const AllocationVar& xv : model.x) {
        double v = std::clamp(sol.value(xv.var), 0.0, 1.0);
        if (std::abs(v) < 1e-12) v = 0.0;
        out.allocations.push_back({xv.node, model.trips[xv.trip].id, v});
        if (v > 0.0) load[xv.node] += xv.kg_per_unit * v;
    }
    out.node_load = std::move(load);
    return out;
}

std::map<std::string, double> station_loads(const std::vector<Allocation>& allocations,
                                            const std::vector<highway::RoutedTrip>& trips,
                                            const FrlmConfig& cfg)
{
    std::unordered_map<std::string, const highway::RoutedTrip*> by_id;
    for (const auto& t : trips) by_id.emplace(t.trip.id, &t);
    std::map<std::string, double> load;
    for (const Allocation& a : allocations) {
        if (a.value <= 0.0) continue;
        auto it = by_id.find(a.trip_id);
        if (it == by_id.end()) {
            throw Error(ErrorCode::InconsistentInput, "allocation references unknown trip '" + a.trip_id + "'");
        }
        const highway::TripPath& p = it->second->path;
        const int l = p.refuel_occasions > 0 ? p.refuel_occasions : highway::refuel_occasions(p.total_distance, cfg.range_km);
        load[a.node] += it->second->trip.flow_per_day * cfg.fuel_per_km * p.total_distance / l * a.value;
    }
    return load;
}

std::vector<std::string> verify_solution(const SitingSolution& solution, const FrlmModel& model)
{
    constexpr double tol = 1e-6;
    std::vector<std::string> issues;
    const lp::LinearProgram& lp = model.lp;
    std::vector<double> x(lp.num_variables(), 0.0);

    const std::set<std::string> open(solution.stations.begin(), solution.stations.end());
    for (const std::string& s : open) {
        auto it = std::find(model.candidates.begin(), model.candidates.end(), s);
        if (it == model.candidates.end()) {
            issues.push_back("station '" + s + "' is not a candidate node");
            continue;
        }
        x[model.z[static_cast<std::size_t>(it - model.candidates.begin())].index] = 1.0;
    }
    for (const Allocation& a : solution.allocations) {
        auto id = lp.find_variable(x_name(a.node, a.trip_id));
        if (!id) {
            issues.push_back("allocation of trip '" + a.trip_id + "' to '" + a.node + "' has no model variable");
            continue;
        }
        x[id->index] = a.value;
        if (a.value < -tol || a.value > 1.0 + tol) {
            std::ostringstream s;
            s << "allocation " << x_name(a.node, a.trip_id) << " = " << a.value << " outside [0,1]";
            issues.push_back(s.str());
        }
    }
    if (solution.objective != static_cast<int>(open.size())) {
        issues.push_back("objective does not equal the number of open stations");
    }

    for (const lp::Constraint& row : lp.constraints()) {
        double act = 0.0;
        for (const lp::Term& t : row.terms) act += t.coef * x[t.var.index];
        double viol = 0.0;
        switch (row.sense) {
        case lp::Sense::LessEqual: viol = act - row.rhs; break;
        case lp::Sense::GreaterEqual: viol = row.rhs - act; break;
        case lp::Sense::Equal: viol = std::abs(act - row.rhs); break;
        }
        if (viol > tol) {
            std::ostringstream s;
            s << row.tag << " violation: " << row.name << " off by " << viol;
            issues.push_back(s.str());
        }
    }
    return issues;
}

}  // namespace h2g::frlm
