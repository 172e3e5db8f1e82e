#include "h2grid/error.hpp"
#include "h2grid/lp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace h2g::lp {
namespace {

struct Node {
    double bound = 0.0;
    std::size_t id = 0;
    std::vector<double> lower;  // per integer variable
    std::vector<double> upper;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const
    {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.id > b.id;
    }
};

bool objective_is_integral(const LinearProgram& lp)
{
    for (const Variable& v : lp.variables()) {
        if (v.cost == 0.0) continue;
        if (!v.integer || std::round(v.cost) != v.cost) return false;
    }
    return std::round(lp.objective_offset()) == lp.objective_offset();
}

}  // namespace

Solution solve_milp(const LinearProgram& lp, const SolverOptions& options)
{
    if (!lp.has_integers()) return solve_lp(lp, options);
    if (auto issues = lp.validate(); !issues.empty()) {
        throw Error(ErrorCode::InconsistentInput, "malformed linear program: " + issues.front(),
                    issues);
    }

    std::vector<std::size_t> ints;
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
        if (lp.variables()[j].integer) ints.push_back(j);
    }
    const bool integral_obj = objective_is_integral(lp);
    const double itol = kTolerances.integrality;

    LinearProgram work = lp;
    auto apply = [&](const Node& node) {
        for (std::size_t k = 0; k < ints.size(); ++k) {
            work.set_bounds(VarId{ints[k]}, node.lower[k], node.upper[k]);
        }
    };

    Node root;
    root.lower.resize(ints.size());
    root.upper.resize(ints.size());
    for (std::size_t k = 0; k < ints.size(); ++k) {
        root.lower[k] = std::ceil(lp.variables()[ints[k]].lower - itol);
        root.upper[k] = std::floor(lp.variables()[ints[k]].upper + itol);
    }

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::size_t next_id = 0;
    root.id = next_id++;
    root.bound = -kInf;
    open.push(root);

    bool have_incumbent = false;
    double incumbent_obj = kInf;
    std::vector<double> incumbent;
    std::size_t nodes = 0;
    std::size_t iterations = 0;
    Solution root_relaxation;

    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        if (have_incumbent && node.bound >= incumbent_obj - 1e-9 * std::max(1.0, std::abs(incumbent_obj))) {
            continue;
        }
        if (nodes >= options.max_nodes) {
            Solution s;
            s.status = Status::IterationLimit;
            s.nodes = nodes;
            return s;
        }
        bool bad_box = false;
        for (std::size_t k = 0; k < ints.size(); ++k) {
            if (node.lower[k] > node.upper[k]) bad_box = true;
        }
        if (bad_box) continue;

        apply(node);
        Solution relax = solve_lp(work, options);
        ++nodes;
        iterations += relax.iterations;
        if (nodes == 1) root_relaxation = relax;
        if (relax.status == Status::Unbounded && nodes == 1) {
            relax.nodes = nodes;
            return relax;
        }
        if (relax.status == Status::IterationLimit) {
            relax.nodes = nodes;
            return relax;
        }
        if (!relax.optimal()) continue;

        double bound = relax.objective;
        if (integral_obj) bound = std::ceil(bound - itol);
        if (have_incumbent && bound >= incumbent_obj - 1e-9 * std::max(1.0, std::abs(incumbent_obj))) {
            continue;
        }

        // Most fractional integer variable, lowest index on ties.
        std::size_t branch = ints.size();
        double best_score = -1.0;
        for (std::size_t k = 0; k < ints.size(); ++k) {
            const double v = relax.primal[ints[k]];
            const double frac = v - std::floor(v);
            if (frac <= itol || frac >= 1.0 - itol) continue;
            const double score = 0.5 - std::abs(frac - 0.5);
            if (score > best_score) {
                best_score = score;
                branch = k;
            }
        }

        if (branch == ints.size()) {
            if (nodes == 1) {
                relax.nodes = 1;
                return relax;
            }
            if (!have_incumbent || relax.objective < incumbent_obj) {
                have_incumbent = true;
                incumbent_obj = relax.objective;
                incumbent = relax.primal;
            }
            continue;
        }

        const double v = relax.primal[ints[branch]];
        Node down = node;
        down.upper[branch] = std::floor(v);
        down.bound = bound;
        down.id = next_id++;
        Node up = node;
        up.lower[branch] = std::ceil(v);
        up.bound = bound;
        up.id = next_id++;
        open.push(std::move(down));
        open.push(std::move(up));
    }

    if (!have_incumbent) {
        Solution s;
        s.status = Status::Infeasible;
        s.nodes = nodes;
        s.iterations = iterations;
        s.infeasible_rows = root_relaxation.infeasible_rows;
        return s;
    }

    // Re-solve with integers fixed to recover duals for the continuous part.
    for (std::size_t k = 0; k < ints.size(); ++k) {
        const double v = std::round(incumbent[ints[k]]);
        work.set_bounds(VarId{ints[k]}, v, v);
    }
    Solution fixed = solve_lp(work, options);
    if (!fixed.optimal()) {
        throw Error(ErrorCode::Internal, "fixed-integer re-solve lost feasibility");
    }
    fixed.nodes = nodes;
    fixed.iterations += iterations;
    return fixed;
}

double dual_objective(const LinearProgram& lp, const Solution& sol)
{
    const auto& rows = lp.constraints();
    const auto& vars = lp.variables();
    std::vector<double> reduced(vars.size());
    for (std::size_t j = 0; j < vars.size(); ++j) reduced[j] = vars[j].cost;
    double value = lp.objective_offset();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double y = sol.dual[i];
        value += rows[i].rhs * y;
        for (const Term& t : rows[i].terms) reduced[t.var.index] -= t.coef * y;
    }
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const double d = reduced[j];
        if (d > 0.0 && std::isfinite(vars[j].lower)) {
            value += d * vars[j].lower;
        } else if (d < 0.0 && std::isfinite(vars[j].upper)) {
            value += d * vars[j].upper;
        } else {
            value += d * sol.primal[j];
        }
    }
    return value;
}

CheckReport check_solution(const LinearProgram& lp, const Solution& sol, const Tolerances& tol)
{
    CheckReport report;
    const auto& rows = lp.constraints();
    const auto& vars = lp.variables();
    auto issue = [&](const std::string& msg) { report.issues.push_back(msg); };

    if (!sol.optimal()) {
        issue(std::string("solution status is ") + std::string(to_string(sol.status)));
        return report;
    }
    if (sol.primal.size() != vars.size()) {
        issue("primal vector size does not match variable count");
        return report;
    }

    double obj = lp.objective_offset();
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const double x = sol.primal[j];
        obj += vars[j].cost * x;
        const double viol = std::max({0.0, vars[j].lower - x, x - vars[j].upper});
        report.max_bound_violation = std::max(report.max_bound_violation, viol);
        if (viol > tol.feasibility * std::max(1.0, std::abs(x))) {
            std::ostringstream s;
            s << "bound violation on '" << vars[j].name << "': " << viol;
            issue(s.str());
        }
        if (vars[j].integer && std::abs(x - std::round(x)) > tol.integrality) {
            issue("integrality violation on '" + vars[j].name + "'");
        }
    }
    report.primal_objective = obj;
    if (std::abs(obj - sol.objective) > tol.duality_gap * std::max(1.0, std::abs(obj))) {
        issue("reported objective differs from recomputed objective");
    }

    std::vector<double> activity(rows.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double a = 0.0;
        for (const Term& t : rows[i].terms) a += t.coef * sol.primal[t.var.index];
        activity[i] = a;
        double viol = 0.0;
        switch (rows[i].sense) {
        case Sense::LessEqual: viol = std::max(0.0, a - rows[i].rhs); break;
        case Sense::GreaterEqual: viol = std::max(0.0, rows[i].rhs - a); break;
        case Sense::Equal: viol = std::abs(a - rows[i].rhs); break;
        }
        report.max_row_violation = std::max(report.max_row_violation, viol);
        if (viol > tol.feasibility * std::max(1.0, std::abs(rows[i].rhs))) {
            std::ostringstream s;
            s << "row '" << rows[i].name << "' violated by " << viol;
            issue(s.str());
        }
    }

    if (lp.has_integers() || sol.dual.size() != rows.size()) return report;

    const double scale = std::max(1.0, std::abs(obj));
    double ymax = 1.0;
    for (double y : sol.dual) ymax = std::max(ymax, std::abs(y));
    const double sign_tol = tol.complementarity * ymax;

    std::vector<double> reduced(vars.size());
    for (std::size_t j = 0; j < vars.size(); ++j) reduced[j] = vars[j].cost;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double y = sol.dual[i];
        for (const Term& t : rows[i].terms) reduced[t.var.index] -= t.coef * y;
        const bool wrong_sign = (rows[i].sense == Sense::GreaterEqual && y < -sign_tol) ||
                                (rows[i].sense == Sense::LessEqual && y > sign_tol);
        if (wrong_sign) issue("dual sign violation on row '" + rows[i].name + "'");
        const double slack = rows[i].rhs - activity[i];
        const double cs = std::abs(y * slack) / scale;
        report.max_complementarity = std::max(report.max_complementarity, cs);
        if (cs > tol.complementarity) {
            issue("complementary slackness violated on row '" + rows[i].name + "'");
        }
    }
    double cmax = 1.0;
    for (const Variable& v : vars) cmax = std::max(cmax, std::abs(v.cost));
    const double dtol = tol.complementarity * std::max(cmax, ymax);
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const double d = reduced[j];
        const double x = sol.primal[j];
        double gap = 0.0;
        if (d > dtol) {
            if (!std::isfinite(vars[j].lower)) {
                issue("dual infeasible reduced cost on '" + vars[j].name + "'");
                continue;
            }
            gap = d * (x - vars[j].lower);
        } else if (d < -dtol) {
            if (!std::isfinite(vars[j].upper)) {
                issue("dual infeasible reduced cost on '" + vars[j].name + "'");
                continue;
            }
            gap = d * (x - vars[j].upper);
        }
        const double cs = std::abs(gap) / scale;
        report.max_complementarity = std::max(report.max_complementarity, cs);
        if (cs > tol.complementarity) {
            issue("complementary slackness violated on variable '" + vars[j].name + "'");
        }
    }

    report.dual_objective = dual_objective(lp, sol);
    report.relative_gap = std::abs(obj - report.dual_objective) / scale;
    if (report.relative_gap > tol.duality_gap) {
        std::ostringstream s;
        s << "duality gap " << report.relative_gap << " exceeds tolerance";
        issue(s.str());
    }
    return report;
}

}  // namespace h2g::lp
