#include "h2grid/error.hpp"
#include "h2grid/lp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace h2g::lp {

std::string_view to_string(Status status) noexcept
{
    switch (status) {
    case Status::Optimal: return "OPTIMAL";
    case Status::Infeasible: return "INFEASIBLE";
    case Status::Unbounded: return "UNBOUNDED";
    case Status::IterationLimit: return "ITERATION_LIMIT";
    }
    return "UNKNOWN";
}

std::string_view to_string(Sense sense) noexcept
{
    switch (sense) {
    case Sense::LessEqual: return "<=";
    case Sense::Equal: return "=";
    case Sense::GreaterEqual: return ">=";
    }
    return "?";
}

VarId LinearProgram::add_variable(std::string name, double lower, double upper, double cost,
                                  bool integer)
{
    if (var_index_.count(name) != 0) {
        throw Error(ErrorCode::InconsistentInput, "duplicate variable name '" + name + "'");
    }
    VarId id{variables_.size()};
    var_index_.emplace(name, id.index);
    variables_.push_back(Variable{std::move(name), lower, upper, cost, integer});
    return id;
}

RowId LinearProgram::add_constraint(std::string name, std::vector<Term> terms, Sense sense,
                                    double rhs, std::string tag)
{
    if (row_index_.count(name) != 0) {
        throw Error(ErrorCode::InconsistentInput, "duplicate constraint name '" + name + "'");
    }
    for (const Term& t : terms) {
        if (t.var.index >= variables_.size()) {
            throw Error(ErrorCode::InconsistentInput,
                        "constraint '" + name + "' references an undeclared variable");
        }
    }
    // Merge repeated variables so every column holds one coefficient per row.
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.var.index < b.var.index; });
    std::vector<Term> merged;
    merged.reserve(terms.size());
    for (const Term& t : terms) {
        if (!merged.empty() && merged.back().var == t.var) {
            merged.back().coef += t.coef;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });

    RowId id{constraints_.size()};
    row_index_.emplace(name, id.index);
    constraints_.push_back(Constraint{std::move(name), std::move(tag), std::move(merged), sense, rhs});
    return id;
}

void LinearProgram::set_bounds(VarId v, double lower, double upper)
{
    Variable& var = variables_.at(v.index);
    var.lower = lower;
    var.upper = upper;
}

bool LinearProgram::has_integers() const noexcept
{
    return std::any_of(variables_.begin(), variables_.end(),
                       [](const Variable& v) { return v.integer; });
}

std::optional<VarId> LinearProgram::find_variable(std::string_view name) const
{
    auto it = var_index_.find(std::string(name));
    if (it == var_index_.end()) return std::nullopt;
    return VarId{it->second};
}

std::optional<RowId> LinearProgram::find_constraint(std::string_view name) const
{
    auto it = row_index_.find(std::string(name));
    if (it == row_index_.end()) return std::nullopt;
    return RowId{it->second};
}

std::vector<RowId> LinearProgram::rows_with_tag(std::string_view tag) const
{
    std::vector<RowId> rows;
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
        if (constraints_[i].tag == tag) rows.push_back(RowId{i});
    }
    return rows;
}

std::vector<std::string> LinearProgram::validate() const
{
    std::vector<std::string> issues;
    for (const Variable& v : variables_) {
        if (std::isnan(v.lower) || std::isnan(v.upper) || !std::isfinite(v.cost)) {
            issues.push_back("variable '" + v.name + "' has a non-finite cost or NaN bound");
        }
        if (v.lower > v.upper) {
            issues.push_back("variable '" + v.name + "' has lower bound above upper bound");
        }
        if (v.integer && (!std::isfinite(v.lower) || !std::isfinite(v.upper))) {
            issues.push_back("integer variable '" + v.name + "' must be bounded");
        }
    }
    for (const Constraint& c : constraints_) {
        if (!std::isfinite(c.rhs)) {
            issues.push_back("constraint '" + c.name + "' has a non-finite right-hand side");
        }
        for (const Term& t : c.terms) {
            if (!std::isfinite(t.coef)) {
                issues.push_back("constraint '" + c.name + "' has a non-finite coefficient");
                break;
            }
        }
    }
    return issues;
}

namespace {

std::string lp_name(const std::string& raw)
{
    std::string out;
    out.reserve(raw.size());
    for (char ch : raw) {
        const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.';
        out.push_back(ok ? ch : '_');
    }
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front())) || out.front() == '.') {
        out.insert(out.begin(), 'v');
    }
    return out;
}

void write_number(std::ostream& out, double v)
{
    std::ostringstream s;
    s.precision(17);
    s << v;
    out << s.str();
}

}  // namespace

void write_lp_file(const LinearProgram& lp, std::ostream& out)
{
    const auto& vars = lp.variables();
    out << "\\ h2grid export: " << vars.size() << " variables, " << lp.num_constraints()
        << " constraints\n";
    out << "Minimize\n obj:";
    bool any = false;
    for (const Variable& v : vars) {
        if (v.cost == 0.0) continue;
        out << (v.cost < 0 ? " - " : " + ");
        write_number(out, std::abs(v.cost));
        out << ' ' << lp_name(v.name);
        any = true;
    }
    if (lp.objective_offset() != 0.0) {
        out << (lp.objective_offset() < 0 ? " - " : " + ");
        write_number(out, std::abs(lp.objective_offset()));
        any = true;
    }
    if (!any) out << " 0 " << (vars.empty() ? "dummy" : lp_name(vars.front().name));
    out << "\nSubject To\n";
    for (const Constraint& c : lp.constraints()) {
        out << ' ' << lp_name(c.name) << ':';
        if (c.terms.empty()) out << " 0 " << (vars.empty() ? "dummy" : lp_name(vars.front().name));
        for (const Term& t : c.terms) {
            out << (t.coef < 0 ? " - " : " + ");
            write_number(out, std::abs(t.coef));
            out << ' ' << lp_name(vars[t.var.index].name);
        }
        out << ' ' << to_string(c.sense) << ' ';
        write_number(out, c.rhs);
        out << '\n';
    }
    out << "Bounds\n";
    for (const Variable& v : vars) {
        const std::string n = lp_name(v.name);
        if (std::isinf(v.lower) && std::isinf(v.upper)) {
            out << ' ' << n << " free\n";
            continue;
        }
        out << ' ';
        if (std::isinf(v.lower)) {
            out << "-inf";
        } else {
            write_number(out, v.lower);
        }
        out << " <= " << n << " <= ";
        if (std::isinf(v.upper)) {
            out << "+inf";
        } else {
            write_number(out, v.upper);
        }
        out << '\n';
    }
    bool header = false;
    for (const Variable& v : vars) {
        if (!v.integer) continue;
        if (!header) {
            out << "Generals\n";
            header = true;
        }
        out << ' ' << lp_name(v.name) << '\n';
    }
    out << "End\n";
}

}  // namespace h2g::lp
