#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace h2g::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tolerances shared by every check in the toolkit.
struct Tolerances {
    double feasibility = 1e-7;   // absolute, on rows and bounds
    double duality_gap = 1e-6;   // relative, |primal - dual| / max(1, |primal|)
    double integrality = 1e-6;
    double complementarity = 1e-6;
};
inline constexpr Tolerances kTolerances{};

enum class Sense { LessEqual, Equal, GreaterEqual };
enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

std::string_view to_string(Status status) noexcept;
std::string_view to_string(Sense sense) noexcept;

struct VarId {
    std::size_t index = 0;
    friend bool operator==(VarId, VarId) = default;
};
struct RowId {
    std::size_t index = 0;
    friend bool operator==(RowId, RowId) = default;
};

struct Term {
    VarId var;
    double coef = 0.0;
};

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
    double cost = 0.0;
    bool integer = false;
};

struct Constraint {
    std::string name;
    std::string tag;
    std::vector<Term> terms;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

/// A minimization problem  min c'x + offset  s.t. rows and variable bounds.
///
/// Row and variable names must be unique; model builders look rows up by
/// name or tag, never by position.
class LinearProgram {
public:
    VarId add_variable(std::string name, double lower, double upper, double cost = 0.0,
                       bool integer = false);
    RowId add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs,
                         std::string tag = {});

    void set_bounds(VarId v, double lower, double upper);
    void set_cost(VarId v, double cost) { variables_.at(v.index).cost = cost; }
    void add_objective_offset(double value) { offset_ += value; }

    const std::vector<Variable>& variables() const noexcept { return variables_; }
    const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    const Variable& variable(VarId v) const { return variables_.at(v.index); }
    const Constraint& constraint(RowId r) const { return constraints_.at(r.index); }
    double objective_offset() const noexcept { return offset_; }
    std::size_t num_variables() const noexcept { return variables_.size(); }
    std::size_t num_constraints() const noexcept { return constraints_.size(); }
    bool has_integers() const noexcept;

    std::optional<VarId> find_variable(std::string_view name) const;
    std::optional<RowId> find_constraint(std::string_view name) const;
    std::vector<RowId> rows_with_tag(std::string_view tag) const;

    /// Empty when well-formed; otherwise one message per problem found.
    std::vector<std::string> validate() const;

private:
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    std::unordered_map<std::string, std::size_t> var_index_;
    std::unordered_map<std::string, std::size_t> row_index_;
    double offset_ = 0.0;
};

/// Result of a solve. Duals follow the sensitivity convention
/// dual_i = d(objective)/d(rhs_i), so for a minimization a >= row has a
/// non-negative dual and a <= row a non-positive one.
struct Solution {
    Status status = Status::Infeasible;
    double objective = 0.0;
    std::vector<double> primal;
    std::vector<double> dual;
    std::vector<double> reduced_cost;
    std::size_t iterations = 0;
    std::size_t nodes = 0;
    /// Rows still violated at the end of phase one (infeasible LPs only).
    std::vector<std::string> infeasible_rows;

    bool optimal() const noexcept { return status == Status::Optimal; }
    double value(VarId v) const { return primal.at(v.index); }
    double dual_value(RowId r) const { return dual.at(r.index); }
};

struct SolverOptions {
    std::size_t max_iterations = 0;  // 0 picks a size-dependent default
    std::size_t refactor_interval = 100;
    std::size_t max_nodes = 200000;  // branch-and-bound cap
};

Solution solve_lp(const LinearProgram& lp, const SolverOptions& options = {});

/// Exact branch-and-bound on the LP relaxation. Branches on the most
/// fractional variable (ties: lowest index); best-bound node order.
Solution solve_milp(const LinearProgram& lp, const SolverOptions& options = {});

/// Dispatches to solve_lp or solve_milp depending on integrality flags.
Solution solve(const LinearProgram& lp, const SolverOptions& options = {});

struct CheckReport {
    std::vector<std::string> issues;
    double max_row_violation = 0.0;
    double max_bound_violation = 0.0;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double relative_gap = 0.0;
    double max_complementarity = 0.0;

    bool ok() const noexcept { return issues.empty(); }
};

/// Independent re-verification: primal feasibility for every solution and,
/// for continuous problems with duals, dual feasibility, complementary
/// slackness and the duality gap.
CheckReport check_solution(const LinearProgram& lp, const Solution& sol,
                           const Tolerances& tol = kTolerances);

/// Dual objective b'y + sum of reduced-cost bound terms + offset.
double dual_objective(const LinearProgram& lp, const Solution& sol);

/// CPLEX-style LP text export for cross-checking with external solvers.
void write_lp_file(const LinearProgram& lp, std::ostream& out);

}  // namespace h2g::lp
