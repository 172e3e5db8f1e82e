// Bounded-variable revised primal simplex with an explicit basis inverse.
//
// Every row i becomes  a_i x + s_i = b_i  with a slack whose bounds encode the
// sense. Rows whose slack cannot absorb the starting residual get an
// artificial column, driven to zero in phase one.

#include "h2grid/error.hpp"
#include "h2grid/lp.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace h2g::lp {
namespace {

enum class VarState : unsigned char { Basic, AtLower, AtUpper, FreeZero };

constexpr double kPivotTol = 1e-9;
constexpr std::size_t kDegenerateLimit = 40;

class BoundedSimplex {
public:
    BoundedSimplex(const LinearProgram& lp, const SolverOptions& options)
        : lp_(lp), options_(options), n_(lp.num_variables()), m_(lp.num_constraints())
    {
        ncols_ = n_ + 2 * m_;
        build_columns();
    }

    Solution run();

private:
    enum class Outcome { Optimal, Unbounded, IterationLimit };

    void build_columns();
    bool initialize();
    Outcome iterate(bool phase_one);
    void refactor();
    void compute_duals(Eigen::VectorXd& y) const;
    double dot_column(std::size_t j, const Eigen::VectorXd& y) const;
    void column(std::size_t j, Eigen::VectorXd& alpha) const;
    bool is_artificial(std::size_t j) const { return j >= n_ + m_; }
    bool drive_out_artificials();
    Solution package(Status status) const;

    const LinearProgram& lp_;
    SolverOptions options_;
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::size_t ncols_ = 0;

    std::vector<std::size_t> col_start_;
    std::vector<std::size_t> row_of_;
    std::vector<double> val_;
    std::vector<double> art_sign_;
    Eigen::VectorXd b_;

    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<double> cost_;
    std::vector<double> x_;
    std::vector<VarState> state_;
    std::vector<std::size_t> basis_;
    Eigen::MatrixXd binv_;

    double ftol_ = 1e-9;
    std::size_t iterations_ = 0;
    std::size_t max_iterations_ = 0;
    std::vector<std::string> infeasible_rows_;
};

void BoundedSimplex::build_columns()
{
    const auto& vars = lp_.variables();
    const auto& rows = lp_.constraints();

    std::vector<std::size_t> counts(n_, 0);
    for (const Constraint& c : rows) {
        for (const Term& t : c.terms) ++counts[t.var.index];
    }
    col_start_.assign(n_ + 1, 0);
    for (std::size_t j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + counts[j];
    row_of_.resize(col_start_[n_]);
    val_.resize(col_start_[n_]);
    std::vector<std::size_t> fill(col_start_.begin(), col_start_.end() - 1);
    for (std::size_t i = 0; i < m_; ++i) {
        for (const Term& t : rows[i].terms) {
            const std::size_t k = fill[t.var.index]++;
            row_of_[k] = i;
            val_[k] = t.coef;
        }
    }

    lower_.assign(ncols_, 0.0);
    upper_.assign(ncols_, 0.0);
    cost_.assign(ncols_, 0.0);
    x_.assign(ncols_, 0.0);
    state_.assign(ncols_, VarState::AtLower);
    art_sign_.assign(m_, 1.0);
    b_.resize(static_cast<Eigen::Index>(m_));

    double bscale = 1.0;
    for (std::size_t j = 0; j < n_; ++j) {
        lower_[j] = vars[j].lower;
        upper_[j] = vars[j].upper;
        cost_[j] = vars[j].cost;
        if (std::isfinite(lower_[j])) bscale = std::max(bscale, std::abs(lower_[j]));
        if (std::isfinite(upper_[j])) bscale = std::max(bscale, std::abs(upper_[j]));
    }
    for (std::size_t i = 0; i < m_; ++i) {
        b_(static_cast<Eigen::Index>(i)) = rows[i].rhs;
        bscale = std::max(bscale, std::abs(rows[i].rhs));
        const std::size_t s = n_ + i;
        switch (rows[i].sense) {
        case Sense::LessEqual: lower_[s] = 0.0; upper_[s] = kInf; break;
        case Sense::GreaterEqual: lower_[s] = -kInf; upper_[s] = 0.0; break;
        case Sense::Equal: lower_[s] = 0.0; upper_[s] = 0.0; break;
        }
    }
    ftol_ = 1e-10 * bscale;
    max_iterations_ = options_.max_iterations != 0 ? options_.max_iterations
                                                    : 200 * (n_ + m_) + 1000;
}

double BoundedSimplex::dot_column(std::size_t j, const Eigen::VectorXd& y) const
{
    if (j < n_) {
        double acc = 0.0;
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
            acc += val_[k] * y(static_cast<Eigen::Index>(row_of_[k]));
        }
        return acc;
    }
    if (j < n_ + m_) return y(static_cast<Eigen::Index>(j - n_));
    const std::size_t i = j - n_ - m_;
    return art_sign_[i] * y(static_cast<Eigen::Index>(i));
}

void BoundedSimplex::column(std::size_t j, Eigen::VectorXd& alpha) const
{
    alpha.setZero(static_cast<Eigen::Index>(m_));
    if (j < n_) {
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
            alpha.noalias() += val_[k] * binv_.col(static_cast<Eigen::Index>(row_of_[k]));
        }
    } else if (j < n_ + m_) {
        alpha = binv_.col(static_cast<Eigen::Index>(j - n_));
    } else {
        const std::size_t i = j - n_ - m_;
        alpha = art_sign_[i] * binv_.col(static_cast<Eigen::Index>(i));
    }
}

bool BoundedSimplex::initialize()
{
    for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (lower_[j] > upper_[j]) return false;
    }
    // Structural columns start nonbasic at a finite bound.
    for (std::size_t j = 0; j < n_; ++j) {
        if (std::isfinite(lower_[j])) {
            x_[j] = lower_[j];
            state_[j] = VarState::AtLower;
        } else if (std::isfinite(upper_[j])) {
            x_[j] = upper_[j];
            state_[j] = VarState::AtUpper;
        } else {
            x_[j] = 0.0;
            state_[j] = VarState::FreeZero;
        }
    }
    Eigen::VectorXd residual = b_;
    for (std::size_t j = 0; j < n_; ++j) {
        if (x_[j] == 0.0) continue;
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
            residual(static_cast<Eigen::Index>(row_of_[k])) -= val_[k] * x_[j];
        }
    }

    basis_.assign(m_, 0);
    binv_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
    for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t s = n_ + i;
        const std::size_t a = n_ + m_ + i;
        const double r = residual(static_cast<Eigen::Index>(i));
        lower_[a] = 0.0;
        upper_[a] = 0.0;
        state_[a] = VarState::AtLower;
        x_[a] = 0.0;
        if (r >= lower_[s] && r <= upper_[s]) {
            basis_[i] = s;
            state_[s] = VarState::Basic;
            x_[s] = r;
            binv_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
            continue;
        }
        const bool below = r < lower_[s];
        const double v = below ? lower_[s] : upper_[s];
        x_[s] = v;
        state_[s] = (below || lower_[s] == upper_[s]) ? VarState::AtLower : VarState::AtUpper;
        art_sign_[i] = (r - v) >= 0.0 ? 1.0 : -1.0;
        upper_[a] = kInf;
        x_[a] = std::abs(r - v);
        state_[a] = VarState::Basic;
        basis_[i] = a;
        binv_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = art_sign_[i];
    }
    return true;
}

void BoundedSimplex::refactor()
{
    if (m_ == 0) return;
    const auto mm = static_cast<Eigen::Index>(m_);
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(2 * m_);
    for (std::size_t r = 0; r < m_; ++r) {
        const std::size_t j = basis_[r];
        const auto rc = static_cast<Eigen::Index>(r);
        if (j < n_) {
            for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
                entries.emplace_back(static_cast<Eigen::Index>(row_of_[k]), rc, val_[k]);
            }
        } else if (j < n_ + m_) {
            entries.emplace_back(static_cast<Eigen::Index>(j - n_), rc, 1.0);
        } else {
            const std::size_t i = j - n_ - m_;
            entries.emplace_back(static_cast<Eigen::Index>(i), rc, art_sign_[i]);
        }
    }
    Eigen::SparseMatrix<double> basis_matrix(mm, mm);
    basis_matrix.setFromTriplets(entries.begin(), entries.end());
    basis_matrix.makeCompressed();
    // Bases are mostly slack columns, so a sparse factorization is far
    // cheaper than a dense one. Dense LU remains as a fallback.
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(basis_matrix);
    if (lu.info() == Eigen::Success) {
        binv_ = lu.solve(Eigen::MatrixXd::Identity(mm, mm));
    } else {
        binv_ = Eigen::MatrixXd(basis_matrix).partialPivLu().inverse();
    }

    Eigen::VectorXd rhs = b_;
    for (std::size_t j = 0; j < ncols_; ++j) {
        if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
        if (j < n_) {
            for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
                rhs(static_cast<Eigen::Index>(row_of_[k])) -= val_[k] * x_[j];
            }
        } else if (j < n_ + m_) {
            rhs(static_cast<Eigen::Index>(j - n_)) -= x_[j];
        } else {
            const std::size_t i = j - n_ - m_;
            rhs(static_cast<Eigen::Index>(i)) -= art_sign_[i] * x_[j];
        }
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (std::size_t r = 0; r < m_; ++r) x_[basis_[r]] = xb(static_cast<Eigen::Index>(r));
}

void BoundedSimplex::compute_duals(Eigen::VectorXd& y) const
{
    Eigen::VectorXd cb(static_cast<Eigen::Index>(m_));
    for (std::size_t r = 0; r < m_; ++r) cb(static_cast<Eigen::Index>(r)) = cost_[basis_[r]];
    y.noalias() = binv_.transpose() * cb;
}

BoundedSimplex::Outcome BoundedSimplex::iterate(bool phase_one)
{
    double cscale = 1.0;
    for (std::size_t j = 0; j < ncols_; ++j) cscale = std::max(cscale, std::abs(cost_[j]));
    const double dtol = 1e-9 * cscale;

    Eigen::VectorXd y;
    Eigen::VectorXd alpha;
    std::size_t degenerate_run = 0;
    bool bland = false;
    std::size_t since_refactor = 0;

    while (true) {
        if (iterations_ >= max_iterations_) return Outcome::IterationLimit;
        if (since_refactor >= options_.refactor_interval) {
            refactor();
            since_refactor = 0;
        }
        compute_duals(y);

        // Pricing: Dantzig, lowest index on ties; Bland's rule under stalling.
        std::size_t entering = ncols_;
        double best = 0.0;
        double entering_d = 0.0;
        for (std::size_t j = 0; j < ncols_; ++j) {
            const VarState st = state_[j];
            if (st == VarState::Basic) continue;
            if (lower_[j] == upper_[j]) continue;
            if (!phase_one && is_artificial(j)) continue;
            const double d = cost_[j] - dot_column(j, y);
            bool eligible = false;
            switch (st) {
            case VarState::AtLower: eligible = d < -dtol; break;
            case VarState::AtUpper: eligible = d > dtol; break;
            case VarState::FreeZero: eligible = std::abs(d) > dtol; break;
            case VarState::Basic: break;
            }
            if (!eligible) continue;
            if (bland) {
                entering = j;
                entering_d = d;
                break;
            }
            if (std::abs(d) > best) {
                best = std::abs(d);
                entering = j;
                entering_d = d;
            }
        }
        if (entering == ncols_) return Outcome::Optimal;

        const std::size_t q = entering;
        const double dir = entering_d < 0.0 ? 1.0 : -1.0;
        column(q, alpha);

        // Harris two-pass ratio test.
        double relaxed = kInf;
        for (std::size_t i = 0; i < m_; ++i) {
            const double a = alpha(static_cast<Eigen::Index>(i));
            if (std::abs(a) <= kPivotTol) continue;
            const double delta = dir * a;
            const std::size_t bj = basis_[i];
            if (delta > 0.0 && std::isfinite(lower_[bj])) {
                relaxed = std::min(relaxed, (x_[bj] - lower_[bj] + ftol_) / delta);
            } else if (delta < 0.0 && std::isfinite(upper_[bj])) {
                relaxed = std::min(relaxed, (upper_[bj] - x_[bj] + ftol_) / -delta);
            }
        }
        const double flip = (std::isfinite(lower_[q]) && std::isfinite(upper_[q]))
                                ? upper_[q] - lower_[q]
                                : kInf;
        if (std::isinf(relaxed) && std::isinf(flip)) return Outcome::Unbounded;

        std::size_t leave = m_;
        double step = 0.0;
        if (flip <= relaxed) {
            step = flip;
        } else {
            double best_pivot = 0.0;
            double best_ratio = kInf;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = alpha(static_cast<Eigen::Index>(i));
                if (std::abs(a) <= kPivotTol) continue;
                const double delta = dir * a;
                const std::size_t bj = basis_[i];
                double ratio = kInf;
                if (delta > 0.0 && std::isfinite(lower_[bj])) {
                    ratio = (x_[bj] - lower_[bj]) / delta;
                } else if (delta < 0.0 && std::isfinite(upper_[bj])) {
                    ratio = (upper_[bj] - x_[bj]) / -delta;
                }
                if (ratio > relaxed) continue;
                bool take = false;
                if (bland) {
                    take = leave == m_ || ratio < best_ratio ||
                           (ratio == best_ratio && bj < basis_[leave]);
                } else {
                    const double mag = std::abs(a);
                    take = leave == m_ || mag > best_pivot ||
                           (mag == best_pivot && bj < basis_[leave]);
                }
                if (take) {
                    leave = i;
                    best_pivot = std::abs(a);
                    best_ratio = ratio;
                }
            }
            if (leave == m_) return Outcome::Unbounded;
            step = std::max(0.0, best_ratio);
        }

        ++iterations_;
        ++since_refactor;
        if (step <= 1e-12) {
            if (++degenerate_run > kDegenerateLimit) bland = true;
        } else {
            degenerate_run = 0;
            bland = false;
        }

        for (std::size_t i = 0; i < m_; ++i) {
            x_[basis_[i]] -= step * dir * alpha(static_cast<Eigen::Index>(i));
        }
        x_[q] += dir * step;

        if (leave == m_) {
            if (dir > 0) {
                x_[q] = upper_[q];
                state_[q] = VarState::AtUpper;
            } else {
                x_[q] = lower_[q];
                state_[q] = VarState::AtLower;
            }
            continue;
        }

        const std::size_t out = basis_[leave];
        const double delta_out = dir * alpha(static_cast<Eigen::Index>(leave));
        if (delta_out > 0.0) {
            x_[out] = lower_[out];
            state_[out] = VarState::AtLower;
        } else {
            x_[out] = upper_[out];
            state_[out] = lower_[out] == upper_[out] ? VarState::AtLower : VarState::AtUpper;
        }
        basis_[leave] = q;
        state_[q] = VarState::Basic;

        const auto r = static_cast<Eigen::Index>(leave);
        const double pivot = alpha(r);
        const Eigen::RowVectorXd pivot_row = binv_.row(r) / pivot;
        binv_.noalias() -= alpha * pivot_row;
        binv_.row(r) = pivot_row;
    }
}

bool BoundedSimplex::drive_out_artificials()
{
    bool changed = false;
    Eigen::VectorXd alpha;
    for (std::size_t r = 0; r < m_; ++r) {
        const std::size_t a = basis_[r];
        if (!is_artificial(a)) continue;
        const auto rr = static_cast<Eigen::Index>(r);
        std::size_t pick = ncols_;
        double pick_mag = 1e-7;
        for (std::size_t j = 0; j < n_ + m_; ++j) {
            if (state_[j] == VarState::Basic) continue;
            double v = 0.0;
            if (j < n_) {
                for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
                    v += val_[k] * binv_(rr, static_cast<Eigen::Index>(row_of_[k]));
                }
            } else {
                v = binv_(rr, static_cast<Eigen::Index>(j - n_));
            }
            if (std::abs(v) > pick_mag) {
                pick_mag = std::abs(v);
                pick = j;
            }
        }
        if (pick == ncols_) continue;  // redundant row; artificial stays basic at zero
        column(pick, alpha);
        const double pivot = alpha(rr);
        const double shift = x_[a] / pivot;
        for (std::size_t i = 0; i < m_; ++i) {
            x_[basis_[i]] -= shift * alpha(static_cast<Eigen::Index>(i));
        }
        x_[pick] += shift;
        x_[a] = 0.0;
        state_[a] = VarState::AtLower;
        basis_[r] = pick;
        state_[pick] = VarState::Basic;
        const Eigen::RowVectorXd pivot_row = binv_.row(rr) / pivot;
        binv_.noalias() -= alpha * pivot_row;
        binv_.row(rr) = pivot_row;
        changed = true;
    }
    return changed;
}

Solution BoundedSimplex::package(Status status) const
{
    Solution sol;
    sol.status = status;
    sol.iterations = iterations_;
    sol.nodes = 1;
    sol.infeasible_rows = infeasible_rows_;
    if (status != Status::Optimal) return sol;

    const auto& vars = lp_.variables();
    sol.primal.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    // Snap values that sit within rounding noise of a bound.
    for (std::size_t j = 0; j < n_; ++j) {
        double& v = sol.primal[j];
        const double snap = 1e-12 * std::max(1.0, std::abs(v));
        if (std::isfinite(vars[j].lower) && std::abs(v - vars[j].lower) <= snap) v = vars[j].lower;
        if (std::isfinite(vars[j].upper) && std::abs(v - vars[j].upper) <= snap) v = vars[j].upper;
    }
    Eigen::VectorXd y;
    compute_duals(y);
    sol.dual.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) sol.dual[i] = y(static_cast<Eigen::Index>(i));
    sol.reduced_cost.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) sol.reduced_cost[j] = cost_[j] - dot_column(j, y);

    double obj = lp_.objective_offset();
    for (std::size_t j = 0; j < n_; ++j) obj += vars[j].cost * sol.primal[j];
    sol.objective = obj;
    return sol;
}

Solution BoundedSimplex::run()
{
    if (!initialize()) return package(Status::Infeasible);

    bool needs_phase_one = false;
    for (std::size_t i = 0; i < m_; ++i) {
        if (is_artificial(basis_[i])) needs_phase_one = true;
    }

    if (needs_phase_one) {
        std::vector<double> real_cost = cost_;
        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (std::size_t i = 0; i < m_; ++i) cost_[n_ + m_ + i] = 1.0;
        const Outcome o = iterate(true);
        if (o == Outcome::IterationLimit) return package(Status::IterationLimit);
        refactor();
        double infeasibility = 0.0;
        for (std::size_t i = 0; i < m_; ++i) infeasibility += std::max(0.0, x_[n_ + m_ + i]);
        const double threshold = std::max(1e-9, 1e3 * ftol_);
        if (infeasibility > threshold) {
            for (std::size_t i = 0; i < m_; ++i) {
                if (x_[n_ + m_ + i] > threshold / static_cast<double>(m_ + 1)) {
                    infeasible_rows_.push_back(lp_.constraints()[i].name);
                }
            }
            return package(Status::Infeasible);
        }
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t a = n_ + m_ + i;
            upper_[a] = 0.0;
            if (state_[a] != VarState::Basic) x_[a] = 0.0;
        }
        cost_ = std::move(real_cost);
        if (drive_out_artificials()) refactor();
    }

    Outcome o = iterate(false);
    if (o == Outcome::Optimal) {
        // Confirm optimality on a fresh factorization; resume if drift exposed
        // an improving column.
        for (int pass = 0; pass < 3 && o == Outcome::Optimal; ++pass) {
            const std::size_t before = iterations_;
            refactor();
            o = iterate(false);
            if (iterations_ == before) break;
        }
    }
    switch (o) {
    case Outcome::Optimal: return package(Status::Optimal);
    case Outcome::Unbounded: return package(Status::Unbounded);
    case Outcome::IterationLimit: return package(Status::IterationLimit);
    }
    return package(Status::IterationLimit);
}

}  // namespace

Solution solve_lp(const LinearProgram& lp, const SolverOptions& options)
{
    if (auto issues = lp.validate(); !issues.empty()) {
        throw Error(ErrorCode::InconsistentInput, "malformed linear program: " + issues.front(),
                    issues);
    }
    BoundedSimplex simplex(lp, options);
    return simplex.run();
}

Solution solve(const LinearProgram& lp, const SolverOptions& options)
{
    return lp.has_integers() ? solve_milp(lp, options) : solve_lp(lp, options);
}

}  // namespace h2g::lp
