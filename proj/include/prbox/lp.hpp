#pragma once

// Exact rational linear programming for weight-maximization problems:
//
//   maximize c'x  subject to  A x <= b,  x >= 0
//
// where A has 0/1 columns (one per strategy, a 1 per input pair) and b >= 0.
// The origin is always feasible, so there is no phase one.
//
// The solver is a revised simplex that stores the basis compactly: with k
// structural basics the remaining basics are slacks, so the full m x m basis
// inverse collapses to the k x k inverse of A restricted to the binding rows
// R and basic columns S. All four pivot shapes (swap a column, bind a row,
// release a row, replace a bound row) are rank-1 updates of that small
// inverse. Bland's rule on the fixed order "structural columns, then slacks
// by row" guarantees termination through the heavy degeneracy these LPs
// have. Everything is exact; optimality of the returned basis is certified
// by the nonnegative dual, and verification below re-checks certificates
// with independent arithmetic.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "prbox/rational.hpp"

namespace prbox {

struct LPColumn {
    std::vector<int32_t> rows;  // sorted row indices carrying coefficient 1
};

struct LPProblem {
    int row_count = 0;
    std::vector<LPColumn> columns;
    std::vector<Rational> objective;  // one weight per column
    std::vector<Rational> rhs;        // length row_count, nonnegative

    void validate() const {
        if (columns.size() != objective.size())
            throw std::invalid_argument("LPProblem: column/objective size mismatch");
        if (static_cast<int>(rhs.size()) != row_count)
            throw std::invalid_argument("LPProblem: rhs size mismatch");
        for (const auto& b : rhs)
            if (b < Rational(0)) throw std::invalid_argument("LPProblem: negative rhs");
        for (const auto& col : columns)
            for (size_t i = 0; i < col.rows.size(); ++i) {
                if (col.rows[i] < 0 || col.rows[i] >= row_count)
                    throw std::invalid_argument("LPProblem: row index out of range");
                if (i && col.rows[i] <= col.rows[i - 1])
                    throw std::invalid_argument("LPProblem: column rows not sorted");
            }
    }
};

struct LPSolution {
    Rational objective;
    std::vector<std::pair<int, Rational>> primal;  // (column, weight), nonzero only
    std::vector<std::pair<int, Rational>> dual;    // (row, multiplier), nonzero only

    Rational primal_weight(int column) const {
        for (const auto& [c, w] : primal)
            if (c == column) return w;
        return Rational(0);
    }
    Rational dual_at(int row) const {
        for (const auto& [r, y] : dual)
            if (r == row) return y;
        return Rational(0);
    }
};

// How the pricing gap of a certificate was established: by enumerating every
// column of the full problem, or by an exact pricing oracle over the
// implicit column set.
enum class GapMode { enumerated, oracle, none };

struct Certificate {
    LPSolution solution;
    std::vector<Rational> slack;  // b - Ax, per row
    Rational pricing_gap;         // max reduced cost over the full column set
    GapMode gap_mode = GapMode::none;
    bool certified = false;  // true once a nonpositive gap covers all columns
};

class SimplexSolver {
public:
    explicit SimplexSolver(LPProblem problem) : p_(std::move(problem)) {
        p_.validate();
        ax_.assign(p_.row_count, Rational(0));
        y_dense_.assign(p_.row_count, Rational(0));
    }

    const LPProblem& problem() const { return p_; }

    // Appends a column; the current basis stays valid feasible, so a
    // following solve() resumes instead of restarting.
    int add_column(LPColumn col, Rational weight) {
        for (size_t i = 0; i < col.rows.size(); ++i) {
            if (col.rows[i] < 0 || col.rows[i] >= p_.row_count)
                throw std::invalid_argument("add_column: row index out of range");
            if (i && col.rows[i] <= col.rows[i - 1])
                throw std::invalid_argument("add_column: rows not sorted");
        }
        p_.columns.push_back(std::move(col));
        p_.objective.push_back(std::move(weight));
        return static_cast<int>(p_.columns.size()) - 1;
    }

    // Pivots to optimality from the current basis. Returns the number of
    // pivots performed.
    //
    // The entering variable is normally the first eligible one from a
    // round-robin cursor, which breaks the stalling patterns a fixed scan
    // order produces on these heavily degenerate problems. After too many
    // consecutive zero-step pivots the rule falls back to strict Bland
    // order until the objective moves again, which rules out cycling.
    uint64_t solve() {
        uint64_t pivots = 0;
        refresh_state();
        uint64_t stall = 0;
        const uint64_t stall_limit = 512;
        const size_t total = p_.columns.size() + static_cast<size_t>(p_.row_count);
        for (;;) {
            const bool bland = stall >= stall_limit;
            int enter_col = -1, enter_slack_pos = -1;
            if (cursor_ >= total || bland) cursor_ = 0;
            for (size_t step = 0; step < total; ++step) {
                const size_t idx = bland ? step : (cursor_ + step) % total;
                if (idx < p_.columns.size()) {
                    const int j = static_cast<int>(idx);
                    if (in_basis_[j]) continue;
                    Rational rc = p_.objective[j];
                    for (int32_t r : p_.columns[j].rows) rc -= y_dense_[r];
                    if (rc > Rational(0)) {
                        enter_col = j;
                        cursor_ = idx + 1;
                        break;
                    }
                } else {
                    const int r = static_cast<int>(idx - p_.columns.size());
                    if (!(y_dense_[r] < Rational(0))) continue;
                    for (size_t q = 0; q < rows_.size(); ++q)
                        if (rows_[q] == r) {
                            enter_slack_pos = static_cast<int>(q);
                            break;
                        }
                    if (enter_slack_pos >= 0) {
                        cursor_ = idx + 1;
                        break;
                    }
                }
            }
            if (enter_col < 0 && enter_slack_pos < 0) break;
            const bool moved = pivot(enter_col, enter_slack_pos, bland);
            stall = moved ? 0 : stall + 1;
            ++pivots;
        }
        return pivots;
    }

    LPSolution solution() const {
        LPSolution out;
        for (size_t p = 0; p < basis_.size(); ++p) {
            out.objective += p_.objective[basis_[p]] * x_[p];
            if (!x_[p].is_zero()) out.primal.push_back({basis_[p], x_[p]});
        }
        for (int32_t r : rows_)
            if (!y_dense_[r].is_zero()) out.dual.push_back({r, y_dense_[r]});
        std::sort(out.primal.begin(), out.primal.end());
        std::sort(out.dual.begin(), out.dual.end());
        return out;
    }

    // Dense duals, zero on unbound rows.
    const std::vector<Rational>& duals() const { return y_dense_; }

    std::vector<Rational> slacks() const {
        std::vector<Rational> s(p_.row_count);
        for (int r = 0; r < p_.row_count; ++r) s[r] = p_.rhs[r] - ax_[r];
        return s;
    }

private:
    // Rebuilds x, Ax and y from (basis_, rows_, inv_). Called once per
    // solve(); pivots keep the state current afterwards.
    void refresh_state() {
        in_basis_.assign(p_.columns.size(), false);
        for (int j : basis_) in_basis_[j] = true;
        recompute_x();
        recompute_y();
    }

    void recompute_x() {
        const size_t s = basis_.size();
        x_.assign(s, Rational(0));
        for (size_t i = 0; i < s; ++i)
            for (size_t q = 0; q < s; ++q) {
                if (inv_[i][q].is_zero()) continue;
                x_[i] += inv_[i][q] * p_.rhs[rows_[q]];
            }
        for (auto& v : ax_) v = Rational(0);
        for (size_t i = 0; i < s; ++i) {
            if (x_[i].is_zero()) continue;
            for (int32_t r : p_.columns[basis_[i]].rows) ax_[r] += x_[i];
        }
    }

    void recompute_y() {
        for (int32_t r : y_nonzero_) y_dense_[r] = Rational(0);
        y_nonzero_.clear();
        const size_t s = basis_.size();
        for (size_t q = 0; q < s; ++q) {
            Rational y(0);
            for (size_t i = 0; i < s; ++i) {
                if (inv_[i][q].is_zero()) continue;
                y += p_.objective[basis_[i]] * inv_[i][q];
            }
            if (!y.is_zero()) {
                y_dense_[rows_[q]] = y;
                y_nonzero_.push_back(rows_[q]);
            }
        }
    }

    // Entering direction against the current basis: w over basic columns,
    // u over unbound rows (slack decrease rates). Returns whether the step
    // length was nonzero.
    bool pivot(int enter_col, int enter_slack_pos, bool bland_mode) {
        const size_t s = basis_.size();
        std::vector<int> pos(p_.row_count, -1);
        for (size_t q = 0; q < s; ++q) pos[rows_[q]] = static_cast<int>(q);
        std::vector<Rational> w(s, Rational(0));
        if (enter_col >= 0) {
            for (size_t i = 0; i < s; ++i)
                for (int32_t r : p_.columns[enter_col].rows) {
                    int q = pos[r];
                    if (q >= 0 && !inv_[i][q].is_zero()) w[i] += inv_[i][q];
                }
        } else {
            for (size_t i = 0; i < s; ++i) w[i] = inv_[i][enter_slack_pos];
        }

        // Slack decrease rate on every unbound row: A[r, S] w, minus the
        // entering column's own coefficient.
        std::vector<Rational> aw(p_.row_count, Rational(0));
        for (size_t i = 0; i < s; ++i) {
            if (w[i].is_zero()) continue;
            for (int32_t r : p_.columns[basis_[i]].rows) aw[r] += w[i];
        }
        auto u_at = [&](int r) {
            Rational u = -aw[r];
            if (enter_col >= 0) {
                const auto& cr = p_.columns[enter_col].rows;
                if (std::binary_search(cr.begin(), cr.end(), static_cast<int32_t>(r))) u += Rational(1);
            }
            return u;
        };

        // Stage one of the ratio test: minimum ratio over all candidates.
        struct Candidate {
            bool structural;
            int pos_or_row;  // basis position, or row whose slack leaves
            Rational rate;
        };
        std::vector<Candidate> ties;
        std::optional<Rational> best_ratio;
        auto consider = [&](bool structural, int pos_or_row, const Rational& value,
                            const Rational& rate) {
            Rational ratio = value / rate;
            if (!best_ratio || ratio < *best_ratio) {
                best_ratio = ratio;
                ties.clear();
            } else if (ratio > *best_ratio) {
                return;
            }
            ties.push_back({structural, pos_or_row, rate});
        };
        for (size_t i = 0; i < s; ++i)
            if (w[i] > Rational(0)) consider(true, static_cast<int>(i), x_[i], w[i]);
        for (int r = 0; r < p_.row_count; ++r) {
            if (pos[r] >= 0) continue;
            Rational u = u_at(r);
            if (u > Rational(0)) consider(false, r, p_.rhs[r] - ax_[r], u);
        }
        if (!best_ratio)
            throw std::runtime_error("simplex: unbounded (a column with empty support?)");

        // Stage two: break ties lexicographically on the leaving variable's
        // basis-inverse row (the exact form of the classic perturbation), or
        // by smallest variable index when Bland order is forced. The inverse
        // row of a basic column lives on the binding rows; the row of a
        // basic slack adds its own unit entry.
        const Candidate* chosen = &ties.front();
        if (ties.size() > 1 && bland_mode) {
            for (const auto& c : ties) {
                auto idx = [&](const Candidate& t) {
                    return t.structural
                               ? static_cast<int64_t>(basis_[t.pos_or_row])
                               : static_cast<int64_t>(p_.columns.size()) + t.pos_or_row;
                };
                if (idx(c) < idx(*chosen)) chosen = &c;
            }
        } else if (ties.size() > 1) {
            auto inverse_row = [&](const Candidate& c) {
                std::vector<std::pair<int, Rational>> row;
                if (c.structural) {
                    for (size_t q = 0; q < s; ++q)
                        if (!inv_[c.pos_or_row][q].is_zero())
                            row.push_back({rows_[q], inv_[c.pos_or_row][q]});
                } else {
                    row.push_back({c.pos_or_row, Rational(1)});
                    std::vector<char> art(s, 0);
                    for (size_t i = 0; i < s; ++i) {
                        const auto& cr = p_.columns[basis_[i]].rows;
                        art[i] = std::binary_search(cr.begin(), cr.end(),
                                                    static_cast<int32_t>(c.pos_or_row));
                    }
                    for (size_t q = 0; q < s; ++q) {
                        Rational v(0);
                        for (size_t i = 0; i < s; ++i)
                            if (art[i] && !inv_[i][q].is_zero()) v += inv_[i][q];
                        if (!v.is_zero()) row.push_back({rows_[q], -v});
                    }
                }
                std::sort(row.begin(), row.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                return row;
            };
            auto lex_less = [](const std::vector<std::pair<int, Rational>>& a,
                               const Rational& ra,
                               const std::vector<std::pair<int, Rational>>& b,
                               const Rational& rb) {
                size_t i = 0, j = 0;
                while (i < a.size() || j < b.size()) {
                    int ca = i < a.size() ? a[i].first : INT32_MAX;
                    int cb = j < b.size() ? b[j].first : INT32_MAX;
                    Rational va = ca <= cb ? a[i].second : Rational(0);
                    Rational vb = cb <= ca ? b[j].second : Rational(0);
                    Rational lhs = va * rb, rhs = vb * ra;
                    if (lhs != rhs) return lhs < rhs;
                    if (ca <= cb) ++i;
                    if (cb <= ca) ++j;
                }
                return false;
            };
            auto best_row = inverse_row(*chosen);
            for (size_t k = 1; k < ties.size(); ++k) {
                auto cand_row = inverse_row(ties[k]);
                if (lex_less(cand_row, ties[k].rate, best_row, chosen->rate)) {
                    chosen = &ties[k];
                    best_row = std::move(cand_row);
                }
            }
        }
        const int leave_pos = chosen->structural ? chosen->pos_or_row : -1;
        const int leave_row = chosen->structural ? -1 : chosen->pos_or_row;

        if (enter_col >= 0 && leave_pos >= 0) {
            replace_column(leave_pos, enter_col, w);
        } else if (enter_col >= 0) {
            bind_row(enter_col, leave_row, w, u_at(leave_row));
        } else if (leave_pos >= 0) {
            release_row(enter_slack_pos, leave_pos, w);
        } else {
            swap_row(enter_slack_pos, leave_row, w);
        }
        recompute_x();
        recompute_y();
        return best_ratio->is_positive();
    }

    // Case 1: entering column replaces basis_[p]; rows stay fixed.
    void replace_column(int p, int enter_col, const std::vector<Rational>& w) {
        const size_t s = basis_.size();
        const Rational piv = w[p];
        if (piv.is_zero()) throw std::runtime_error("simplex: zero pivot (replace)");
        std::vector<Rational> row_p = inv_[p];
        for (auto& v : row_p) v = v / piv;
        for (size_t i = 0; i < s; ++i) {
            if (static_cast<int>(i) == p || w[i].is_zero()) continue;
            for (size_t q = 0; q < s; ++q) inv_[i][q] -= w[i] * row_p[q];
        }
        inv_[p] = std::move(row_p);
        in_basis_[basis_[p]] = false;
        basis_[p] = enter_col;
        in_basis_[enter_col] = true;
    }

    // Case 2: entering column joins the basis and row t becomes binding:
    // the inverse grows by a bordered block with Schur complement sigma.
    void bind_row(int enter_col, int t, const std::vector<Rational>& w, Rational sigma) {
        const size_t s = basis_.size();
        if (sigma.is_zero()) throw std::runtime_error("simplex: zero pivot (bind)");
        // Row of A on the new binding row, restricted to current basis.
        std::vector<Rational> art(s, Rational(0));
        for (size_t i = 0; i < s; ++i) {
            const auto& cr = p_.columns[basis_[i]].rows;
            if (std::binary_search(cr.begin(), cr.end(), static_cast<int32_t>(t)))
                art[i] = Rational(1);
        }
        std::vector<Rational> rm(s, Rational(0));  // art' * inv
        for (size_t q = 0; q < s; ++q)
            for (size_t i = 0; i < s; ++i) {
                if (art[i].is_zero() || inv_[i][q].is_zero()) continue;
                rm[q] += art[i] * inv_[i][q];
            }
        for (size_t i = 0; i < s; ++i) {
            for (size_t q = 0; q < s; ++q) inv_[i][q] += w[i] * rm[q] / sigma;
            inv_[i].push_back(-w[i] / sigma);
        }
        std::vector<Rational> last(s + 1);
        for (size_t q = 0; q < s; ++q) last[q] = -rm[q] / sigma;
        last[s] = Rational(1) / sigma;
        inv_.push_back(std::move(last));
        basis_.push_back(enter_col);
        in_basis_[enter_col] = true;
        rows_.push_back(t);
    }

    // Case 3: slack of rows_[q] enters, basis_[p] leaves: drop one row and
    // one column from the inverse.
    void release_row(int q, int p, const std::vector<Rational>& w) {
        const size_t s = basis_.size();
        const Rational piv = w[p];  // = inv_[p][q]
        if (piv.is_zero()) throw std::runtime_error("simplex: zero pivot (release)");
        for (size_t i = 0; i < s; ++i) {
            if (static_cast<int>(i) == p) continue;
            if (inv_[i][q].is_zero()) continue;
            const Rational f = inv_[i][q] / piv;
            for (size_t c = 0; c < s; ++c) inv_[i][c] -= f * inv_[p][c];
        }
        in_basis_[basis_[p]] = false;
        basis_.erase(basis_.begin() + p);
        rows_.erase(rows_.begin() + q);
        inv_.erase(inv_.begin() + p);
        for (auto& row : inv_) row.erase(row.begin() + q);
    }

    // Case 4: slack of rows_[q] enters while the slack of row t leaves:
    // binding row q is swapped for t, a rank-1 row replacement.
    void swap_row(int q, int t, const std::vector<Rational>& w) {
        const size_t s = basis_.size();
        // denom = A[t, S] . inv[:,q]; equals minus the slack rate, nonzero.
        Rational denom(0);
        std::vector<Rational> art(s, Rational(0));
        for (size_t i = 0; i < s; ++i) {
            const auto& cr = p_.columns[basis_[i]].rows;
            if (std::binary_search(cr.begin(), cr.end(), static_cast<int32_t>(t))) {
                art[i] = Rational(1);
                denom += w[i];
            }
        }
        if (denom.is_zero()) throw std::runtime_error("simplex: zero pivot (swap)");
        // delta' = A[t,S] - A[old,S]; new inverse = inv - (inv e_q)(delta' inv)/denom
        // using A[old,S] . inv[:,c] = e_q[c].
        std::vector<Rational> dinv(s, Rational(0));
        for (size_t c = 0; c < s; ++c) {
            for (size_t i = 0; i < s; ++i) {
                if (art[i].is_zero() || inv_[i][c].is_zero()) continue;
                dinv[c] += inv_[i][c];
            }
            if (c == static_cast<size_t>(q)) dinv[c] -= Rational(1);
        }
        for (size_t i = 0; i < s; ++i) {
            if (w[i].is_zero()) continue;
            const Rational f = w[i] / denom;
            for (size_t c = 0; c < s; ++c) inv_[i][c] -= f * dinv[c];
        }
        rows_[q] = t;
    }

    LPProblem p_;
    size_t cursor_ = 0;                  // round-robin entering scan position
    std::vector<int> basis_;             // structural basic column ids
    std::vector<int> rows_;              // binding rows, rows_[q] pairs inv column q
    std::vector<std::vector<Rational>> inv_;  // (A[rows_, basis_])^-1
    std::vector<Rational> x_;            // basic structural values
    std::vector<Rational> ax_;           // A x, full row space
    std::vector<Rational> y_dense_;      // duals, dense over rows
    std::vector<int32_t> y_nonzero_;
    std::vector<bool> in_basis_;
};

inline LPSolution solve_exact(const LPProblem& p) {
    SimplexSolver solver(p);
    solver.solve();
    return solver.solution();
}

// Max reduced cost over the explicit column set, for certificates whose
// pricing gap is established by enumeration.
inline Rational max_reduced_cost(const LPProblem& p, const std::vector<Rational>& y) {
    if (static_cast<int>(y.size()) != p.row_count)
        throw std::invalid_argument("max_reduced_cost: dual size mismatch");
    bool any = false;
    Rational best;
    for (size_t j = 0; j < p.columns.size(); ++j) {
        Rational rc = p.objective[j];
        for (int32_t r : p.columns[j].rows) rc -= y[r];
        if (!any || rc > best) {
            best = rc;
            any = true;
        }
    }
    if (!any) throw std::invalid_argument("max_reduced_cost: no columns");
    return best;
}

// Independent certificate check: primal feasibility, dual feasibility on
// the given columns, objective equality, slack consistency and the claimed
// pricing gap's sign. Returns the first failed condition as text.
inline std::optional<std::string> verify_certificate(const Certificate& cert,
                                                     const LPProblem& p) {
    std::vector<Rational> x(p.columns.size(), Rational(0));
    for (const auto& [j, wj] : cert.solution.primal) {
        if (j < 0 || j >= static_cast<int>(p.columns.size()))
            return "primal index out of range";
        if (wj < Rational(0)) return "negative primal weight at column " + std::to_string(j);
        x[j] = wj;
    }
    std::vector<Rational> ax(p.row_count, Rational(0));
    Rational primal_obj(0);
    for (size_t j = 0; j < x.size(); ++j) {
        if (x[j].is_zero()) continue;
        primal_obj += p.objective[j] * x[j];
        for (int32_t r : p.columns[j].rows) ax[r] += x[j];
    }
    for (int r = 0; r < p.row_count; ++r) {
        if (ax[r] > p.rhs[r]) return "primal infeasible at row " + std::to_string(r);
        if (static_cast<int>(cert.slack.size()) == p.row_count &&
            cert.slack[r] != p.rhs[r] - ax[r])
            return "slack mismatch at row " + std::to_string(r);
    }
    if (primal_obj != cert.solution.objective) return "objective mismatch (primal)";

    std::vector<Rational> y(p.row_count, Rational(0));
    Rational dual_obj(0);
    for (const auto& [r, yr] : cert.solution.dual) {
        if (r < 0 || r >= p.row_count) return "dual index out of range";
        if (yr < Rational(0)) return "negative dual at row " + std::to_string(r);
        y[r] = yr;
        dual_obj += yr * p.rhs[r];
    }
    if (dual_obj != cert.solution.objective) return "objective mismatch (dual)";
    for (size_t j = 0; j < p.columns.size(); ++j) {
        Rational rc = p.objective[j];
        for (int32_t r : p.columns[j].rows) rc -= y[r];
        if (rc > Rational(0))
            return "dual infeasible at column " + std::to_string(j);
    }
    if (cert.gap_mode != GapMode::none && cert.certified &&
        cert.pricing_gap > Rational(0))
        return "pricing gap positive";
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// A second, self-contained solver for small dense instances whose column
// entries are general nonnegative rationals (the solver above is built
// around 0/1 columns). Plain tableau simplex under Bland's rule with a
// slack start; row counts here are tiny, so no compaction is needed.
// Supports adding columns after a solve, keeping the tableau valid.
class DenseSimplex {
public:
    explicit DenseSimplex(std::vector<Rational> rhs) : b_(std::move(rhs)) {
        for (const auto& r : b_)
            if (r.is_negative()) throw std::invalid_argument("DenseSimplex: negative rhs");
        m_ = static_cast<int>(b_.size());
        rows_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            rows_[i].s.assign(m_, Rational(0));
            rows_[i].s[i] = Rational(1);
            rows_[i].rhs = b_[i];
        }
        zs_.assign(m_, Rational(0));
        basis_.resize(m_);
        for (int i = 0; i < m_; ++i) basis_[i] = ~i;  // ~k encodes slack k
    }

    int columns() const { return static_cast<int>(za_.size()); }

    // Appends a structural column, translated through the current basis
    // (the slack block of the tableau is exactly the basis inverse).
    int add_column(const std::vector<Rational>& a, Rational c) {
        if (static_cast<int>(a.size()) != m_)
            throw std::invalid_argument("DenseSimplex: column size mismatch");
        for (int i = 0; i < m_; ++i) {
            Rational t(0);
            for (int k = 0; k < m_; ++k)
                if (!a[k].is_zero()) t += rows_[i].s[k] * a[k];
            rows_[i].a.push_back(std::move(t));
        }
        Rational rc = std::move(c);
        for (int k = 0; k < m_; ++k)
            if (!a[k].is_zero()) rc += zs_[k] * a[k];  // zs_ holds -y
        za_.push_back(std::move(rc));
        return columns() - 1;
    }

    uint64_t solve() {
        const int n = columns();
        uint64_t pivots = 0;
        for (;;) {
            int enter = 0;
            bool slack = false, found = false;
            for (int j = 0; j < n && !found; ++j)
                if (za_[j].is_positive()) {
                    enter = j;
                    found = true;
                }
            for (int k = 0; k < m_ && !found; ++k)
                if (zs_[k].is_positive()) {
                    enter = k;
                    slack = true;
                    found = true;
                }
            if (!found) return pivots;

            int leave = -1;
            Rational best;
            for (int i = 0; i < m_; ++i) {
                const Rational& t = slack ? rows_[i].s[enter] : rows_[i].a[enter];
                if (!t.is_positive()) continue;
                Rational ratio = rows_[i].rhs / t;
                if (leave < 0 || ratio < best ||
                    (ratio == best && var_order(basis_[i]) < var_order(basis_[leave]))) {
                    best = std::move(ratio);
                    leave = i;
                }
            }
            if (leave < 0) throw std::runtime_error("DenseSimplex: unbounded");
            pivot(leave, enter, slack);
            ++pivots;
        }
    }

    const Rational& objective() const { return z_; }

    std::vector<std::pair<int, Rational>> primal() const {
        std::vector<std::pair<int, Rational>> out;
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= 0 && !rows_[i].rhs.is_zero())
                out.emplace_back(basis_[i], rows_[i].rhs);
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    }

    std::vector<Rational> duals() const {
        std::vector<Rational> y;
        y.reserve(m_);
        for (int k = 0; k < m_; ++k) y.push_back(-zs_[k]);
        return y;
    }

private:
    struct Row {
        std::vector<Rational> a;  // structural block
        std::vector<Rational> s;  // slack block, doubles as the basis inverse
        Rational rhs;
    };

    // Bland order: structural columns first, then slacks by row.
    int var_order(int code) const { return code >= 0 ? code : columns() + ~code; }

    void pivot(int leave, int enter, bool slack) {
        Row& pr = rows_[leave];
        const Rational pv = slack ? pr.s[enter] : pr.a[enter];
        const Rational inv = pv.inverse();
        for (auto& q : pr.a) q *= inv;
        for (auto& q : pr.s) q *= inv;
        pr.rhs *= inv;
        auto eliminate = [&](std::vector<Rational>& a, std::vector<Rational>& s, Rational& rhs,
                             Rational factor) {  // by value: aliases an entry being rewritten
            if (factor.is_zero()) return;
            for (size_t j = 0; j < a.size(); ++j)
                if (!pr.a[j].is_zero()) a[j] -= factor * pr.a[j];
            for (int k = 0; k < m_; ++k)
                if (!pr.s[k].is_zero()) s[k] -= factor * pr.s[k];
            rhs -= factor * pr.rhs;
        };
        for (int i = 0; i < m_; ++i) {
            if (i == leave) continue;
            eliminate(rows_[i].a, rows_[i].s, rows_[i].rhs,
                      slack ? rows_[i].s[enter] : rows_[i].a[enter]);
        }
        const Rational zf = slack ? zs_[enter] : za_[enter];
        if (!zf.is_zero()) {
            for (size_t j = 0; j < za_.size(); ++j)
                if (!pr.a[j].is_zero()) za_[j] -= zf * pr.a[j];
            for (int k = 0; k < m_; ++k)
                if (!pr.s[k].is_zero()) zs_[k] -= zf * pr.s[k];
            z_ += zf * pr.rhs;
        }
        basis_[leave] = slack ? ~enter : enter;
    }

    int m_ = 0;
    std::vector<Rational> b_;
    std::vector<Row> rows_;
    std::vector<Rational> za_, zs_;  // reduced costs; zs_ is -duals
    Rational z_;
    std::vector<int> basis_;
};

}  // namespace prbox
