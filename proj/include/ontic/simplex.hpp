// simplex.hpp
// Dense two-phase simplex for small LPs: maximize c'x subject to Ax <= b,
// x >= 0. Pivot selection breaks ties by variable index, so runs are
// deterministic. Equality constraints are entered as opposing inequalities
// by the caller.

#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace ontic {

struct LpResult {
    enum class Status { optimal, infeasible, unbounded };
    Status status = Status::infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

class SimplexSolver {
public:
    SimplexSolver(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                  const std::vector<double>& c)
        : m_(b.size()), n_(c.size()), basic_(m_), nonbasic_(n_ + 1),
          tab_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < n_; ++j) tab_[i][j] = A[i][j];
        for (std::size_t i = 0; i < m_; ++i) {
            basic_[i] = static_cast<int>(n_ + i);
            tab_[i][n_] = -1.0;
            tab_[i][n_ + 1] = b[i];
        }
        for (std::size_t j = 0; j < n_; ++j) {
            nonbasic_[j] = static_cast<int>(j);
            tab_[m_][j] = -c[j];
        }
        nonbasic_[n_] = -1;
        tab_[m_ + 1][n_] = 1.0;
    }

    LpResult solve() {
        LpResult out;
        std::size_t r = 0;
        for (std::size_t i = 1; i < m_; ++i)
            if (tab_[i][n_ + 1] < tab_[r][n_ + 1]) r = i;
        if (m_ > 0 && tab_[r][n_ + 1] < -kEps) {
            pivot(r, n_);
            if (!iterate(2) || tab_[m_ + 1][n_ + 1] < -kEps) {
                out.status = LpResult::Status::infeasible;
                return out;
            }
            for (std::size_t i = 0; i < m_; ++i) {
                if (basic_[i] != -1) continue;
                std::size_t s = 0;
                for (std::size_t j = 1; j <= n_; ++j)
                    if (std::pair(tab_[i][j], nonbasic_[j]) <
                        std::pair(tab_[i][s], nonbasic_[s]))
                        s = j;
                pivot(i, s);
            }
        }
        const bool bounded = iterate(1);
        out.x.assign(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basic_[i] >= 0 && basic_[i] < static_cast<int>(n_))
                out.x[basic_[i]] = tab_[i][n_ + 1];
        if (!bounded) {
            out.status = LpResult::Status::unbounded;
            return out;
        }
        out.status = LpResult::Status::optimal;
        out.objective = tab_[m_][n_ + 1];
        return out;
    }

private:
    static constexpr double kEps = 1e-9;

    void pivot(std::size_t r, std::size_t s) {
        auto& row = tab_[r];
        const double inv = 1.0 / row[s];
        for (std::size_t i = 0; i < m_ + 2; ++i) {
            if (i == r || std::abs(tab_[i][s]) <= kEps) continue;
            auto& other = tab_[i];
            const double factor = other[s] * inv;
            for (std::size_t j = 0; j < n_ + 2; ++j) other[j] -= row[j] * factor;
            other[s] = row[s] * factor;
        }
        for (std::size_t j = 0; j < n_ + 2; ++j)
            if (j != s) row[j] *= inv;
        for (std::size_t i = 0; i < m_ + 2; ++i)
            if (i != r) tab_[i][s] *= -inv;
        row[s] = inv;
        std::swap(basic_[r], nonbasic_[s]);
    }

    bool iterate(int phase) {
        const std::size_t obj = m_ + static_cast<std::size_t>(phase) - 1;
        while (true) {
            std::size_t s = n_ + 1;
            for (std::size_t j = 0; j <= n_; ++j) {
                if (nonbasic_[j] == -phase) continue;
                if (s == n_ + 1 || std::pair(tab_[obj][j], nonbasic_[j]) <
                                       std::pair(tab_[obj][s], nonbasic_[s]))
                    s = j;
            }
            if (tab_[obj][s] >= -kEps) return true;
            std::size_t r = m_;
            for (std::size_t i = 0; i < m_; ++i) {
                if (tab_[i][s] <= kEps) continue;
                if (r == m_ || std::pair(tab_[i][n_ + 1] / tab_[i][s], basic_[i]) <
                                   std::pair(tab_[r][n_ + 1] / tab_[r][s], basic_[r]))
                    r = i;
            }
            if (r == m_) return false;  // unbounded direction
            pivot(r, s);
        }
    }

    std::size_t m_, n_;
    std::vector<int> basic_, nonbasic_;
    std::vector<std::vector<double>> tab_;
};

// Incremental LP builder: rows are added as <=, >= or == constraints over a
// fixed variable count; equality rows become two inequalities.
class LpBuilder {
public:
    explicit LpBuilder(std::size_t vars) : n_(vars), objective_(vars, 0.0) {}

    void set_objective(std::size_t var, double coeff) { objective_[var] = coeff; }

    void add_le(const std::vector<std::pair<std::size_t, double>>& terms, double rhs) {
        rows_.emplace_back(dense(terms));
        rhs_.push_back(rhs);
    }

    void add_ge(const std::vector<std::pair<std::size_t, double>>& terms, double rhs) {
        auto row = dense(terms);
        for (double& v : row) v = -v;
        rows_.emplace_back(std::move(row));
        rhs_.push_back(-rhs);
    }

    void add_eq(const std::vector<std::pair<std::size_t, double>>& terms, double rhs) {
        add_le(terms, rhs);
        add_ge(terms, rhs);
    }

    LpResult maximize() const { return SimplexSolver(rows_, rhs_, objective_).solve(); }

    std::size_t variable_count() const { return n_; }

private:
    std::vector<double> dense(const std::vector<std::pair<std::size_t, double>>& terms) const {
        std::vector<double> row(n_, 0.0);
        for (const auto& [idx, coeff] : terms) row[idx] += coeff;
        return row;
    }

    std::size_t n_;
    std::vector<double> objective_;
    std::vector<std::vector<double>> rows_;
    std::vector<double> rhs_;
};

} // namespace ontic
