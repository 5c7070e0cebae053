#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "core.hpp"

namespace adwords {

class LpIterationError : public Error {
public:
    LpIterationError(const std::string& what, std::vector<std::size_t> basis)
        : Error(what), basis_(std::move(basis)) {}
    const std::vector<std::size_t>& last_basis() const noexcept { return basis_; }

private:
    std::vector<std::size_t> basis_;
};

struct SimplexResult {
    double value = 0.0;
    std::vector<double> x;             // structural variables
    std::vector<double> duals;         // one per row
    std::vector<std::size_t> basis;    // basic variable per row (structural index, or cols + row for slacks)
    std::size_t iterations = 0;
};

/// Dense tableau simplex for  max c.x  s.t.  A x <= b,  x >= 0,  with b >= 0 so the
/// slack basis is a feasible start. Pivoting uses Bland's rule throughout.
class DenseSimplex {
public:
    DenseSimplex(std::size_t rows, std::size_t cols)
        : m_(rows), n_(cols), width_(cols + rows + 1), tab_((rows + 1) * (cols + rows + 1), 0.0) {
        for (std::size_t r = 0; r < m_; ++r) at(r + 1, n_ + r) = 1.0;
    }

    std::size_t rows() const noexcept { return m_; }
    std::size_t cols() const noexcept { return n_; }

    void set_objective(std::size_t j, double c) { at(0, j) = -c; }
    void set_coef(std::size_t r, std::size_t j, double a) { at(r + 1, j) = a; }
    void set_rhs(std::size_t r, double b) {
        if (b < 0.0) throw PreconditionError("DenseSimplex requires a nonnegative right-hand side");
        at(r + 1, width_ - 1) = b;
    }

    SimplexResult solve(double tol = 1e-9, std::size_t maxIter = 0) {
        if (maxIter == 0) maxIter = 50 * (m_ + n_) + 1000;
        std::vector<std::size_t> basis(m_);
        for (std::size_t r = 0; r < m_; ++r) basis[r] = n_ + r;

        SimplexResult res;
        const std::size_t total = n_ + m_;
        for (;;) {
            // Bland: lowest-index column with a negative objective-row entry enters.
            std::size_t enter = total;
            for (std::size_t j = 0; j < total; ++j)
                if (at(0, j) < -tol) {
                    enter = j;
                    break;
                }
            if (enter == total) break;

            std::size_t leave = m_;
            double bestRatio = kInf;
            for (std::size_t r = 0; r < m_; ++r) {
                const double a = at(r + 1, enter);
                if (a <= tol) continue;
                const double ratio = at(r + 1, width_ - 1) / a;
                if (ratio < bestRatio - tol ||
                    (std::abs(ratio - bestRatio) <= tol && basis[r] < basis[leave])) {
                    bestRatio = ratio;
                    leave = r;
                }
            }
            if (leave == m_) throw Error("LP is unbounded");
            if (++res.iterations > maxIter)
                throw LpIterationError("simplex iteration cap exceeded after " +
                                           std::to_string(maxIter) + " pivots",
                                       basis);
            pivot(leave + 1, enter);
            basis[leave] = enter;
        }

        res.x.assign(n_, 0.0);
        for (std::size_t r = 0; r < m_; ++r)
            if (basis[r] < n_) res.x[basis[r]] = at(r + 1, width_ - 1);
        res.duals.resize(m_);
        for (std::size_t r = 0; r < m_; ++r) res.duals[r] = at(0, n_ + r);
        res.value = at(0, width_ - 1);
        res.basis = std::move(basis);
        return res;
    }

private:
    double& at(std::size_t r, std::size_t c) { return tab_[r * width_ + c]; }

    void pivot(std::size_t pr, std::size_t pc) {
        double* prow = &tab_[pr * width_];
        const double inv = 1.0 / prow[pc];
        for (std::size_t c = 0; c < width_; ++c) prow[c] *= inv;
        prow[pc] = 1.0;
        // Columns where the pivot row is nonzero; the tableau stays fairly sparse.
        nz_.clear();
        for (std::size_t c = 0; c < width_; ++c)
            if (prow[c] != 0.0) nz_.push_back(c);
        for (std::size_t r = 0; r <= m_; ++r) {
            if (r == pr) continue;
            double* row = &tab_[r * width_];
            const double f = row[pc];
            if (f == 0.0) continue;
            for (std::size_t c : nz_) row[c] -= f * prow[c];
            row[pc] = 0.0;
        }
    }

    std::size_t m_, n_, width_;
    std::vector<double> tab_;
    std::vector<std::size_t> nz_;
};

} // namespace adwords
