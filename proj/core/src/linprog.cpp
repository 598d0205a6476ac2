#include "setrisk/linprog.hpp"

#include <cstddef>
#include <limits>
#include <utility>

#include "setrisk/error.hpp"

namespace setrisk::lp {

namespace {

class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
          const std::vector<double>& c, double eps)
      : m_(b.size()), n_(c.size()), eps_(eps), basis_(m_), nonbasis_(n_ + 1),
        d_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (A[i].size() != n_) fail(Errc::invalid_argument, "lp: ragged constraint matrix");
      for (std::size_t j = 0; j < n_; ++j) d_[i][j] = A[i][j];
      d_[i][n_] = -1.0;
      d_[i][n_ + 1] = b[i];
      basis_[i] = static_cast<long>(n_ + i);
    }
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasis_[j] = static_cast<long>(j);
      d_[m_][j] = -c[j];
    }
    nonbasis_[n_] = -1;
    d_[m_ + 1][n_] = 1.0;
  }

  Result solve() {
    Result result;
    if (m_ > 0) {
      std::size_t r = 0;
      for (std::size_t i = 1; i < m_; ++i)
        if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
      if (d_[r][n_ + 1] < -eps_) {
        pivot(r, n_);
        if (!run(true) || d_[m_ + 1][n_ + 1] < -eps_) {
          result.status = Status::Infeasible;
          return result;
        }
        for (std::size_t i = 0; i < m_; ++i) {
          if (basis_[i] != -1) continue;
          std::size_t s = 0;
          for (std::size_t j = 1; j <= n_; ++j)
            if (d_[i][j] < d_[i][s] || (d_[i][j] == d_[i][s] && nonbasis_[j] < nonbasis_[s])) s = j;
          pivot(i, s);
        }
      }
    }
    if (!run(false)) {
      result.status = Status::Unbounded;
      result.objective = std::numeric_limits<double>::infinity();
      return result;
    }
    result.status = Status::Optimal;
    result.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_)
        result.x[static_cast<std::size_t>(basis_[i])] = d_[i][n_ + 1];
    result.objective = d_[m_][n_ + 1];
    return result;
  }

 private:
  void pivot(std::size_t r, std::size_t s) {
    const double inv = 1.0 / d_[r][s];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      const double f = d_[i][s] * inv;
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n_ + 2; ++j)
        if (j != s) d_[i][j] -= d_[r][j] * f;
    }
    for (std::size_t j = 0; j < n_ + 2; ++j)
      if (j != s) d_[r][j] *= inv;
    for (std::size_t i = 0; i < m_ + 2; ++i)
      if (i != r) d_[i][s] *= -inv;
    d_[r][s] = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  // Bland's rule: entering variable is the lowest-index improving column,
  // leaving variable breaks ratio ties by lowest basis index. Terminates.
  bool run(bool phase_one) {
    const std::size_t row = phase_one ? m_ + 1 : m_;
    for (;;) {
      std::size_t s = n_ + 1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (!phase_one && nonbasis_[j] == -1) continue;
        if (d_[row][j] >= -eps_) continue;
        if (s == n_ + 1 || nonbasis_[j] < nonbasis_[s]) s = j;
      }
      if (s == n_ + 1) return true;
      std::size_t r = m_;
      for (std::size_t i = 0; i < m_; ++i) {
        if (d_[i][s] <= eps_) continue;
        if (r == m_) {
          r = i;
          continue;
        }
        const double lhs = d_[i][n_ + 1] / d_[i][s];
        const double rhs = d_[r][n_ + 1] / d_[r][s];
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[r])) r = i;
      }
      if (r == m_) return false;
      pivot(r, s);
    }
  }

  std::size_t m_, n_;
  double eps_;
  std::vector<long> basis_, nonbasis_;
  std::vector<std::vector<double>> d_;
};

}  // namespace

Result maximize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                const std::vector<double>& c, double eps) {
  if (A.size() != b.size()) fail(Errc::invalid_argument, "lp: A and b disagree in rows");
  return Tableau(A, b, c, eps).solve();
}

}  // namespace setrisk::lp
