#include "dnnscaler/matrix_completion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "dnnscaler/random.hpp"

namespace dnnscaler {

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric r x r matrix. Eigenvalues
// land on the diagonal of `a`, eigenvectors in the columns of `q`.
void jacobi_eigen(std::vector<double>& a, std::vector<double>& q, size_t r) {
  q.assign(r * r, 0.0);
  for (size_t i = 0; i < r; ++i) q[i * r + i] = 1.0;
  double norm = 0.0;
  for (double x : a) norm += x * x;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (size_t p = 0; p < r; ++p)
      for (size_t s = p + 1; s < r; ++s) off += a[p * r + s] * a[p * r + s];
    if (off <= 1e-30 * std::max(norm, 1e-300)) break;
    for (size_t p = 0; p < r; ++p) {
      for (size_t s = p + 1; s < r; ++s) {
        const double apq = a[p * r + s];
        if (apq == 0.0) continue;
        const double theta = (a[s * r + s] - a[p * r + p]) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (size_t k = 0; k < r; ++k) {
          const double akp = a[k * r + p], aks = a[k * r + s];
          a[k * r + p] = c * akp - sn * aks;
          a[k * r + s] = sn * akp + c * aks;
        }
        for (size_t k = 0; k < r; ++k) {
          const double apk = a[p * r + k], ask = a[s * r + k];
          a[p * r + k] = c * apk - sn * ask;
          a[s * r + k] = sn * apk + c * ask;
        }
        for (size_t k = 0; k < r; ++k) {
          const double qkp = q[k * r + p], qks = q[k * r + s];
          q[k * r + p] = c * qkp - sn * qks;
          q[k * r + s] = sn * qkp + c * qks;
        }
      }
    }
  }
}

// Least squares for one factor row: rows of `fixed` indexed by `picks`
// explain `targets`. Solved through the normal equations' spectrum so that
// regular systems come out exact while directions weaker than `cutoff_rel`
// of the leading eigenvalue are truncated, which yields the minimum-norm
// solution for underdetermined rows instead of a biased or unstable one.
std::vector<double> solve_factor_row(const std::vector<std::vector<double>>& fixed,
                                     const std::vector<size_t>& picks,
                                     const std::vector<double>& targets, size_t rank,
                                     double cutoff_rel) {
  std::vector<double> a(rank * rank, 0.0);
  std::vector<double> b(rank, 0.0);
  for (size_t t = 0; t < picks.size(); ++t) {
    const auto& v = fixed[picks[t]];
    for (size_t i = 0; i < rank; ++i) {
      b[i] += v[i] * targets[t];
      for (size_t j = 0; j < rank; ++j) a[i * rank + j] += v[i] * v[j];
    }
  }
  std::vector<double> q;
  jacobi_eigen(a, q, rank);
  double lead = 0.0;
  for (size_t i = 0; i < rank; ++i) lead = std::max(lead, a[i * rank + i]);
  std::vector<double> x(rank, 0.0);
  if (lead <= 0.0) return x;
  for (size_t i = 0; i < rank; ++i) {
    const double lam = a[i * rank + i];
    if (lam <= cutoff_rel * lead) continue;
    double proj = 0.0;
    for (size_t k = 0; k < rank; ++k) proj += q[k * rank + i] * b[k];
    const double w = proj / lam;
    for (size_t k = 0; k < rank; ++k) x[k] += w * q[k * rank + i];
  }
  return x;
}

// Worst per-entry relative misfit over the observed entries.
// Numerical rank of the fully observed donor rows over the first `width`
// columns, from the spectrum of their Gram matrix.
size_t donor_rank(const std::vector<std::vector<double>>& rows, size_t width) {
  const size_t n = rows.size();
  std::vector<double> g(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      double dot = 0.0;
      for (size_t k = 0; k < width; ++k) dot += rows[i][k] * rows[j][k];
      g[i * n + j] = dot;
      g[j * n + i] = dot;
    }
  }
  std::vector<double> q;
  jacobi_eigen(g, q, n);
  double lead = 0.0;
  for (size_t i = 0; i < n; ++i) lead = std::max(lead, g[i * n + i]);
  if (lead <= 0.0) return 0;
  size_t rank = 0;
  for (size_t i = 0; i < n; ++i)
    if (g[i * n + i] > 1e-10 * lead) ++rank;
  return rank;
}

double observed_residual(const LatencyMatrix& m,
                         const std::vector<std::vector<double>>& u,
                         const std::vector<std::vector<double>>& v, size_t rank) {
  double worst = 0.0;
  for (size_t i = 0; i < m.rows(); ++i) {
    for (size_t j = 0; j < m.cols(); ++j) {
      if (!m.observed[i][j]) continue;
      double est = 0.0;
      for (size_t k = 0; k < rank; ++k) est += u[i][k] * v[j][k];
      worst = std::max(worst, std::abs(m.values[i][j] - est) / m.values[i][j]);
    }
  }
  return worst;
}

}  // namespace

void LatencyMatrix::validate() const {
  if (values.empty() || values.front().empty()) throw std::invalid_argument("empty matrix");
  if (observed.size() != values.size()) throw std::invalid_argument("mask shape mismatch");
  const size_t c = values.front().size();
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != c || observed[i].size() != c)
      throw std::invalid_argument("ragged matrix");
    bool any = false;
    for (size_t j = 0; j < c; ++j) {
      if (!observed[i][j]) continue;
      any = true;
      if (!(values[i][j] > 0.0)) throw std::invalid_argument("non-positive observed entry");
    }
    if (!any) throw std::invalid_argument("empty mask row");
  }
}

CompletionResult complete(const LatencyMatrix& m, const CompletionOptions& opts) {
  m.validate();
  const size_t n1 = m.rows();
  const size_t n2 = m.cols();
  if (opts.rank < 1 || static_cast<size_t>(opts.rank) > std::min(n1, n2))
    throw std::invalid_argument("infeasible rank");
  if (opts.max_iters < 1) throw std::invalid_argument("max_iters must be positive");
  const size_t rank = static_cast<size_t>(opts.rank);

  std::vector<std::vector<size_t>> row_picks(n1), col_picks(n2);
  for (size_t i = 0; i < n1; ++i)
    for (size_t j = 0; j < n2; ++j)
      if (m.observed[i][j]) {
        row_picks[i].push_back(j);
        col_picks[j].push_back(i);
      }

  // Alternating minimization can stall in a poor local fit; restart from a
  // handful of derived seeds and keep the best factorization.
  constexpr int kRestarts = 8;
  std::vector<std::vector<double>> best_u, best_v;
  CompletionResult result;
  result.rank_used = opts.rank;
  result.residual = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < kRestarts && !result.converged; ++attempt) {
    RandomStream rng(mix_seed(opts.seed, static_cast<uint64_t>(attempt)));
    std::vector<std::vector<double>> u(n1, std::vector<double>(rank, 0.0));
    std::vector<std::vector<double>> v(n2, std::vector<double>(rank, 0.0));
    for (auto& row : v)
      for (auto& x : row) x = 0.5 + rng.uniform();

    double res = std::numeric_limits<double>::infinity();
    int iterations = 0;
    for (int iter = 0; iter < opts.max_iters; ++iter) {
      for (size_t i = 0; i < n1; ++i) {
        std::vector<double> targets;
        targets.reserve(row_picks[i].size());
        for (size_t j : row_picks[i]) targets.push_back(m.values[i][j]);
        u[i] = solve_factor_row(v, row_picks[i], targets, rank, opts.ridge);
      }
      for (size_t j = 0; j < n2; ++j) {
        if (col_picks[j].empty()) continue;
        std::vector<double> targets;
        targets.reserve(col_picks[j].size());
        for (size_t i : col_picks[j]) targets.push_back(m.values[i][j]);
        v[j] = solve_factor_row(u, col_picks[j], targets, rank, opts.ridge);
      }
      const double prev = res;
      res = observed_residual(m, u, v, rank);
      iterations = iter + 1;
      if (res < opts.tol) break;
      if (std::abs(prev - res) <= res * 1e-12) break;  // stuck on a plateau
    }
    if (res < result.residual) {
      result.residual = res;
      result.iterations = iterations;
      result.converged = res < opts.tol;
      best_u = std::move(u);
      best_v = std::move(v);
    }
  }

  result.estimates.assign(n1, std::vector<double>(n2, 0.0));
  for (size_t i = 0; i < n1; ++i) {
    double row_min = std::numeric_limits<double>::infinity();
    for (size_t j : row_picks[i]) row_min = std::min(row_min, m.values[i][j]);
    for (size_t j = 0; j < n2; ++j) {
      double est = 0.0;
      for (size_t k = 0; k < rank; ++k) est += best_u[i][k] * best_v[j][k];
      result.estimates[i][j] = est < 0.0 ? row_min : est;
    }
  }
  return result;
}

std::vector<double> estimate_row(const std::vector<std::vector<double>>& catalog_rows,
                                 const std::map<int, double>& observed, int n,
                                 const CompletionOptions& opts) {
  if (n < 1) throw std::invalid_argument("invalid row width");
  if (catalog_rows.empty()) throw std::invalid_argument("no catalog rows");
  if (observed.empty()) throw std::invalid_argument("empty mask row");
  for (const auto& [level, ms] : observed) {
    if (level < 1 || level > n) throw std::invalid_argument("observation outside row width");
    if (!(ms > 0.0)) throw std::invalid_argument("non-positive observed entry");
  }

  LatencyMatrix m;
  const size_t width = static_cast<size_t>(n);
  for (const auto& row : catalog_rows) {
    if (row.size() < width) throw std::invalid_argument("catalog row shorter than requested width");
    m.values.emplace_back(row.begin(), row.begin() + width);
    m.observed.emplace_back(width, 1);
  }

  CompletionOptions used = opts;
  // The factorization can't support more dimensions than the donors span;
  // extra rank would let the partial row fit its observations in a direction
  // no donor constrains, leaving the hidden entries unidentified.
  const size_t spanned = donor_rank(m.values, width);
  used.rank = std::max(1, std::min<int>(opts.rank, static_cast<int>(std::min(spanned, width))));

  m.values.emplace_back(width, 0.0);
  m.observed.emplace_back(width, 0);
  for (const auto& [level, ms] : observed) {
    m.values.back()[level - 1] = ms;
    m.observed.back()[level - 1] = 1;
  }
  auto result = complete(m, used);
  std::vector<double> estimates = result.estimates.back();
  for (const auto& [level, ms] : observed) estimates[level - 1] = ms;
  return estimates;
}

std::map<std::string, std::vector<double>> load_latency_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open latency rows file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("latency rows file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("latency rows file must be a JSON object");
  std::map<std::string, std::vector<double>> rows;
  for (const auto& [id, arr] : doc.items()) {
    if (!arr.is_array() || arr.empty())
      throw std::invalid_argument("latency row for " + id + " must be a non-empty array");
    std::vector<double> row;
    for (const auto& v : arr) {
      if (!v.is_number() || !(v.get<double>() > 0.0))
        throw std::invalid_argument("latency row for " + id + " has a non-positive entry");
      row.push_back(v.get<double>());
    }
    rows.emplace(id, std::move(row));
  }
  return rows;
}

int pick_mtl(const std::vector<double>& estimates, double slo_ms, int max_mtl) {
  if (estimates.empty()) throw std::invalid_argument("no estimates");
  if (max_mtl < 1) throw std::invalid_argument("invalid instance limit");
  int best = 1;
  const int top = std::min<int>(max_mtl, static_cast<int>(estimates.size()));
  for (int k = 1; k <= top; ++k) {
    if (estimates[k - 1] < slo_ms) best = k;
  }
  return best;
}

}  // namespace dnnscaler
