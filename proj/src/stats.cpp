#include "espm/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace espm::stats {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
constexpr int kMaxIter = 1000;

// Regularized lower incomplete gamma P(a,x) by series expansion; valid for
// x < a + 1 where the series converges quickly.
double gamma_p_series(double a, double x) {
  if (x <= 0.0) return 0.0;
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a,x) by Lentz continued fraction;
// valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for the incomplete beta function (Lentz).
double beta_cf(double a, double b, double x) {
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

double log_choose(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0) throw std::domain_error("regularized_gamma_q: a must be positive");
  if (x < 0.0) throw std::domain_error("regularized_gamma_q: x must be non-negative");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("regularized_incomplete_beta: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double log_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                  b * std::log1p(-x);
  double bt = std::exp(log_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return bt * beta_cf(a, b, x) / a;
  }
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

ContingencyTable ContingencyTable::from_supports(const std::vector<std::uint64_t>& supports,
                                                 const std::vector<std::uint64_t>& totals) {
  if (supports.size() != totals.size()) {
    throw std::invalid_argument("contingency table: supports/totals size mismatch");
  }
  ContingencyTable t;
  t.covered = supports;
  t.uncovered.resize(totals.size());
  for (std::size_t c = 0; c < totals.size(); ++c) {
    if (supports[c] > totals[c]) {
      throw std::invalid_argument("contingency table: support exceeds label total");
    }
    t.uncovered[c] = totals[c] - supports[c];
  }
  return t;
}

std::uint64_t ContingencyTable::grand_total() const {
  std::uint64_t g = 0;
  for (auto v : covered) g += v;
  for (auto v : uncovered) g += v;
  return g;
}

G2Result g2_statistic(const ContingencyTable& table) {
  std::size_t n_labels = table.covered.size();
  if (n_labels < 2) throw std::invalid_argument("g2_statistic: need at least two labels");
  double grand = static_cast<double>(table.grand_total());
  if (grand <= 0.0) throw std::invalid_argument("g2_statistic: empty table");

  double row0 = 0.0, row1 = 0.0;
  for (std::size_t c = 0; c < n_labels; ++c) {
    row0 += static_cast<double>(table.covered[c]);
    row1 += static_cast<double>(table.uncovered[c]);
  }

  G2Result res;
  res.df = static_cast<int>(n_labels) - 1;
  double sum = 0.0;
  for (std::size_t c = 0; c < n_labels; ++c) {
    double col = static_cast<double>(table.covered[c]) + static_cast<double>(table.uncovered[c]);
    double e0 = row0 * col / grand;
    double e1 = row1 * col / grand;
    if (e0 < 5.0 || e1 < 5.0) res.low_expected = true;
    double o0 = static_cast<double>(table.covered[c]);
    double o1 = static_cast<double>(table.uncovered[c]);
    if (o0 > 0.0) sum += o0 * std::log(o0 / e0);
    if (o1 > 0.0) sum += o1 * std::log(o1 / e1);
  }
  // Rounding can push an exactly-independent table a hair negative.
  res.statistic = std::max(0.0, 2.0 * sum);
  return res;
}

double chi_square_sf(double x, int df) {
  if (df < 1) throw std::domain_error("chi_square_sf: df must be >= 1");
  if (x < 0.0) throw std::domain_error("chi_square_sf: x must be non-negative");
  if (x == 0.0) return 1.0;
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double binomial_tail(std::uint64_t n, std::uint64_t k, double p) {
  if (p < 0.0 || p > 1.0) throw std::domain_error("binomial_tail: p outside [0,1]");
  if (k > n) throw std::domain_error("binomial_tail: k > n");
  if (k == 0) return 1.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  // P(X >= k) = I_p(k, n-k+1)
  return regularized_incomplete_beta(static_cast<double>(k), static_cast<double>(n - k) + 1.0, p);
}

double log_binomial_pmf(std::uint64_t n, std::uint64_t k, double p) {
  return log_choose(n, k) + static_cast<double>(k) * std::log(p) +
         static_cast<double>(n - k) * std::log1p(-p);
}

double fisher_exact_2x2(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  std::uint64_t row0 = a + b;
  std::uint64_t col0 = a + c;
  std::uint64_t n = a + b + c + d;
  if (n == 0) throw std::invalid_argument("fisher_exact_2x2: empty table");
  if (row0 == 0 || col0 == 0 || row0 == n || col0 == n) return 1.0;  // degenerate margin

  // X ~ Hypergeometric(n, col0, row0); tail over outcomes with X >= a.
  std::uint64_t k_max = std::min(row0, col0);
  double log_denom = log_choose(n, row0);
  double sum = 0.0;
  for (std::uint64_t k = k_max + 1; k-- > a;) {  // small terms first
    double log_term = log_choose(col0, k) + log_choose(n - col0, row0 - k) - log_denom;
    sum += std::exp(log_term);
  }
  return std::min(1.0, sum);
}

}  // namespace espm::stats
