#pragma once

#include <cstdint>
#include <vector>

namespace espm::stats {

/// 2 x |labels| table of observed counts: row 0 = samples covered by the
/// pattern, row 1 = samples not covered.
struct ContingencyTable {
  std::vector<std::uint64_t> covered;
  std::vector<std::uint64_t> uncovered;

  /// Builds the table from pattern supports and per-label totals.
  /// Throws std::invalid_argument if any support exceeds its label total.
  static ContingencyTable from_supports(const std::vector<std::uint64_t>& supports,
                                        const std::vector<std::uint64_t>& totals);

  std::uint64_t grand_total() const;
};

struct G2Result {
  double statistic = 0.0;
  int df = 0;
  bool low_expected = false;  // some expected cell < 5; result may be unreliable
};

/// Likelihood-ratio statistic 2 * sum O*ln(O/E); terms with O = 0 contribute
/// nothing. df = #labels - 1. Throws std::invalid_argument on an empty table.
G2Result g2_statistic(const ContingencyTable& table);

/// Upper-tail probability P(chi2_df >= x) via the regularized upper
/// incomplete gamma function. Throws std::domain_error for df < 1 or x < 0.
double chi_square_sf(double x, int df);

/// Exact upper tail P(X >= k) for X ~ Binomial(n, p).
double binomial_tail(std::uint64_t n, std::uint64_t k, double p);

/// One-sided Fisher exact p-value for the 2x2 table (a b / c d):
/// hypergeometric tail of outcomes with the top-left cell >= a.
double fisher_exact_2x2(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

// Building blocks, exposed for tests.
double regularized_gamma_q(double a, double x);           // Q(a,x)
double regularized_incomplete_beta(double a, double b, double x);  // I_x(a,b)
double log_binomial_pmf(std::uint64_t n, std::uint64_t k, double p);

}  // namespace espm::stats
