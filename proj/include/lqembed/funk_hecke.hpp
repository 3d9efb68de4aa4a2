#pragma once

// Funk–Hecke eigenvalues of the kernel |t|^q on S^{n-1}: closed form, an
// independent quadrature oracle, the normalizing constant c(q) and the
// series constants K(q), L(q) that bound the inverse transform.

#include <vector>

#include "lqembed/sphere.hpp"

namespace lqembed {

/// Guard band around positive even integers inside which q is rejected.
inline constexpr double kExponentGuard = 1e-9;

/// Distance from q to the nearest positive even integer.
double even_integer_distance(double q);

/// Throws DomainError for q <= 0 and ExcludedExponent inside the guard band.
void require_admissible(double q, double guard = kExponentGuard);

/// λ_m for f(t) = |t|^q. Odd m gives exactly 0. Evaluated in log-Γ space;
/// the Γ of a non-positive argument (m < q) is removed through the reflection formula.
double lambda_closed(int n, int m, double q);

/// ln|λ_m| and sign for even m (sign is +1 or -1).
struct LogEigenvalue {
  double log_abs;
  int sign;
};
LogEigenvalue lambda_closed_log(int n, int m, double q);

/// λ_m = ω_{n-1}/Z(1) ∫ |t|^q Z(t) (1-t^2)^{(n-3)/2} dt with the zonal polynomial Z
/// (Gegenbauer C_m^{(n-2)/2}, Chebyshev T_m for n = 2), integrated with `rule`.
/// If rule.kink_exponent equals q the |t|^q factor is taken from the rule weights.
double lambda_oracle(int n, int m, double q, const IntervalRule& rule);

/// Oracle with degree doubling until two successive values agree to rel_tol.
/// Throws AccuracyError (carrying the last estimate) if max_degree is reached first.
double lambda_oracle_refined(int n, int m, double q, double rel_tol = 1e-10, int max_degree = 4096);

/// c(q) = Γ((n+q)/2) / (2 Γ((q+1)/2) π^{(n-1)/2}); 1 = c(q) ∫ |<x,ξ>|^q dξ.
double c_constant(int n, double q);

struct EigenvalueTable {
  int n = 0;
  double q = 0.0;
  std::vector<double> values;  // index m = 0..max_degree

  int max_degree() const { return static_cast<int>(values.size()) - 1; }
  double operator[](int m) const { return values.at(static_cast<std::size_t>(m)); }
};

EigenvalueTable build_eigenvalue_table(int n, double q, int max_degree);

struct BoundConstants {
  double K = 0.0;     // |λ_0|^{-1} ω_n^{-1/2}
  double L = 0.0;     // full series Σ_{even m>=2} |λ_m|^{-1} m^{-2r} (N(n,m)/ω_n)^{1/2}
  double tail = 0.0;  // part of L beyond M_cap
};

/// Summand |λ_m|^{-1} m^{-2r} (N(n,m)/ω_n)^{1/2} of the L(q) series (even m >= 2).
double l_series_term(int n, double q, int r, int m);

/// Σ over even m > after of l_series_term; direct summation to a far cutoff plus
/// a power-law remainder (terms decay like m^{n+q-1-2r}).
double l_series_tail(int n, double q, int r, int after);

/// Requires 2r > n + q (HypothesisViolation otherwise).
BoundConstants bound_constants(int n, double q, int r, int m_cap);

/// Least-squares slope of ln|λ_m|^{-1} against ln m over even m in [10, table max].
/// Requires table max degree >= 40.
double decay_exponent_check(const EigenvalueTable& table);

}  // namespace lqembed
