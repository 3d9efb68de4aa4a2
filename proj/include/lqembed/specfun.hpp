#pragma once

// Scalar special functions: log-gamma, gamma ratios, Gegenbauer/Legendre/Chebyshev
// polynomials. All functions are pure and reentrant.

namespace lqembed::specfun {

/// ln Γ(x) for x > 0 (Lanczos, g = 607/128, 15 terms). Throws DomainError for x <= 0.
double gamma_ln(double x);

/// Γ(a)/Γ(b) evaluated in log space. Throws RangeError if the result overflows.
double gamma_ratio(double a, double b);

/// C_m^ν(t) by forward recurrence in m; requires ν > -1/2.
/// For ν = 0 the polynomials vanish identically for m >= 1 (use chebyshev_t instead).
double gegenbauer_eval(double nu, int m, double t);

/// Legendre P_m(t), three-term (Bonnet) recurrence.
double legendre_eval(int m, double t);

/// Chebyshev T_m(t), three-term recurrence.
double chebyshev_t(int m, double t);

/// Beta function B(a, b) = Γ(a)Γ(b)/Γ(a+b).
double beta(double a, double b);

}  // namespace lqembed::specfun
