#pragma once
#include <functional>

namespace urt::num {

// Gaussian tail Q(x) = P(Z > x) and its inverse (absolute accuracy ~1e-12).
double qfunc(double x);
double qfunc_inv(double p);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// Adaptive Simpson quadrature on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10);

// Integral over [a, inf) via log substitution (integrand must decay).
double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double tol = 1e-10);

// Root of f on [lo, hi] (f(lo), f(hi) must bracket); relative x tolerance.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double rel_tol = 1e-12, int max_iter = 200);

// Golden-section minimizer of a unimodal f on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol = 1e-10);

double log_binomial(int n, int k);

}  // namespace urt::num
