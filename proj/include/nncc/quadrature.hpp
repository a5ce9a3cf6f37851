#pragma once

#include <functional>

namespace nncc::quad {

struct Tolerance {
  double abs = 0.0;
  double rel = 1e-10;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

/// Adaptive 61-point Gauss-Kronrod for smooth integrands on [a, b].
/// Throws NumericError when the error estimate exceeds max(abs, rel * L1).
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     Tolerance tol = {}, unsigned max_depth = 15);

/// tanh-sinh (double exponential) rule for integrands with endpoint
/// singularities. `f(x, xc)` also receives the signed distance to the nearest
/// endpoint: xc = a - x near a, xc = b - x near b.
Result tanh_sinh(const std::function<double(double, double)>& f, double a, double b,
                 Tolerance tol = {});

Result tanh_sinh(const std::function<double(double)>& f, double a, double b, Tolerance tol = {});

}  // namespace nncc::quad
