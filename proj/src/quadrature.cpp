#include "nncc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "nncc/errors.hpp"

namespace nncc::quad {

namespace {

void check(const char* rule, double a, double b, const Result& r, Tolerance tol) {
  const double bound = std::max(tol.abs, tol.rel * r.l1);
  if (!std::isfinite(r.value) || !(r.error <= bound)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << rule << " did not converge on [" << a << ", " << b << "]: value=" << r.value
        << " error=" << r.error << " L1=" << r.l1 << " bound=" << bound;
    throw NumericError(msg.str());
  }
}

// One rule per thread: the abscissa tables are built lazily.
boost::math::quadrature::tanh_sinh<double>& ts_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  return rule;
}

}  // namespace

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, Tolerance tol,
                     unsigned max_depth) {
  Result r;
  if (a == b) return r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, max_depth, tol.rel, &r.error, &r.l1);
  check("gauss_kronrod", a, b, r, tol);
  return r;
}

Result tanh_sinh(const std::function<double(double, double)>& f, double a, double b,
                 Tolerance tol) {
  Result r;
  if (a == b) return r;
  std::size_t levels = 0;
  r.value = ts_rule().integrate(f, a, b, tol.rel, &r.error, &r.l1, &levels);
  check("tanh_sinh", a, b, r, tol);
  return r;
}

Result tanh_sinh(const std::function<double(double)>& f, double a, double b, Tolerance tol) {
  return tanh_sinh([&f](double x, double) { return f(x); }, a, b, tol);
}

}  // namespace nncc::quad
