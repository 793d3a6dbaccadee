#include "slabtest/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <limits>
#include <vector>

namespace slabtest::quadrature {

double integrate(const Integrand& f, double a, double b,
                 std::initializer_list<double> breaks, double rel_tol) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, breaks, rel_tol);

  std::vector<double> nodes{a};
  for (double c : breaks) {
    if (c > a && c < b) nodes.push_back(c);
  }
  nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    total += GK::integrate(f, nodes[i], nodes[i + 1], 20, rel_tol);
  }
  return total;
}

double integrate_to_infinity(const Integrand& f, double a, double rel_tol) {
  boost::math::quadrature::exp_sinh<double> engine;
  return engine.integrate(f, a, std::numeric_limits<double>::infinity(),
                          rel_tol);
}

}  // namespace slabtest::quadrature
