#include "scoreinf/distributions.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "scoreinf/error.hpp"

namespace scoreinf {

namespace bm = boost::math;

double normal_cdf(double x) { return bm::cdf(bm::normal_distribution<double>(), x); }

double normal_sf(double x) {
  return bm::cdf(bm::complement(bm::normal_distribution<double>(), x));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("normal quantile needs p in (0,1)");
  return bm::quantile(bm::normal_distribution<double>(), p);
}

double two_sided_z(double level) {
  if (!(level > 0.0 && level < 1.0)) throw InputError("confidence level must lie in (0,1)");
  return normal_quantile(0.5 + 0.5 * level);
}

double chi2_sf(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return bm::cdf(bm::complement(bm::chi_squared_distribution<double>(dof), x));
}

double chi2_isf(double tail, double dof) {
  if (!(tail > 0.0 && tail < 1.0)) throw InputError("chi-square tail probability must lie in (0,1)");
  return bm::quantile(bm::complement(bm::chi_squared_distribution<double>(dof), tail));
}

}  // namespace scoreinf

#include <boost/math/special_functions/erf.hpp>
#include <cmath>

namespace scoreinf {

double normal_isf(double q) {
  if (!(q > 0.0 && q < 1.0)) throw InputError("normal_isf needs q in (0,1)");
  return std::sqrt(2.0) * boost::math::erfc_inv(2.0 * q);
}

}  // namespace scoreinf
