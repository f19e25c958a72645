#pragma once

namespace scoreinf {

double normal_cdf(double x);
// Upper tail 1 - Phi(x), accurate far into the tail.
double normal_sf(double x);
double normal_quantile(double p);

// Two-sided critical value z such that P(|Z| <= z) = level.
double two_sided_z(double level);

double chi2_sf(double x, double dof);
// y with P(chi2_dof >= y) = tail.
double chi2_isf(double tail, double dof);

// x with 1 - Phi(x) = q, computed through erfc_inv so that q near 0 keeps
// full relative precision.
double normal_isf(double q);

}  // namespace scoreinf
