#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version used by the
// library and a plain serial reference kept for tests and benchmarks. The
// parallel versions reduce over fixed-size chunks in a fixed order, so their
// output does not depend on the number of threads.

#include <cstdint>
#include <vector>

#include "scoreinf/types.hpp"

namespace scoreinf::kernels {

// (1/n) rows^T rows for an n x m matrix of per-sample rows.
Matrix gram(const Matrix& rows);
Matrix gram_reference(const Matrix& rows);

// Column means of an n x m matrix.
Vector column_mean(const Matrix& rows);
Vector column_mean_reference(const Matrix& rows);

struct BootstrapMaxima {
  std::vector<double> two_sided;  // max_j |sum_i z_ij e_i| * scale
  std::vector<double> one_sided;  // max_j  sum_i z_ij e_i  * scale
};

// Multiplier bootstrap maxima for B draws of i.i.d. N(0,1) multipliers e.
// Multiplier (draw k, row i) is counter_normal(seed, k, i).
BootstrapMaxima bootstrap_maxima(const Matrix& z, int draws, std::uint64_t seed, double scale);
BootstrapMaxima bootstrap_maxima_reference(const Matrix& z, int draws, std::uint64_t seed,
                                           double scale);

// Rows per reduction chunk; part of the determinism contract.
inline constexpr Index kChunkRows = 512;
inline constexpr int kChunkDraws = 64;

}  // namespace scoreinf::kernels
