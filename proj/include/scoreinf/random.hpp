#pragma once

#include <cstdint>
#include <random>

namespace scoreinf {

std::uint64_t splitmix64(std::uint64_t x);

// Seed of replication `index` under `master`; replications can be re-run
// individually.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Standard normal draw addressed by (seed, stream, index). Any evaluation order
// yields the same values, so parallel consumers stay reproducible.
double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Sequential generator used by the samplers. Uniform and normal conversions
// are done here rather than with <random> distributions so that streams are
// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace scoreinf
