#pragma once
// Deterministic seeded randomness.  The generator is a xoshiro256** core seeded
// through splitmix64, with labeled substreams so adding randomness to one
// subsystem never perturbs another.  Distributions are hand-rolled (rejection
// sampling for integers, 53-bit mantissa for reals) because the std::uniform_*
// distributions are implementation-defined and would break bit-exact
// reproducibility across toolchains.

#include <cstdint>
#include <string>
#include <vector>

namespace mwumech {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  // Independent substream derived from (seed, label); identical labels yield
  // identical streams, distinct labels are decorrelated.
  SeededRng stream(const std::string &label) const;

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform_real();
  // Uniform integer in [lo, hi], inclusive, via rejection sampling.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Uniform real in [lo, hi).
  double uniform_double(double lo, double hi);
  // Index drawn from the given probability weights (must be non-negative and
  // sum to ~1; the final bucket absorbs rounding slack).
  int draw_categorical(const std::vector<double> &probs);

 private:
  SeededRng() = default;
  void seed_state(std::uint64_t seed);

  std::uint64_t seed_ = 0;
  std::uint64_t s_[4] = {0, 0, 0, 0};
};

}  // namespace mwumech
