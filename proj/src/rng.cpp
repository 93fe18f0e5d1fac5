#include "mwumech/rng.hpp"

#include "mwumech/core.hpp"

namespace mwumech {
namespace {

std::uint64_t splitmix64(std::uint64_t &state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string &s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

SeededRng::SeededRng(std::uint64_t seed) { seed_state(seed); }

void SeededRng::seed_state(std::uint64_t seed) {
  seed_ = seed;
  std::uint64_t sm = seed;
  for (auto &word : s_) word = splitmix64(sm);
}

SeededRng SeededRng::stream(const std::string &label) const {
  SeededRng out;
  std::uint64_t mix = seed_ ^ rotl(fnv1a(label), 17);
  out.seed_state(mix);
  return out;
}

std::uint64_t SeededRng::next_u64() {
  // xoshiro256**
  std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double SeededRng::uniform_real() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::int64_t SeededRng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) fail(errc::argument, "uniform_int: empty range");
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit range
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % span);
}

double SeededRng::uniform_double(double lo, double hi) {
  if (!(lo < hi)) fail(errc::argument, "uniform_double: empty range");
  return lo + (hi - lo) * uniform_real();
}

int SeededRng::draw_categorical(const std::vector<double> &probs) {
  if (probs.empty()) fail(errc::argument, "draw_categorical: empty weights");
  double u = uniform_real();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] < 0.0) fail(errc::argument, "draw_categorical: negative weight");
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace mwumech
