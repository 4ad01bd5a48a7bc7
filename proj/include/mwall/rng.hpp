#ifndef MWALL_RNG_HPP
#define MWALL_RNG_HPP

#include <cstdint>
#include <random>

#include "mwall/rational.hpp"

namespace mwall {

// Deterministic sampling helpers. Raw mt19937_64 output is reduced by modulo
// on purpose: std::uniform_int_distribution is implementation-defined and
// would break byte-identical reports across standard libraries. The slight
// modulo bias is irrelevant for test-point generation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform-ish integer in [lo, hi] (inclusive).
  long integer(long lo, long hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<long>(raw() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Rational with numerator in [-num_mag, num_mag] and denominator in [1, den_mag].
  Rat rational(long num_mag, long den_mag) {
    Rat q(integer(-num_mag, num_mag), integer(1, den_mag));
    q.canonicalize();
    return q;
  }

  // Positive rational in (0, num_mag].
  Rat positive_rational(long num_mag, long den_mag) {
    Rat q(integer(1, num_mag), integer(1, den_mag));
    q.canonicalize();
    return q;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace mwall

#endif  // MWALL_RNG_HPP
