#include "streamkl/rng.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace streamkl {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, RngStream stream, std::uint64_t index) {
  return mix_seed(mix_seed(master, static_cast<std::uint64_t>(stream)), index);
}

double Rng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  // u1 in (0,1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t Rng::integer(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::integer: bound must be positive");
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = gen_();
  } while (draw >= limit);
  return draw % bound;
}

std::string Rng::serialize() const {
  std::ostringstream out;
  out << gen_;
  return out.str();
}

Rng Rng::deserialize(const std::string& text) {
  Rng rng(0);
  std::istringstream in(text);
  in >> rng.gen_;
  if (in.fail()) throw std::invalid_argument("Rng::deserialize: malformed state string");
  return rng;
}

}  // namespace streamkl
