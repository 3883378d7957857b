#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace streamkl {

// Labels for the independent random streams derived from one master seed.
// Keeping the streams separate means toggling one randomized component
// (e.g. subset sampling) never shifts the draws of another.
enum class RngStream : std::uint64_t {
  features = 1,
  collection = 2,
  subset = 3,
  synthetic = 4,
};

// splitmix64 step; used only for seed derivation.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t master, RngStream stream, std::uint64_t index = 0);

// mt19937_64 plus hand-rolled scalar conversions. The standard
// distributions (normal_distribution et al.) are implementation-defined,
// so every draw that must replay bit-for-bit across platforms goes
// through this class instead. Engine version tag: "mt19937_64/bm-v1".
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform();

  // Standard normal via Box-Muller (cosine branch, no cached twin, so the
  // generator state alone determines the sequence).
  double gaussian();

  // Uniform integer in [0, bound), rejection sampled (bound >= 1).
  std::uint64_t integer(std::uint64_t bound);

  std::string serialize() const;
  static Rng deserialize(const std::string& text);

  bool operator==(const Rng& other) const { return gen_ == other.gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace streamkl
