#pragma once

#include <cstdint>
#include <random>

namespace derw {

// Deterministic random stream addressed by (seed, trial_index).
//
// Uniform doubles are built from the top 53 bits of mt19937_64 output
// instead of std::uniform_real_distribution, whose algorithm is
// implementation-defined; this keeps traces byte-identical across
// platforms and standard libraries.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed, std::uint64_t trial_index = 0)
      : seed_(seed), trial_(trial_index) {
    std::seed_seq seq{word(seed, 0), word(seed, 1), word(trial_index, 0),
                      word(trial_index, 1)};
    gen_.seed(seq);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::uint64_t next_u64() { return gen_(); }

  // Independent child stream; depends only on (seed, trial_index, index),
  // never on how much of this stream has been consumed.
  RngStream substream(std::uint64_t index) const {
    RngStream child(seed_, trial_);
    std::seed_seq seq{word(seed_, 0),  word(seed_, 1), word(trial_, 0),
                      word(trial_, 1), word(index, 0), word(index, 1),
                      0x9e3779b9u};
    child.gen_.seed(seq);
    return child;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t trial_index() const { return trial_; }

private:
  static std::uint32_t word(std::uint64_t v, int i) {
    return static_cast<std::uint32_t>(v >> (32 * i));
  }

  std::mt19937_64 gen_;
  std::uint64_t seed_;
  std::uint64_t trial_;
};

}  // namespace derw
