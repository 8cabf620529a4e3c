#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace docgroup {

// Deterministic RNG wrapper. All uniform derivations are done by hand on the
// raw mt19937_64 stream so outputs do not depend on the standard library's
// distribution implementations (which vary across toolchains).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform double in [0, 1), 53 bits of precision.
  double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform index in [0, n), rejection-sampled to avoid modulo bias.
  std::size_t next_index(std::size_t n);

  // Fisher-Yates shuffle driven by next_index.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[next_index(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

// Shortest decimal representation that round-trips the exact double value.
std::string format_double(double v);

// Formats integral values without a decimal point, everything else like
// format_double. Used for doc_count edge weights.
std::string format_weight(double v);

// Splits on a single-character delimiter; no quoting rules.
std::vector<std::string> split(const std::string& line, char delim);

// Drops a trailing '\r' (files written on Windows).
std::string strip_cr(std::string s);

bool parse_double(const std::string& s, double& out);
bool parse_int(const std::string& s, long long& out);

}  // namespace docgroup
