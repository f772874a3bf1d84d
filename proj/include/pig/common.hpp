#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pig {

// Reserved label value excluded from all losses and metrics.
inline constexpr std::uint8_t kIgnoreLabel = 255;

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {
inline void cat_impl(std::ostringstream&) {}
template <typename T, typename... Rest>
void cat_impl(std::ostringstream& oss, T&& head, Rest&&... rest) {
  oss << std::forward<T>(head);
  cat_impl(oss, std::forward<Rest>(rest)...);
}
}  // namespace detail

template <typename... Args>
std::string cat(Args&&... args) {
  std::ostringstream oss;
  detail::cat_impl(oss, std::forward<Args>(args)...);
  return oss.str();
}

template <typename... Args>
[[noreturn]] void fail(Args&&... args) {
  throw Error(cat(std::forward<Args>(args)...));
}

template <typename... Args>
void require(bool cond, Args&&... args) {
  if (!cond) fail(std::forward<Args>(args)...);
}

// Deterministic random stream. All stochastic decisions in the project go
// through this wrapper so that draws are reproducible from a serialized
// state, independent of the standard library's distribution internals.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1), 53-bit resolution
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // (0, 1): endpoints unattainable
  double uniform_open01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  int uniform_int(int n) {
    require(n > 0, "uniform_int: n must be positive, got ", n);
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % un;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return static_cast<int>(x % un);
  }

  bool coin() { return (gen_() & 1u) != 0; }

  // Box-Muller without caching so the stream state is the full state.
  double normal(double mean = 0.0, double stddev = 1.0) {
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * 3.14159265358979323846 * u2);
    return mean + stddev * z;
  }

  std::string serialize() const {
    std::ostringstream oss;
    oss << gen_;
    return oss.str();
  }

  void deserialize(const std::string& state) {
    std::istringstream iss(state);
    iss >> gen_;
    require(!iss.fail(), "Rng::deserialize: malformed state string");
  }

private:
  std::mt19937_64 gen_;
};

// Stable 64-bit mix for deriving per-item sub-seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace pig
