#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace rmt {

using Engine = std::mt19937_64;
using Complex = std::complex<double>;

/// Child seed for (seed, trial index, stream tag). Pure function of its inputs,
/// so trials can be run in any order or concurrently.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t tag = 0);

/// Stable 64-bit tag for a named random stream.
std::uint64_t stream_tag(std::string_view name);

/// Entry distributions. All except Cauchy are standardized to mean 0 and
/// variance 1 as real variables; Cauchy is the standard Cauchy law.
enum class EntryLaw { ComplexGaussian, RealGaussian, Rademacher, Uniform, Cauchy };

EntryLaw parse_entry_law(std::string_view name);
std::string_view to_string(EntryLaw law);

bool is_complex(EntryLaw law);
bool has_finite_variance(EntryLaw law);

/// E x^4 - 3 (E x^2)^2 of the standardized real variate.
double excess(EntryLaw law);

class EntrySampler {
 public:
  EntrySampler(EntryLaw law, Engine& engine);

  /// Standardized real variate. ComplexGaussian draws its real Gaussian part.
  double real();

  /// E|x|^2 = 1 and E x^2 = 0: independent real and imaginary parts, each
  /// drawn from the law and scaled by 1/sqrt(2).
  Complex complex();

 private:
  EntryLaw law_;
  Engine& engine_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> unit_;
  std::cauchy_distribution<double> cauchy_;
};

}  // namespace rmt
