#include "rmt/rng.hpp"

#include <cmath>
#include <string>

#include "rmt/error.hpp"

namespace rmt {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t tag) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ splitmix64(tag + 0x8cb92ba72f3d8dd7ULL));
  return h;
}

std::uint64_t stream_tag(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

EntryLaw parse_entry_law(std::string_view name) {
  if (name == "complex-gaussian") return EntryLaw::ComplexGaussian;
  if (name == "real-gaussian" || name == "gaussian") return EntryLaw::RealGaussian;
  if (name == "rademacher") return EntryLaw::Rademacher;
  if (name == "uniform") return EntryLaw::Uniform;
  if (name == "cauchy") return EntryLaw::Cauchy;
  throw InputError("unknown entry law '" + std::string(name) + "'");
}

std::string_view to_string(EntryLaw law) {
  switch (law) {
    case EntryLaw::ComplexGaussian: return "complex-gaussian";
    case EntryLaw::RealGaussian: return "real-gaussian";
    case EntryLaw::Rademacher: return "rademacher";
    case EntryLaw::Uniform: return "uniform";
    case EntryLaw::Cauchy: return "cauchy";
  }
  return "unknown";
}

bool is_complex(EntryLaw law) { return law == EntryLaw::ComplexGaussian; }

bool has_finite_variance(EntryLaw law) { return law != EntryLaw::Cauchy; }

double excess(EntryLaw law) {
  switch (law) {
    case EntryLaw::ComplexGaussian:
    case EntryLaw::RealGaussian: return 0.0;
    case EntryLaw::Rademacher: return 1.0 - 3.0;
    case EntryLaw::Uniform: return 9.0 / 5.0 - 3.0;  // uniform on [-sqrt3, sqrt3]
    case EntryLaw::Cauchy: break;
  }
  throw InputError("cauchy entries have no finite moments");
}

EntrySampler::EntrySampler(EntryLaw law, Engine& engine)
    : law_(law), engine_(engine), unit_(0.0, 1.0) {}

double EntrySampler::real() {
  switch (law_) {
    case EntryLaw::ComplexGaussian:
    case EntryLaw::RealGaussian: return normal_(engine_);
    case EntryLaw::Rademacher: return (engine_() >> 63) ? 1.0 : -1.0;
    case EntryLaw::Uniform: return std::sqrt(3.0) * (2.0 * unit_(engine_) - 1.0);
    case EntryLaw::Cauchy: return cauchy_(engine_);
  }
  return 0.0;
}

Complex EntrySampler::complex() {
  const double re = real();
  const double im = real();
  return Complex(re, im) * M_SQRT1_2;
}

}  // namespace rmt
