#include "ledp/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace ledp {

namespace {

// splitmix64 finalizer; two passes over the keyed context words give
// statistically solid (non-cryptographic) output.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t NoiseStream::bits(const NoiseContext& c, std::uint64_t lane) const {
  std::uint64_t h = seed_;
  h = mix64(h ^ (static_cast<std::uint64_t>(c.tag) * 0xd6e8feb86659fd93ULL));
  h = mix64(h ^ (c.node * 0xa0761d6478bd642fULL));
  h = mix64(h ^ (c.round * 0xe7037ed1a0b428dbULL));
  h = mix64(h ^ (c.draw * 0x8ebc6af09c88c6e3ULL));
  h = mix64(h ^ (lane * 0x589965cc75374cc3ULL));
  return h;
}

double NoiseStream::uniform(const NoiseContext& c, std::uint64_t lane) const {
  // 53 random bits centered in (0, 1); never returns an exact endpoint.
  return (static_cast<double>(bits(c, lane) >> 11) + 0.5) * 0x1.0p-53;
}

std::int64_t sample_geom(double b, const NoiseStream& ns, const NoiseContext& c) {
  if (!(b > 0)) throw std::invalid_argument("Geom(b) requires b > 0");
  const double q = std::exp(-b);
  const double p_zero = (1.0 - q) / (1.0 + q);
  const double u = ns.uniform(c, 0);
  if (u < p_zero) return 0;
  // Remaining mass splits evenly between signs.
  const int sign = u < p_zero + (1.0 - p_zero) / 2.0 ? 1 : -1;
  const double v = ns.uniform(c, 1);
  // Magnitude ~ Geometric(1 - q) on {1, 2, ...} by inverse CDF.
  auto k = static_cast<std::int64_t>(std::ceil(std::log(v) / -b));
  if (k < 1) k = 1;
  return sign * k;
}

double sample_laplace(double inv_scale, const NoiseStream& ns, const NoiseContext& c) {
  if (!(inv_scale > 0)) throw std::invalid_argument("Laplace requires inv_scale > 0");
  const double u = ns.uniform(c, 0);
  const double mag = -std::log(ns.uniform(c, 1)) / inv_scale;
  return u < 0.5 ? -mag : mag;
}

double rr_flip_probability(double eps) { return 1.0 / (std::exp(eps) + 1.0); }

std::vector<std::uint8_t> randomized_response_row(std::span<const std::uint8_t> row,
                                                  double eps, const Mechanisms& mech,
                                                  NoiseTag tag, std::uint64_t row_owner,
                                                  std::uint64_t first_draw) {
  std::vector<std::uint8_t> out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    const bool flip = mech.rr_flip(eps, {tag, row_owner, 0, first_draw + i});
    out[i] = row[i] ^ static_cast<std::uint8_t>(flip);
  }
  return out;
}

double debias_edge_bit(int bit, double eps) {
  return (bit * (std::exp(eps) + 1.0) - 1.0) / (std::exp(eps) - 1.0);
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index) {
  NoiseStream ns(master_seed);
  return ns.bits({NoiseTag::kRunDerive, run_index, 0, 0}, 0);
}

}  // namespace ledp
