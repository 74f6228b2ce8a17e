#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ledp {

/// Stage tag that keys a noise stream. Distinct algorithm stages never share
/// draws, even at equal (node, round, draw) coordinates.
enum class NoiseTag : std::uint32_t {
  kKcoreThreshold = 1,
  kKcoreLevel = 2,
  kTriangleRr = 3,
  kTriangleOutDegree = 4,
  kTriangleLaplace = 5,
  kBaselineLevel = 6,
  kKcoreRr = 7,
  kTcountRr = 8,
  kRunDerive = 9,
  kTest = 100,
};

/// Full derivation context of one logical draw. A draw is a pure function of
/// (master seed, context), so results never depend on worker scheduling or
/// on how nodes are partitioned across workers. Node-scoped draws must not
/// mix a worker index into the context for exactly that reason.
struct NoiseContext {
  NoiseTag tag = NoiseTag::kTest;
  std::uint64_t node = 0;
  std::uint64_t round = 0;
  std::uint64_t draw = 0;
};

/// Counter-based generator: a keyed mixing function applied to the context.
/// Simulation-grade only; deployments would substitute a cryptographically
/// secure sampler behind the same interface.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// 64 uniform bits for (context, lane). Lanes give a sampler several
  /// independent words per logical draw.
  std::uint64_t bits(const NoiseContext& c, std::uint64_t lane) const;

  /// Uniform double strictly inside (0, 1).
  double uniform(const NoiseContext& c, std::uint64_t lane) const;

 private:
  std::uint64_t seed_;
};

/// Symmetric geometric distribution Geom(b): integer pmf
/// (e^b - 1)/(e^b + 1) * e^{-|i| b}. Sampled by sign + magnitude inverse-CDF
/// (magnitude ~ Geometric(1 - e^{-b})), so support is exact integers.
/// Throws std::invalid_argument for b <= 0.
std::int64_t sample_geom(double b, const NoiseStream& ns, const NoiseContext& c);

/// Laplace with *inverse* scale b: density (b/2) e^{-|x| b}, variance 2/b^2.
/// All call sites pass inverse scales (larger sensitivity => smaller b =>
/// more noise). Throws std::invalid_argument for b <= 0.
double sample_laplace(double inv_scale, const NoiseStream& ns, const NoiseContext& c);

/// Randomized-response flip probability 1/(e^eps + 1).
double rr_flip_probability(double eps);

/// Unbiases one randomized-response output bit:
/// (x (e^eps + 1) - 1) / (e^eps - 1). Expectation over the flip equals the
/// true bit.
double debias_edge_bit(int bit, double eps);

/// Bundles a stream with the noiseless debug switch. In noiseless mode every
/// mechanism is evaluated in its eps -> infinity limit: geometric and Laplace
/// draws are 0, response bits pass through unflipped, and debiasing is the
/// identity.
class Mechanisms {
 public:
  Mechanisms(std::uint64_t seed, bool noiseless)
      : stream_(seed), noiseless_(noiseless) {}

  bool noiseless() const { return noiseless_; }
  const NoiseStream& stream() const { return stream_; }

  std::int64_t geom(double b, const NoiseContext& c) const {
    return noiseless_ ? 0 : sample_geom(b, stream_, c);
  }
  double laplace(double inv_scale, const NoiseContext& c) const {
    return noiseless_ ? 0.0 : sample_laplace(inv_scale, stream_, c);
  }
  bool rr_flip(double eps, const NoiseContext& c) const {
    if (noiseless_) return false;
    return stream_.uniform(c, 0) < rr_flip_probability(eps);
  }
  double debias(int bit, double eps) const {
    return noiseless_ ? static_cast<double>(bit) : debias_edge_bit(bit, eps);
  }

 private:
  NoiseStream stream_;
  bool noiseless_;
};

/// Applies randomized response to one node's bit row: every bit is flipped
/// independently with probability 1/(e^eps + 1), and the output length
/// equals the input length. Bit i uses draw index first_draw + i under
/// (tag, row_owner), so a row can be regenerated bit-for-bit on demand.
std::vector<std::uint8_t> randomized_response_row(std::span<const std::uint8_t> row,
                                                  double eps, const Mechanisms& mech,
                                                  NoiseTag tag, std::uint64_t row_owner,
                                                  std::uint64_t first_draw);

/// Per-run seed derivation for repeated experiment runs.
std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index);

}  // namespace ledp
