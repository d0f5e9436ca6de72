#pragma once

#include <array>
#include <cstdint>

#include "geometry.hpp"

namespace homoeoid
{
//! SplitMix64 finaliser; used for seed derivation only.
std::uint64_t mix64(std::uint64_t x);

//! Combine a base seed with tags into an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag1, std::uint64_t tag2);

class RngCursor;

//---------------------------------------------------------------------------//
/*!
 * Counter-based generator (Philox 4x32, 10 rounds).
 *
 * Output is a pure function of (seed, stream_id, substream, index): every
 * block is computed from its coordinates alone, so any partition of the work
 * across threads reproduces the same numbers.
 */
class CounterRng
{
  public:
    using Block = std::array<std::uint32_t, 4>;

    CounterRng(std::uint64_t seed, std::uint64_t stream_id);

    Block block(std::uint64_t index, std::uint64_t substream = 0) const;

    //! Uniform in [0, 1) at a flat position of substream 0 (two per block).
    double uniform(std::uint64_t index) const;

    RngCursor cursor(std::uint64_t substream) const;

  private:
    std::array<std::uint32_t, 2> key_;
};

//! Sequential reader over one substream of a CounterRng.
class RngCursor
{
  public:
    RngCursor(CounterRng rng, std::uint64_t substream);

    std::uint64_t next_u64();
    double uniform();  //!< [0, 1), 53 random bits
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();  //!< standard normal, Box-Muller
    Vec unit_vector(int n);  //!< uniform on S^{n-1}
    Vec gaussian_vector(int n);

    std::uint64_t position() const { return index_; }

  private:
    CounterRng rng_;
    std::uint64_t substream_;
    std::uint64_t index_{0};
    CounterRng::Block buf_{};
    int used_{4};
    double spare_normal_{0};
    bool has_spare_{false};

    std::uint32_t next_u32();
};

}  // namespace homoeoid
