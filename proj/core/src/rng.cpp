#include "homoeoid/rng.hpp"

#include <cmath>
#include <numbers>

namespace homoeoid
{
namespace
{
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    std::uint64_t const p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

CounterRng::Block philox10(CounterRng::Block ctr, std::array<std::uint32_t, 2> key)
{
    for (int round = 0; round < 10; ++round)
    {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

inline double to_unit(std::uint64_t bits)
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}
}  // namespace

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag)
{
    return mix64(seed ^ mix64(tag + 0x632BE59BD9B4E019ull));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag1, std::uint64_t tag2)
{
    return derive_seed(derive_seed(seed, tag1), tag2);
}

//---------------------------------------------------------------------------//
CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream_id)
{
    std::uint64_t const k = derive_seed(seed, stream_id);
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

CounterRng::Block CounterRng::block(std::uint64_t index, std::uint64_t substream) const
{
    return philox10({static_cast<std::uint32_t>(index),
                     static_cast<std::uint32_t>(index >> 32),
                     static_cast<std::uint32_t>(substream),
                     static_cast<std::uint32_t>(substream >> 32)},
                    key_);
}

double CounterRng::uniform(std::uint64_t index) const
{
    Block const b = block(index / 2, 0);
    std::size_t const h = 2 * (index % 2);
    return to_unit((static_cast<std::uint64_t>(b[h]) << 32) | b[h + 1]);
}

RngCursor CounterRng::cursor(std::uint64_t substream) const
{
    return RngCursor(*this, substream);
}

//---------------------------------------------------------------------------//
RngCursor::RngCursor(CounterRng rng, std::uint64_t substream)
    : rng_(rng), substream_(substream)
{
}

std::uint32_t RngCursor::next_u32()
{
    if (used_ == 4)
    {
        buf_ = rng_.block(index_++, substream_);
        used_ = 0;
    }
    return buf_[used_++];
}

std::uint64_t RngCursor::next_u64()
{
    std::uint64_t const hi = next_u32();
    return (hi << 32) | next_u32();
}

double RngCursor::uniform()
{
    return to_unit(next_u64());
}

double RngCursor::normal()
{
    if (has_spare_)
    {
        has_spare_ = false;
        return spare_normal_;
    }
    double const u1 = 1.0 - uniform();  // (0, 1]
    double const u2 = uniform();
    double const radius = std::sqrt(-2.0 * std::log(u1));
    double const angle = 2 * std::numbers::pi * u2;
    spare_normal_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Vec RngCursor::gaussian_vector(int n)
{
    Vec v(n);
    for (int j = 0; j < n; ++j)
        v[j] = normal();
    return v;
}

Vec RngCursor::unit_vector(int n)
{
    for (;;)
    {
        Vec v = gaussian_vector(n);
        double const norm = v.norm();
        if (norm > 1e-300)
            return v / norm;
    }
}

}  // namespace homoeoid
