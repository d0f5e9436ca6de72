#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "parallel.hpp"
#include "rng.hpp"

namespace homoeoid
{
//! Monte-Carlo result with its standard error.
struct MCEstimate
{
    double value{0};
    double std_error{0};
    std::uint64_t n_samples{0};
    std::uint64_t seed{0};
};

//! Running first and second moments; merged in a fixed order.
struct Moments
{
    double sum{0};
    double sum_sq{0};
    std::uint64_t count{0};

    void add(double v)
    {
        sum += v;
        sum_sq += v * v;
        ++count;
    }
    void merge(Moments const& other)
    {
        sum += other.sum;
        sum_sq += other.sum_sq;
        count += other.count;
    }
    double mean() const { return count ? sum / count : 0.0; }
    //! Sample standard deviation over sqrt(count).
    double std_error() const;
    MCEstimate estimate(std::uint64_t seed) const;
};

inline constexpr std::uint64_t kChunkSize = std::uint64_t{1} << 16;

//! Number of fixed-size chunks covering m samples.
inline std::uint64_t chunk_count(std::uint64_t m)
{
    return (m + kChunkSize - 1) / kChunkSize;
}

/*!
 * Mean of sample(cursor) over m draws.
 *
 * Chunk c reads substream c of CounterRng(seed, stream); chunk moments are
 * merged in chunk order.
 */
template<class F>
Moments chunked_moments(std::uint64_t m, std::uint64_t seed, std::uint64_t stream, F&& sample)
{
    CounterRng const rng(seed, stream);
    auto parts = parallel_map<Moments>(chunk_count(m), [&](std::size_t c) {
        RngCursor cur = rng.cursor(c);
        std::uint64_t const begin = c * kChunkSize;
        std::uint64_t const end = std::min(m, begin + kChunkSize);
        Moments acc;
        for (std::uint64_t i = begin; i < end; ++i)
            acc.add(sample(cur));
        return acc;
    });
    Moments total;
    for (auto const& p : parts)
        total.merge(p);
    return total;
}

template<class F>
MCEstimate mc_mean(std::uint64_t m, std::uint64_t seed, std::uint64_t stream, F&& sample)
{
    return chunked_moments(m, seed, stream, std::forward<F>(sample)).estimate(seed);
}

//---------------------------------------------------------------------------//
//! Least-squares line through log-log points.
struct ScalingFit
{
    double slope{0};
    double intercept{0};
    double max_abs_residual{0};
    std::vector<std::pair<double, double>> points;  //!< (ln x, ln y)
};

//! OLS on (ln x, ln y); needs >= 3 strictly positive points.
ScalingFit fit_power_law(std::span<std::pair<double, double> const> xy);

//! OLS on already-transformed coordinates.
ScalingFit fit_line(std::vector<std::pair<double, double>> uv);

}  // namespace homoeoid
