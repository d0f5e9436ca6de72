#include "homoeoid/estimate.hpp"

#include <cmath>
#include <stdexcept>

namespace homoeoid
{
double Moments::std_error() const
{
    if (count < 2)
        return 0.0;
    double const n = static_cast<double>(count);
    double const mean = sum / n;
    double const var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
    return std::sqrt(var / n);
}

MCEstimate Moments::estimate(std::uint64_t seed) const
{
    return {mean(), std_error(), count, seed};
}

ScalingFit fit_line(std::vector<std::pair<double, double>> uv)
{
    if (uv.size() < 3)
        throw std::invalid_argument("a scaling fit needs at least 3 points");
    double const n = static_cast<double>(uv.size());
    double su = 0, sv = 0;
    for (auto const& [u, v] : uv)
    {
        su += u;
        sv += v;
    }
    double const mu = su / n, mv = sv / n;
    double suu = 0, suv = 0;
    for (auto const& [u, v] : uv)
    {
        suu += (u - mu) * (u - mu);
        suv += (u - mu) * (v - mv);
    }
    if (!(suu > 0))
        throw std::invalid_argument("scaling fit abscissae are all equal");

    ScalingFit fit;
    fit.slope = suv / suu;
    fit.intercept = mv - fit.slope * mu;
    for (auto const& [u, v] : uv)
    {
        fit.max_abs_residual
            = std::max(fit.max_abs_residual, std::abs(v - fit.intercept - fit.slope * u));
    }
    fit.points = std::move(uv);
    return fit;
}

ScalingFit fit_power_law(std::span<std::pair<double, double> const> xy)
{
    std::vector<std::pair<double, double>> uv;
    uv.reserve(xy.size());
    for (auto const& [x, y] : xy)
    {
        if (!(x > 0) || !(y > 0))
            throw std::invalid_argument("power-law fit needs positive coordinates");
        uv.emplace_back(std::log(x), std::log(y));
    }
    return fit_line(std::move(uv));
}

}  // namespace homoeoid
