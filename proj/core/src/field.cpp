#include "homoeoid/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homoeoid
{
Box Box::cube(int n, double half_width)
{
    check_dimension(n);
    return {Vec::Constant(n, -half_width), Vec::Constant(n, half_width)};
}

Vec Box::sample(RngCursor& cur) const
{
    Vec y(lo.size());
    for (Eigen::Index j = 0; j < lo.size(); ++j)
        y[j] = cur.uniform(lo[j], hi[j]);
    return y;
}

//---------------------------------------------------------------------------//
Field::Field(Kind kind, Evaluator eval, Box box, std::optional<SupportSampler> support)
    : kind_(kind), eval_(std::move(eval)), box_(std::move(box)), support_(std::move(support))
{
    if (box_.lo.size() != box_.hi.size())
        throw std::invalid_argument("box corners differ in dimension");
    check_dimension(box_.dim());
    if (!(box_.hi.array() > box_.lo.array()).all())
        throw std::invalid_argument("box must have positive extent");
}

Field Field::closure(Evaluator f, Box box, std::optional<SupportSampler> support)
{
    if (!f)
        throw std::invalid_argument("closure field needs an evaluator");
    return Field(Kind::closure, std::move(f), std::move(box), std::move(support));
}

Field Field::constant(double c, Box box)
{
    return closure([c](Vec const&) { return c; }, std::move(box));
}

Field Field::grid(Box box, std::vector<int> shape, std::vector<double> values)
{
    int const n = box.dim();
    if (static_cast<int>(shape.size()) != n)
        throw std::invalid_argument("grid shape does not match box dimension");
    std::size_t total = 1;
    for (int s : shape)
    {
        if (s < 2)
            throw std::invalid_argument("grid needs at least 2 nodes per axis");
        total *= static_cast<std::size_t>(s);
    }
    if (values.size() != total)
        throw std::invalid_argument("grid value count does not match shape");

    auto data = std::make_shared<std::vector<double> const>(std::move(values));
    Evaluator eval = [box, shape, data, n](Vec const& y) {
        // Row-major nodes, last axis fastest.
        std::array<int, kMaxDim> base{};
        std::array<double, kMaxDim> frac{};
        for (int j = 0; j < n; ++j)
        {
            double const s = (y[j] - box.lo[j]) / (box.hi[j] - box.lo[j]) * (shape[j] - 1);
            int i = static_cast<int>(std::floor(s));
            i = std::clamp(i, 0, shape[j] - 2);
            base[j] = i;
            frac[j] = std::clamp(s - i, 0.0, 1.0);
        }
        double acc = 0;
        for (unsigned corner = 0; corner < (1u << n); ++corner)
        {
            double w = 1;
            std::size_t flat = 0;
            for (int j = 0; j < n; ++j)
            {
                bool const up = (corner >> j) & 1u;
                w *= up ? frac[j] : 1 - frac[j];
                flat = flat * shape[j] + base[j] + (up ? 1 : 0);
            }
            if (w != 0)
                acc += w * (*data)[flat];
        }
        return acc;
    };
    return Field(Kind::grid, std::move(eval), std::move(box), std::nullopt);
}

Field Field::scaled(double c) const
{
    Evaluator inner = eval_;
    Field out(kind_, [inner, c](Vec const& y) { return c * inner(y); }, box_, support_);
    return out;
}

//---------------------------------------------------------------------------//
double BumpMixture::operator()(Vec const& y) const
{
    double acc = 0;
    for (std::size_t i = 0; i < centres.size(); ++i)
    {
        double const s = widths[i];
        acc += weights[i] * std::exp(-(y - centres[i]).squaredNorm() / (2 * s * s));
    }
    return acc;
}

double BumpMixture::l2_norm_squared() const
{
    // Product of two Gaussians integrates in closed form.
    double total = 0;
    int const n = centres.empty() ? 0 : static_cast<int>(centres.front().size());
    for (std::size_t i = 0; i < centres.size(); ++i)
    {
        for (std::size_t j = 0; j < centres.size(); ++j)
        {
            double const a = 1 / (2 * widths[i] * widths[i]);
            double const b = 1 / (2 * widths[j] * widths[j]);
            double const d2 = (centres[i] - centres[j]).squaredNorm();
            total += weights[i] * weights[j] * std::pow(std::numbers::pi / (a + b), n / 2.0)
                     * std::exp(-a * b / (a + b) * d2);
        }
    }
    return total;
}

Field BumpMixture::field() const
{
    int const n = static_cast<int>(centres.front().size());
    double reach = 0;
    for (std::size_t i = 0; i < centres.size(); ++i)
        reach = std::max(reach, centres[i].cwiseAbs().maxCoeff() + 8 * widths[i]);
    BumpMixture copy = *this;
    return Field::closure([copy](Vec const& y) { return copy(y); }, Box::cube(n, reach));
}

BumpMixture random_bump_mixture(int n, int bumps, std::uint64_t seed)
{
    check_dimension(n);
    if (bumps < 1)
        throw std::invalid_argument("bump mixture needs at least one bump");
    RngCursor cur = CounterRng(seed, 0x62756d70ull).cursor(0);
    BumpMixture mix;
    for (int b = 0; b < bumps; ++b)
    {
        Vec c(n);
        for (int j = 0; j < n; ++j)
            c[j] = cur.uniform(-1, 1);
        mix.centres.push_back(c);
        mix.widths.push_back(cur.uniform(0.2, 0.5));
        mix.weights.push_back(cur.uniform(0.2, 1.0));
    }
    double const norm = std::sqrt(mix.l2_norm_squared());
    for (auto& w : mix.weights)
        w /= norm;
    return mix;
}

}  // namespace homoeoid
