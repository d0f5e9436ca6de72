#include "homoeoid/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "homoeoid/parallel.hpp"
#include "homoeoid/rng.hpp"

namespace homoeoid
{
namespace
{
using Rational = boost::multiprecision::cpp_rational;

template<class S>
using Dense = std::vector<std::vector<S>>;

template<class S>
bool is_zero(S const& v)
{
    return v == S(0);
}

// Hand-rolled elimination; the Eigen LU is the other side of each check.
template<class S>
S gauss_det(Dense<S> m)
{
    std::size_t const n = m.size();
    S det(1);
    for (std::size_t c = 0; c < n; ++c)
    {
        std::size_t piv = c;
        if constexpr (std::is_floating_point_v<S>)
        {
            for (std::size_t r = c + 1; r < n; ++r)
                if (std::abs(m[r][c]) > std::abs(m[piv][c]))
                    piv = r;
        }
        else
        {
            while (piv < n && is_zero(m[piv][c]))
                ++piv;
            if (piv == n)
                return S(0);
        }
        if (is_zero(m[piv][c]))
            return S(0);
        if (piv != c)
        {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r)
        {
            S const f = m[r][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j)
                m[r][j] -= f * m[c][j];
        }
    }
    return det;
}

// Solves W X = C column by column with partial pivoting.
template<class S>
Dense<S> gauss_solve(Dense<S> w, Dense<S> c)
{
    std::size_t const n = w.size();
    std::size_t const cols = c.empty() ? 0 : c.front().size();
    for (std::size_t k = 0; k < n; ++k)
    {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; ++r)
        {
            if constexpr (std::is_floating_point_v<S>)
            {
                if (std::abs(w[r][k]) > std::abs(w[piv][k]))
                    piv = r;
            }
            else if (is_zero(w[piv][k]))
            {
                piv = r;
            }
        }
        std::swap(w[piv], w[k]);
        std::swap(c[piv], c[k]);
        if (is_zero(w[k][k]))
            throw std::runtime_error("singular block");
        for (std::size_t r = k + 1; r < n; ++r)
        {
            S const f = w[r][k] / w[k][k];
            for (std::size_t j = k; j < n; ++j)
                w[r][j] -= f * w[k][j];
            for (std::size_t j = 0; j < cols; ++j)
                c[r][j] -= f * c[k][j];
        }
    }
    Dense<S> x(n, std::vector<S>(cols, S(0)));
    for (std::size_t kk = n; kk-- > 0;)
    {
        for (std::size_t j = 0; j < cols; ++j)
        {
            S acc = c[kk][j];
            for (std::size_t i = kk + 1; i < n; ++i)
                acc -= w[kk][i] * x[i][j];
            x[kk][j] = acc / w[kk][kk];
        }
    }
    return x;
}

template<class S>
S residual_of(S const& lhs, S const& rhs)
{
    S scale(1);
    S const al = lhs < S(0) ? S(-lhs) : lhs;
    S const ar = rhs < S(0) ? S(-rhs) : rhs;
    scale = std::max(scale, std::max(al, ar));
    S const diff = lhs - rhs;
    return (diff < S(0) ? S(-diff) : diff) / scale;
}

double to_double(Rational const& q)
{
    return q.convert_to<double>();
}

template<class S>
S int_pow(S base, int e)
{
    S out(1);
    for (int i = 0; i < e; ++i)
        out *= base;
    return out;
}

double det_lu(Mat const& m)
{
    return Eigen::MatrixXd(m).partialPivLu().determinant();
}

template<class S>
std::string describe(std::vector<S> const& values)
{
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < values.size(); ++i)
        os << (i ? "," : "") << values[i];
    os << ')';
    return os.str();
}

//---------------------------------------------------------------------------//
// Random inputs (omega, t, r, d_tilde) for the tangency identities.
template<class S>
struct TangencyInput
{
    int k;  // 0-based
    std::vector<S> omega, r, d;
    S t;

    std::string text() const
    {
        std::ostringstream os;
        os.precision(17);
        os << "k=" << k + 1 << " t=" << t << " omega=" << describe(omega) << " r=" << describe(r)
           << " d=" << describe(d);
        return os.str();
    }
};

TangencyInput<double> float_input(int n, RngCursor& cur)
{
    TangencyInput<double> in;
    in.k = static_cast<int>(cur.uniform() * n) % n;
    double const cn = default_cn(n);
    in.t = cur.uniform(0.05, 2);
    for (int j = 0; j < n; ++j)
    {
        in.omega.push_back(cur.uniform(-1, 1));
        in.r.push_back(cur.uniform(0.5, 2));
        double const base = j == in.k ? 0.0 : 1.0;
        in.d.push_back(base + cur.uniform(-1, 1) * cn * cn);
    }
    return in;
}

Rational small_rational(RngCursor& cur, int num_lo, int num_hi, int den_hi)
{
    auto const span = static_cast<std::uint64_t>(num_hi - num_lo + 1);
    auto const num = num_lo + static_cast<int>(cur.next_u64() % span);
    auto const den = 1 + static_cast<int>(cur.next_u64() % static_cast<std::uint64_t>(den_hi));
    return Rational(num, den);
}

TangencyInput<Rational> rational_input(int n, RngCursor& cur)
{
    TangencyInput<Rational> in;
    in.k = static_cast<int>(cur.next_u64() % static_cast<std::uint64_t>(n));
    in.t = small_rational(cur, 1, 20, 10);
    for (int j = 0; j < n; ++j)
    {
        in.omega.push_back(small_rational(cur, -9, 9, 9));
        in.r.push_back(small_rational(cur, 5, 20, 10));
        Rational const base = j == in.k ? Rational(0) : Rational(1);
        in.d.push_back(base + small_rational(cur, -3, 3, 1000));
    }
    return in;
}

template<class S>
S minor_of(TangencyInput<S> const& in, std::size_t i, std::size_t j, std::vector<S> const& omega)
{
    return tangency_minor<S>(i,
                             j,
                             std::span<S const>(omega.data(), omega.size()),
                             in.t,
                             std::span<S const>(in.r.data(), in.r.size()),
                             std::span<S const>(in.d.data(), in.d.size()));
}

template<class S>
S syzygy_residual(TangencyInput<S> const& in)
{
    auto const n = in.omega.size();
    auto const k = static_cast<std::size_t>(in.k);
    S worst(0);
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < n; ++j)
        {
            if (i == j)
                continue;
            S const lhs = in.omega[k] * minor_of(in, i, j, in.omega);
            S const rhs = in.omega[j] * minor_of(in, i, k, in.omega)
                          - in.omega[i] * minor_of(in, j, k, in.omega);
            worst = std::max(worst, residual_of(lhs, rhs));
        }
    }
    return worst;
}

// G is affine in each single coordinate, so a central difference is exact
// up to rounding for any step.
template<class S>
S partial_of(TangencyInput<S> const& in, std::size_t j, std::size_t var, S const& step)
{
    auto plus = in.omega, minus = in.omega;
    plus[var] += step;
    minus[var] -= step;
    auto const k = static_cast<std::size_t>(in.k);
    return (minor_of(in, j, k, plus) - minor_of(in, j, k, minus)) / (S(2) * step);
}

template<class S>
S derivative_residual(TangencyInput<S> const& in, S const& step)
{
    auto const n = in.omega.size();
    auto const k = static_cast<std::size_t>(in.k);
    S worst(0);
    for (std::size_t j = 0; j < n; ++j)
    {
        if (j == k)
            continue;
        S const g = minor_of(in, j, k, in.omega);
        S const rj2 = in.r[j] * in.r[j];
        S const rk2 = in.r[k] * in.r[k];
        S const lhs_j = in.omega[j] * partial_of(in, j, j, step);
        S const rhs_j = g - in.t * in.d[j] * in.omega[k] / rj2;
        S const lhs_k = in.omega[k] * partial_of(in, j, k, step);
        S const rhs_k = g + in.t * in.d[k] * in.omega[j] / rk2;
        worst = std::max(worst, residual_of(lhs_j, rhs_j));
        worst = std::max(worst, residual_of(lhs_k, rhs_k));
    }
    return worst;
}

template<class S>
Dense<S> block_matrix(TangencyInput<S> const& in)
{
    auto const n = in.omega.size();
    auto const k = static_cast<std::size_t>(in.k);
    Dense<S> a(n, std::vector<S>(n, S(0)));
    std::size_t row = 0;
    for (std::size_t j = 0; j < n; ++j)
    {
        if (j == k)
            continue;
        a[row][j] = -in.t * in.d[j] * in.omega[k];
        a[row][k] = in.t * in.d[k] * in.omega[j];
        ++row;
    }
    for (std::size_t i = 0; i < n; ++i)
        a[n - 1][i] = in.r[i] * in.r[i] * in.omega[i] * in.omega[i];
    return a;
}

template<class S>
S block_closed_form(TangencyInput<S> const& in)
{
    auto const n = in.omega.size();
    auto const k = static_cast<std::size_t>(in.k);
    S sum(0);
    for (std::size_t j = 0; j < n; ++j)
    {
        S prod(1);
        for (std::size_t i = 0; i < n; ++i)
            if (i != j)
                prod *= in.d[i];
        sum += prod * in.r[j] * in.r[j] * int_pow(in.omega[j], 3);
    }
    S const sign = k % 2 == 0 ? S(1) : S(-1);
    return sign * int_pow(in.t, static_cast<int>(n) - 1) * int_pow(in.omega[k], static_cast<int>(n) - 2)
           * sum;
}

Mat to_mat(Dense<double> const& a)
{
    auto const n = static_cast<int>(a.size());
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = a[i][j];
    return m;
}

template<class S>
Dense<S> circulant(int n, S const& a)
{
    Dense<S> m(n, std::vector<S>(n, S(1)));
    for (int i = 0; i < n; ++i)
        m[i][i] = a;
    return m;
}

template<class S>
S circulant_formula(int n, S const& a)
{
    return int_pow(S(a - S(1)), n - 1) * (a + S(n - 1));
}

// Schur complement: det M = det W det(A - B W^{-1} C), p + q split.
template<class S>
S schur_rhs(Dense<S> const& m, std::size_t p)
{
    std::size_t const n = m.size();
    std::size_t const q = n - p;
    Dense<S> a(p, std::vector<S>(p)), b(p, std::vector<S>(q)), c(q, std::vector<S>(p)),
        w(q, std::vector<S>(q));
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < n; ++j)
        {
            if (i < p && j < p)
                a[i][j] = m[i][j];
            else if (i < p)
                b[i][j - p] = m[i][j];
            else if (j < p)
                c[i - p][j] = m[i][j];
            else
                w[i - p][j - p] = m[i][j];
        }
    }
    Dense<S> const x = gauss_solve(w, c);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t l = 0; l < q; ++l)
                a[i][j] -= b[i][l] * x[l][j];
    return gauss_det(w) * gauss_det(a);
}

double condition_number(Dense<double> const& w)
{
    Eigen::MatrixXd m(w.size(), w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w[i][j];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    auto const& s = svd.singularValues();
    return s[s.size() - 1] > 0 ? s[0] / s[s.size() - 1] : INFINITY;
}

struct Partial
{
    double residual{0};
    std::string input;
};

// Runs trials in parallel and keeps the worst residual.
template<class F>
IdentityReport run_trials(std::string name, std::size_t trials, bool exact, F&& trial)
{
    auto const parts = parallel_map<Partial>(trials, trial);
    IdentityReport rep;
    rep.name = std::move(name);
    rep.exact = exact;
    for (auto const& p : parts)
        rep.record(p.residual, p.input);
    return rep;
}
}  // namespace

//---------------------------------------------------------------------------//
void IdentityReport::record(double residual, std::string const& input)
{
    ++trials;
    if (trials == 1 || residual > max_relative_residual)
    {
        max_relative_residual = residual;
        worst_case_input = input;
    }
}

double relative_residual(double lhs, double rhs)
{
    return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

double circulant_closed_form(int n, double a)
{
    if (n < 1)
        throw std::invalid_argument("circulant needs n >= 1");
    return circulant_formula(n, a);
}

IdentityReport circulant_det_check(std::vector<int> const& n_list, int a_samples, std::uint64_t seed)
{
    IdentityReport rep;
    rep.name = "circulant_det";
    for (int n : n_list)
    {
        if (n < 2)
            throw std::invalid_argument("circulant check needs n >= 2");
        RngCursor cur = CounterRng(seed, static_cast<std::uint64_t>(n)).cursor(0);
        for (int s = 0; s < a_samples; ++s)
        {
            double const a = cur.uniform(-10, 10);
            double const lhs = det_lu(to_mat(circulant(n, a)));
            double const rhs = circulant_closed_form(n, a);
            std::ostringstream os;
            os.precision(17);
            os << "n=" << n << " a=" << a;
            rep.record(relative_residual(lhs, rhs), os.str());
        }
    }
    return rep;
}

IdentityReport circulant_det_check_exact(std::vector<int> const& n_list, int a_samples, std::uint64_t seed)
{
    IdentityReport rep;
    rep.name = "circulant_det";
    rep.exact = true;
    for (int n : n_list)
    {
        if (n < 2)
            throw std::invalid_argument("circulant check needs n >= 2");
        RngCursor cur = CounterRng(seed, 0x100u + static_cast<std::uint64_t>(n)).cursor(0);
        for (int s = 0; s < a_samples; ++s)
        {
            Rational const a = small_rational(cur, -100, 100, 10);
            Rational const lhs = gauss_det(circulant(n, a));
            Rational const rhs = circulant_formula(n, a);
            std::ostringstream os;
            os << "n=" << n << " a=" << a;
            rep.record(to_double(residual_of(lhs, rhs)), os.str());
        }
    }
    return rep;
}

//---------------------------------------------------------------------------//
Mat displayed_tangency_jacobian(Radii const& r)
{
    Vec const& v = r.values();
    int const n = r.dim();
    double const norm3 = std::pow(v.norm(), 3);
    double cubes = 0;
    for (int j = 0; j < n; ++j)
        cubes += v[j] * v[j] * v[j];
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
    {
        for (int j = 0; j < n; ++j)
        {
            m(i, j) = i == j ? 2 * cubes - v[i] * v[i] * v[i] : -v[i] * v[i] * v[j];
            m(i, j) /= norm3;
        }
    }
    return m;
}

double displayed_symmetric_determinant(int n, double r)
{
    double const sign = n % 2 == 0 ? 1.0 : -1.0;
    return sign * std::pow(r, 3.0 * (n - 1)) * std::pow(n, -1.5)
           * circulant_closed_form(n, -(2.0 * n - 1));
}

Mat finite_difference_tangency_jacobian(Radii const& r, double step)
{
    int const n = r.dim();
    Vec const& v = r.values();
    auto central = [&](int j, double h) {
        Vec const e = h * Vec::Unit(n, j);
        Vec const plus = v + e;
        Vec const minus = v - e;
        return Vec((tangency_map(Radii(plus)) - tangency_map(Radii(minus))) / (2 * h));
    };
    Mat m(n, n);
    for (int j = 0; j < n; ++j)
    {
        Vec const coarse = central(j, step);
        Vec const fine = central(j, step / 2);
        m.col(j) = (4 * fine - coarse) / 3;
    }
    return m;
}

namespace
{
// Direct derivative of r^2 / |r| written from scratch.
Mat analytic_tangency_jacobian(Radii const& r)
{
    Vec const& v = r.values();
    int const n = r.dim();
    double const norm = v.norm();
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = (i == j ? 2 * v[i] / norm : 0.0) - v[i] * v[i] * v[j] / (norm * norm * norm);
    return m;
}

double max_entry_gap(Mat const& a, Mat const& b)
{
    return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}
}  // namespace

std::vector<JacobianCheck>
appendix_jacobian_check(std::vector<int> const& n_list, int r_samples, std::uint64_t seed)
{
    std::vector<JacobianCheck> out;
    for (int n : n_list)
    {
        if (n < 2)
            throw std::invalid_argument("jacobian check needs n >= 2");
        check_dimension(n);
        JacobianCheck c{};
        c.n = n;
        c.det_at_one = det_lu(finite_difference_tangency_jacobian(Radii::constant(n, 1)));
        c.det_at_three_halves = det_lu(finite_difference_tangency_jacobian(Radii::constant(n, 1.5)));
        for (double s : {1.0, 1.5, 2.0})
        {
            Radii const rr = Radii::constant(n, s);
            Mat const fd = finite_difference_tangency_jacobian(rr);
            c.homogeneity_residual = std::max(c.homogeneity_residual, std::abs(det_lu(fd) - c.det_at_one));
            c.display_symmetric_residual
                = std::max(c.display_symmetric_residual, max_entry_gap(displayed_tangency_jacobian(rr), fd));
        }
        RngCursor cur = CounterRng(seed, static_cast<std::uint64_t>(n)).cursor(0);
        for (int s = 0; s < r_samples; ++s)
        {
            Vec v(n);
            for (int j = 0; j < n; ++j)
                v[j] = cur.uniform(1, 2);
            Radii const rr(v);
            Mat const fd = finite_difference_tangency_jacobian(rr);
            c.analytic_residual = std::max(c.analytic_residual, max_entry_gap(analytic_tangency_jacobian(rr), fd));
            c.display_generic_residual
                = std::max(c.display_generic_residual, max_entry_gap(displayed_tangency_jacobian(rr), fd));
        }
        c.displayed_det_at_one = displayed_symmetric_determinant(n, 1);
        c.predicted_det_at_one = std::pow(2.0, n - 1) * std::pow(n, -0.5 * n);
        out.push_back(c);
    }
    return out;
}

//---------------------------------------------------------------------------//
Mat tangency_block_matrix(TangencyConfig const& cfg, Vec const& omega)
{
    int const n = cfg.dim();
    if (omega.size() != n)
        throw std::invalid_argument("dimension mismatch");
    TangencyInput<double> in;
    in.k = cfg.axis() - 1;
    in.t = cfg.t();
    for (int j = 0; j < n; ++j)
    {
        in.omega.push_back(omega[j]);
        in.r.push_back(cfg.radii()[j]);
        in.d.push_back(cfg.frame().d_tilde[j]);
    }
    return to_mat(block_matrix(in));
}

double tangency_block_determinant(TangencyConfig const& cfg, Vec const& omega)
{
    int const n = cfg.dim();
    if (omega.size() != n)
        throw std::invalid_argument("dimension mismatch");
    TangencyInput<double> in;
    in.k = cfg.axis() - 1;
    in.t = cfg.t();
    for (int j = 0; j < n; ++j)
    {
        in.omega.push_back(omega[j]);
        in.r.push_back(cfg.radii()[j]);
        in.d.push_back(cfg.frame().d_tilde[j]);
    }
    return block_closed_form(in);
}

std::vector<IdentityReport> identity_suite(IdentitySuiteConfig const& cfg)
{
    if (cfg.trials < 1)
        throw std::invalid_argument("identity suite needs trials >= 1");
    for (int n : cfg.n_list)
    {
        if (n < 2)
            throw std::invalid_argument("identity suite needs n >= 2");
        check_dimension(n);
    }
    std::size_t const dims = cfg.n_list.size();
    auto const trials = static_cast<std::size_t>(cfg.trials);
    std::size_t const total = dims * trials;
    auto cursor_for = [&](std::uint64_t tag, std::size_t idx) {
        return CounterRng(derive_seed(cfg.seed, tag), idx).cursor(0);
    };
    auto dim_of = [&](std::size_t idx) { return cfg.n_list[idx % dims]; };

    std::vector<IdentityReport> out;
    out.push_back(circulant_det_check(cfg.n_list, cfg.trials, derive_seed(cfg.seed, 1)));

    out.push_back(run_trials("syzygy", total, false, [&](std::size_t idx) {
        RngCursor cur = cursor_for(2, idx);
        auto const in = float_input(dim_of(idx), cur);
        return Partial{syzygy_residual(in), in.text()};
    }));
    out.push_back(run_trials("derivative", total, false, [&](std::size_t idx) {
        RngCursor cur = cursor_for(3, idx);
        auto const in = float_input(dim_of(idx), cur);
        return Partial{derivative_residual(in, 0.25), in.text()};
    }));
    out.push_back(run_trials("schur", total, false, [&](std::size_t idx) {
        RngCursor cur = cursor_for(4, idx);
        int const n = dim_of(idx);
        auto const p = 1 + (idx / dims) % static_cast<std::size_t>(n - 1);
        Dense<double> m(n, std::vector<double>(n));
        for (int attempt = 0;; ++attempt)
        {
            for (auto& row : m)
                for (auto& v : row)
                    v = cur.uniform(-1, 1);
            Dense<double> w(n - p, std::vector<double>(n - p));
            for (std::size_t i = p; i < static_cast<std::size_t>(n); ++i)
                for (std::size_t j = p; j < static_cast<std::size_t>(n); ++j)
                    w[i - p][j - p] = m[i][j];
            if (condition_number(w) <= 1e6)
                break;
            if (attempt > 1000)
                throw std::runtime_error("no well-conditioned block found");
        }
        std::ostringstream os;
        os << "n=" << n << " split=" << p << "+" << n - p;
        return Partial{relative_residual(det_lu(to_mat(m)), schur_rhs(m, p)), os.str()};
    }));
    out.push_back(run_trials("block_det", total, false, [&](std::size_t idx) {
        RngCursor cur = cursor_for(5, idx);
        auto const in = float_input(dim_of(idx), cur);
        return Partial{relative_residual(det_lu(to_mat(block_matrix(in))), block_closed_form(in)), in.text()};
    }));

    std::vector<int> small;
    for (int n : cfg.n_list)
        if (n <= cfg.exact_max_n)
            small.push_back(n);
    if (small.empty() || cfg.exact_trials < 1)
        return out;
    auto const exact_total = small.size() * static_cast<std::size_t>(cfg.exact_trials);
    auto small_dim = [&](std::size_t idx) { return small[idx % small.size()]; };

    out.push_back(circulant_det_check_exact(small, cfg.exact_trials, derive_seed(cfg.seed, 6)));
    out.push_back(run_trials("syzygy", exact_total, true, [&](std::size_t idx) {
        RngCursor cur = cursor_for(7, idx);
        auto const in = rational_input(small_dim(idx), cur);
        return Partial{to_double(syzygy_residual(in)), in.text()};
    }));
    out.push_back(run_trials("derivative", exact_total, true, [&](std::size_t idx) {
        RngCursor cur = cursor_for(8, idx);
        auto const in = rational_input(small_dim(idx), cur);
        return Partial{to_double(derivative_residual(in, Rational(1, 3))), in.text()};
    }));
    out.push_back(run_trials("schur", exact_total, true, [&](std::size_t idx) {
        RngCursor cur = cursor_for(9, idx);
        int const n = small_dim(idx);
        auto const p = 1 + (idx / small.size()) % static_cast<std::size_t>(n - 1);
        Dense<Rational> m(n, std::vector<Rational>(n));
        for (;;)
        {
            for (auto& row : m)
                for (auto& v : row)
                    v = small_rational(cur, -9, 9, 9);
            Dense<Rational> w(n - p, std::vector<Rational>(n - p));
            for (std::size_t i = p; i < static_cast<std::size_t>(n); ++i)
                for (std::size_t j = p; j < static_cast<std::size_t>(n); ++j)
                    w[i - p][j - p] = m[i][j];
            if (!is_zero(gauss_det(w)))
                break;
        }
        std::ostringstream os;
        os << "n=" << n << " split=" << p << "+" << n - p;
        return Partial{to_double(residual_of(gauss_det(m), schur_rhs(m, p))), os.str()};
    }));
    out.push_back(run_trials("block_det", exact_total, true, [&](std::size_t idx) {
        RngCursor cur = cursor_for(10, idx);
        auto const in = rational_input(small_dim(idx), cur);
        return Partial{to_double(residual_of(gauss_det(block_matrix(in)), block_closed_form(in))), in.text()};
    }));
    return out;
}

//---------------------------------------------------------------------------//
namespace
{
struct NondegSample
{
    double det_ratio;
    double inverse_ratio;
    double minor_ratio;
};

std::optional<Vec> newton_root(TangencyConfig const& cfg, Vec omega)
{
    for (int it = 0; it < 60; ++it)
    {
        PhiValue const pv = phi_k(cfg, omega);
        if (pv.value.norm() < 1e-13)
            return omega;
        Eigen::MatrixXd const jac(pv.jacobian);
        Eigen::VectorXd const rhs(pv.value);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
        if (!lu.isInvertible())
            return std::nullopt;
        Eigen::VectorXd const step = lu.solve(rhs);
        omega -= Vec(step);
        if (!std::isfinite(omega.norm()) || omega.norm() > 10)
            return std::nullopt;
    }
    return std::nullopt;
}

NondegSample evaluate(TangencyConfig const& cfg, Vec const& omega)
{
    int const n = cfg.dim();
    double const t = cfg.t();
    Eigen::MatrixXd const jac(phi_k(cfg, omega).jacobian);
    double const weight = omega.cwiseAbs().prod();
    NondegSample s{};
    s.det_ratio = std::abs(jac.determinant()) * weight / std::pow(t, n - 1);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    auto const& sv = svd.singularValues();
    s.inverse_ratio = t / sv[n - 1];
    for (int a = 0; a < n; ++a)
    {
        for (int b = 0; b < n; ++b)
        {
            Eigen::MatrixXd minor(n - 1, n - 1);
            for (int i = 0, ri = 0; i < n; ++i)
            {
                if (i == a)
                    continue;
                for (int j = 0, cj = 0; j < n; ++j)
                {
                    if (j == b)
                        continue;
                    minor(ri, cj++) = jac(i, j);
                }
                ++ri;
            }
            double const d = n == 1 ? 1.0 : minor.determinant();
            s.minor_ratio = std::max(s.minor_ratio, std::abs(d) * weight / std::pow(t, n - 2));
        }
    }
    return s;
}

struct ConfigOutcome
{
    std::vector<NondegSample> samples;
};
}  // namespace

NondegResult nondeg_bounds_scan(NondegConfig const& cfg)
{
    int const n = cfg.n;
    check_dimension(n);
    if (n < 2)
        throw std::invalid_argument("nondeg scan needs n >= 2");
    if (cfg.k < 1 || cfg.k > n)
        throw std::invalid_argument("axis out of range");
    double const c_n = default_cn(n);
    double const cbar = cfg.cbar > 0 ? cfg.cbar : 0.1 * c_n;
    if (cfg.cbar < 0)
        throw std::invalid_argument("cbar must be positive");
    constexpr int kStarts = 24;
    constexpr int kDraws = 64;

    // Batches of configurations keep the run deterministic for any worker count.
    std::size_t const batch = 64;
    NondegResult out;
    out.min_det_ratio = INFINITY;
    std::size_t next = 0;
    while (out.accepted < cfg.accepted_target && next < static_cast<std::size_t>(cfg.max_configs))
    {
        std::size_t const count = std::min(batch, static_cast<std::size_t>(cfg.max_configs) - next);
        auto const outcomes = parallel_map<ConfigOutcome>(count, [&](std::size_t b) {
            std::size_t const idx = next + b;
            RngCursor cur = CounterRng(derive_seed(cfg.seed, 0x6e6f6e64u), idx).cursor(0);
            double const t = cur.uniform(0.125, 2);
            Vec r(n);
            for (int j = 0; j < n; ++j)
                r[j] = cur.uniform(0.5, 2);
            TangencyConfig const tc(AxisFrame::standard(n, cfg.k), t, Radii(r));
            std::vector<Vec> roots;
            for (int s = 0; s < kStarts; ++s)
            {
                auto root = newton_root(tc, cur.unit_vector(n));
                if (!root || !in_refinement(*root, cfg.k, c_n))
                    continue;
                bool seen = false;
                for (auto const& q : roots)
                    seen = seen || (q - *root).norm() < 1e-8;
                if (!seen)
                    roots.push_back(*root);
            }
            ConfigOutcome oc;
            for (auto const& root : roots)
            {
                Eigen::MatrixXd const jac(phi_k(tc, root).jacobian);
                double const inv = 1 / Eigen::JacobiSVD<Eigen::MatrixXd>(jac).singularValues()[n - 1];
                double const radius = 2 * cbar * t * inv;
                for (int d = 0; d < kDraws; ++d)
                {
                    Vec const w = root + radius * std::pow(cur.uniform(), 1.0 / n) * cur.unit_vector(n);
                    if (!in_refinement(w, cfg.k, c_n))
                        continue;
                    if (phi_k(tc, w).value.norm() >= cbar * t)
                        continue;
                    oc.samples.push_back(evaluate(tc, w));
                }
            }
            return oc;
        });
        for (auto const& oc : outcomes)
        {
            ++out.configs;
            for (auto const& s : oc.samples)
            {
                if (out.accepted >= cfg.accepted_target)
                    break;
                ++out.accepted;
                out.min_det_ratio = std::min(out.min_det_ratio, s.det_ratio);
                out.max_inverse_ratio = std::max(out.max_inverse_ratio, s.inverse_ratio);
                out.max_minor_ratio = std::max(out.max_minor_ratio, s.minor_ratio);
            }
            if (out.accepted >= cfg.accepted_target)
                break;
        }
        next += count;
    }
    if (out.accepted == 0)
        throw std::runtime_error("nondeg scan accepted no samples");
    return out;
}

}  // namespace homoeoid
