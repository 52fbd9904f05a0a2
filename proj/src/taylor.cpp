#include "stadion/taylor.hpp"

#include <cmath>

namespace stadion {

Series1& Series1::operator+=(const Series1& o)
{
    assert(o.order() == order());
    for (std::size_t k = 0; k < c_.size(); ++k)
        c_[k] += o.c_[k];
    return *this;
}

Series1& Series1::operator-=(const Series1& o)
{
    assert(o.order() == order());
    for (std::size_t k = 0; k < c_.size(); ++k)
        c_[k] -= o.c_[k];
    return *this;
}

Series1& Series1::operator*=(double k)
{
    for (auto& x : c_)
        x *= k;
    return *this;
}

Series1 Series1::integrate(double c0) const
{
    Series1 r(order(), c0);
    for (int k = 1; k <= order(); ++k)
        r.c_[k] = c_[k - 1] / k;
    return r;
}

Series1 operator+(Series1 a, const Series1& b) { return a += b; }
Series1 operator-(Series1 a, const Series1& b) { return a -= b; }
Series1 operator*(double k, Series1 a) { return a *= k; }

Series1 operator*(const Series1& a, const Series1& b)
{
    const int n = a.order();
    Series1 r(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

namespace taylor {

std::vector<double> sin_coeffs(double x0, int order)
{
    const double s = std::sin(x0), c = std::cos(x0);
    const double cycle[4] = {s, c, -s, -c};
    std::vector<double> r(order + 1);
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0)
            fact *= k;
        r[k] = cycle[k % 4] / fact;
    }
    return r;
}

std::vector<double> cos_coeffs(double x0, int order)
{
    const double s = std::sin(x0), c = std::cos(x0);
    const double cycle[4] = {c, -s, -c, s};
    std::vector<double> r(order + 1);
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0)
            fact *= k;
        r[k] = cycle[k % 4] / fact;
    }
    return r;
}

namespace {
// (x0 + e)^p as a binomial series.
std::vector<double> power_coeffs(double x0, double p, int order)
{
    std::vector<double> r(order + 1);
    r[0] = std::pow(x0, p);
    for (int k = 1; k <= order; ++k)
        r[k] = r[k - 1] * (p - (k - 1)) / (k * x0);
    return r;
}
} // namespace

std::vector<double> sqrt_coeffs(double x0, int order) { return power_coeffs(x0, 0.5, order); }
std::vector<double> rsqrt_coeffs(double x0, int order) { return power_coeffs(x0, -0.5, order); }

std::vector<double> inv_coeffs(double x0, int order)
{
    std::vector<double> r(order + 1);
    r[0] = 1.0 / x0;
    for (int k = 1; k <= order; ++k)
        r[k] = -r[k - 1] / x0;
    return r;
}

std::vector<double> atan_coeffs(double x0, int order)
{
    const Series1 x = Series1::variable(order, x0);
    Series1 g = x * x;
    g += 1.0;
    const Series1 d = compose_univariate(inv_coeffs(g.constant(), order), g);
    const Series1 r = d.integrate(std::atan(x0));
    return {r.coeffs().begin(), r.coeffs().end()};
}

std::vector<double> asin_coeffs(double x0, int order)
{
    const Series1 x = Series1::variable(order, x0);
    Series1 g = -1.0 * (x * x);
    g += 1.0;
    const Series1 d = compose_univariate(rsqrt_coeffs(g.constant(), order), g);
    const Series1 r = d.integrate(std::asin(x0));
    return {r.coeffs().begin(), r.coeffs().end()};
}

} // namespace taylor

Series1 sin(const Series1& x) { return compose_univariate(taylor::sin_coeffs(x.constant(), x.order()), x); }
Series1 cos(const Series1& x) { return compose_univariate(taylor::cos_coeffs(x.constant(), x.order()), x); }
Series1 sqrt(const Series1& x) { return compose_univariate(taylor::sqrt_coeffs(x.constant(), x.order()), x); }

Jet sin(const Jet& x) { return compose_univariate(taylor::sin_coeffs(x.constant(), x.order()), x); }
Jet cos(const Jet& x) { return compose_univariate(taylor::cos_coeffs(x.constant(), x.order()), x); }
Jet sqrt(const Jet& x) { return compose_univariate(taylor::sqrt_coeffs(x.constant(), x.order()), x); }
Jet asin(const Jet& x) { return compose_univariate(taylor::asin_coeffs(x.constant(), x.order()), x); }
Jet atan(const Jet& x) { return compose_univariate(taylor::atan_coeffs(x.constant(), x.order()), x); }
Jet inverse(const Jet& x) { return compose_univariate(taylor::inv_coeffs(x.constant(), x.order()), x); }

Jet atan2(const Jet& y, const Jet& x)
{
    // atan2(y0, x0) + atan(w) with w = (x0 y - y0 x) / (x0 x + y0 y), w(0) = 0
    const double x0 = x.constant(), y0 = y.constant();
    Jet num = x0 * y - y0 * x;
    num.coeff(0, 0) = 0.0;
    const Jet w = num / (x0 * x + y0 * y);
    return atan(w) + std::atan2(y0, x0);
}

CPoly conj_swap(const CPoly& p)
{
    CPoly r(p.order());
    for (int d = 0; d <= p.order(); ++d)
        for (int j = 0; j <= d; ++j)
            r.coeff(j, d - j) = std::conj(p.coeff(d - j, j));
    return r;
}

} // namespace stadion
