#ifndef STADION_TAYLOR_HPP
#define STADION_TAYLOR_HPP

// Truncated Taylor arithmetic.
//
// Series1 is a univariate series in a small increment e, truncated at
// e^N. Poly2<C> is a bivariate polynomial truncated at total degree N,
// used with C = double as a 2-variable jet (automatic differentiation)
// and with C = complex<double> for maps written in (zeta, conj zeta).

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace stadion {

class Series1 {
public:
    Series1() = default;
    explicit Series1(int order, double c0 = 0.0) : c_(order + 1, 0.0) { c_[0] = c0; }

    /// x0 + e
    static Series1 variable(int order, double x0)
    {
        Series1 s(order, x0);
        if (order >= 1)
            s.c_[1] = 1.0;
        return s;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    double constant() const { return c_[0]; }
    double operator[](int k) const { return c_[k]; }
    double& operator[](int k) { return c_[k]; }
    std::span<const double> coeffs() const { return c_; }

    Series1& operator+=(const Series1& o);
    Series1& operator-=(const Series1& o);
    Series1& operator*=(double k);
    Series1& operator+=(double k) { c_[0] += k; return *this; }
    Series1& operator-=(double k) { c_[0] -= k; return *this; }

    /// Antiderivative with the given constant; the top coefficient is dropped.
    Series1 integrate(double c0) const;

private:
    std::vector<double> c_;
};

Series1 operator+(Series1 a, const Series1& b);
Series1 operator-(Series1 a, const Series1& b);
Series1 operator*(const Series1& a, const Series1& b);
Series1 operator*(double k, Series1 a);

// Taylor coefficients of f(x0 + e) through e^order.
namespace taylor {
std::vector<double> sin_coeffs(double x0, int order);
std::vector<double> cos_coeffs(double x0, int order);
std::vector<double> sqrt_coeffs(double x0, int order);
std::vector<double> rsqrt_coeffs(double x0, int order);
std::vector<double> inv_coeffs(double x0, int order);
std::vector<double> atan_coeffs(double x0, int order);
std::vector<double> asin_coeffs(double x0, int order);
} // namespace taylor

Series1 sin(const Series1& x);
Series1 cos(const Series1& x);
Series1 sqrt(const Series1& x);

/// Bivariate polynomial truncated at total degree `order`.
template <class C>
class Poly2 {
public:
    Poly2() = default;
    explicit Poly2(int order, C c0 = C{}) : order_(order), c_(size_for(order), C{}) { c_[0] = c0; }

    /// Coordinate function x (which = 0) or y (which = 1), shifted by `at`.
    static Poly2 variable(int order, int which, C at = C{})
    {
        Poly2 p(order, at);
        if (order >= 1)
            p.coeff(which == 0 ? 1 : 0, which == 0 ? 0 : 1) = C{1};
        return p;
    }

    static constexpr int size_for(int order) { return (order + 1) * (order + 2) / 2; }
    static constexpr int index(int i, int j)
    {
        const int d = i + j;
        return d * (d + 1) / 2 + j;
    }

    int order() const { return order_; }
    C constant() const { return c_[0]; }
    const C& coeff(int i, int j) const { return c_[index(i, j)]; }
    C& coeff(int i, int j) { return c_[index(i, j)]; }
    std::span<const C> data() const { return c_; }

    Poly2& operator+=(const Poly2& o)
    {
        assert(o.order_ == order_);
        for (std::size_t k = 0; k < c_.size(); ++k)
            c_[k] += o.c_[k];
        return *this;
    }
    Poly2& operator-=(const Poly2& o)
    {
        assert(o.order_ == order_);
        for (std::size_t k = 0; k < c_.size(); ++k)
            c_[k] -= o.c_[k];
        return *this;
    }
    Poly2& operator+=(C k) { c_[0] += k; return *this; }
    Poly2& operator-=(C k) { c_[0] -= k; return *this; }
    Poly2& operator*=(C k)
    {
        for (auto& x : c_)
            x *= k;
        return *this;
    }

    friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
    friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
    friend Poly2 operator+(Poly2 a, C k) { return a += k; }
    friend Poly2 operator+(C k, Poly2 a) { return a += k; }
    friend Poly2 operator-(Poly2 a, C k) { return a -= k; }
    friend Poly2 operator-(C k, const Poly2& a) { return (-a) += k; }
    friend Poly2 operator*(Poly2 a, C k) { return a *= k; }
    friend Poly2 operator*(C k, Poly2 a) { return a *= k; }
    friend Poly2 operator-(Poly2 a)
    {
        for (auto& x : a.c_)
            x = -x;
        return a;
    }

    friend Poly2 operator*(const Poly2& a, const Poly2& b)
    {
        assert(a.order_ == b.order_);
        const int n = a.order_;
        Poly2 r(n);
        for (int d1 = 0; d1 <= n; ++d1)
            for (int j1 = 0; j1 <= d1; ++j1) {
                const C x = a.coeff(d1 - j1, j1);
                if (x == C{})
                    continue;
                for (int d2 = 0; d1 + d2 <= n; ++d2)
                    for (int j2 = 0; j2 <= d2; ++j2)
                        r.coeff(d1 - j1 + d2 - j2, j1 + j2) += x * b.coeff(d2 - j2, j2);
            }
        return r;
    }
    Poly2& operator*=(const Poly2& o) { return *this = *this * o; }

    /// Homogeneous part of total degree d.
    Poly2 homogeneous(int d) const
    {
        Poly2 r(order_);
        for (int j = 0; j <= d; ++j)
            r.coeff(d - j, j) = coeff(d - j, j);
        return r;
    }

    /// Partial derivative in x (which = 0) or y (which = 1); order kept.
    Poly2 derivative(int which) const
    {
        Poly2 r(order_);
        for (int d = 1; d <= order_; ++d)
            for (int j = 0; j <= d; ++j) {
                const int i = d - j;
                if (which == 0 && i > 0)
                    r.coeff(i - 1, j) = coeff(i, j) * C(double(i));
                else if (which == 1 && j > 0)
                    r.coeff(i, j - 1) = coeff(i, j) * C(double(j));
            }
        return r;
    }

    template <class V>
    auto evaluate(V x, V y) const
    {
        using R = decltype(C{} * x);
        R acc{};
        for (int d = order_; d >= 0; --d)
            for (int j = 0; j <= d; ++j)
                acc += coeff(d - j, j) * std::pow(x, d - j) * std::pow(y, j);
        return acc;
    }

private:
    int order_ = 0;
    std::vector<C> c_;
};

/// p(X, Y), truncated at the order of X and Y.
template <class C>
Poly2<C> compose(const Poly2<C>& p, const Poly2<C>& X, const Poly2<C>& Y)
{
    const int n = X.order();
    std::vector<Poly2<C>> xp(n + 1, Poly2<C>(n, C{1}));
    std::vector<Poly2<C>> yp(n + 1, Poly2<C>(n, C{1}));
    for (int k = 1; k <= n; ++k) {
        xp[k] = xp[k - 1] * X;
        yp[k] = yp[k - 1] * Y;
    }
    Poly2<C> r(n);
    const int pn = std::min(p.order(), n);
    for (int d = 0; d <= pn; ++d)
        for (int j = 0; j <= d; ++j) {
            const C c = p.coeff(d - j, j);
            if (c != C{})
                r += (xp[d - j] * yp[j]) * c;
        }
    return r;
}

/// f(g) where coeffs are the Taylor coefficients of f at g's constant term.
template <class S>
S compose_univariate(std::span<const double> coeffs, const S& g)
{
    S delta = g;
    delta -= g.constant();
    S acc(g.order(), coeffs.back());
    for (int k = static_cast<int>(coeffs.size()) - 2; k >= 0; --k) {
        acc = acc * delta;
        acc += coeffs[k];
    }
    return acc;
}

using Jet = Poly2<double>;
using CPoly = Poly2<std::complex<double>>;

inline double value(double x) { return x; }
inline double value(const Jet& x) { return x.constant(); }

Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet sqrt(const Jet& x);
Jet asin(const Jet& x);
Jet atan(const Jet& x);
Jet atan2(const Jet& y, const Jet& x);
Jet inverse(const Jet& x);
inline Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }
inline Jet operator/(const Jet& a, double k) { return a * (1.0 / k); }
inline Jet operator/(double k, const Jet& b) { return k * inverse(b); }

/// conj(p(conj-swapped arguments)): the conj zeta component of a map whose
/// zeta component is p(zeta, conj zeta).
CPoly conj_swap(const CPoly& p);

} // namespace stadion

#endif
