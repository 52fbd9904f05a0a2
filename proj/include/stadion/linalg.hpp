#ifndef STADION_LINALG_HPP
#define STADION_LINALG_HPP

#include <array>
#include <cmath>
#include <complex>

namespace stadion {

template <class T>
struct Vec2T {
    T x{};
    T y{};

    friend Vec2T operator+(const Vec2T& a, const Vec2T& b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2T operator-(const Vec2T& a, const Vec2T& b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2T operator*(const T& k, const Vec2T& a) { return {k * a.x, k * a.y}; }
    friend T dot(const Vec2T& a, const Vec2T& b) { return a.x * b.x + a.y * b.y; }
    friend T cross(const Vec2T& a, const Vec2T& b) { return a.x * b.y - a.y * b.x; }
};

using Vec2 = Vec2T<double>;

inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }

/// Row-major 2x2 matrix.
struct Mat2 {
    double a11 = 1, a12 = 0, a21 = 0, a22 = 1;

    static Mat2 identity() { return {}; }
    static Mat2 diag(double d1, double d2) { return {d1, 0, 0, d2}; }

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
    double max_abs() const
    {
        return std::fmax(std::fmax(std::fabs(a11), std::fabs(a12)),
                         std::fmax(std::fabs(a21), std::fabs(a22)));
    }
    /// Spectral norm.
    double norm2() const
    {
        const double f = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
        const double d = std::fabs(det());
        const double disc = std::sqrt(std::fmax(f * f / 4 - d * d, 0.0));
        return std::sqrt(f / 2 + disc);
    }
    Mat2 inverse() const
    {
        const double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    friend Mat2 operator*(const Mat2& p, const Mat2& q)
    {
        return {p.a11 * q.a11 + p.a12 * q.a21, p.a11 * q.a12 + p.a12 * q.a22,
                p.a21 * q.a11 + p.a22 * q.a21, p.a21 * q.a12 + p.a22 * q.a22};
    }
    friend Mat2 operator*(double k, Mat2 m)
    {
        m.a11 *= k, m.a12 *= k, m.a21 *= k, m.a22 *= k;
        return m;
    }
    friend Mat2 operator-(const Mat2& p, const Mat2& q)
    {
        return {p.a11 - q.a11, p.a12 - q.a12, p.a21 - q.a21, p.a22 - q.a22};
    }
    friend Vec2 operator*(const Mat2& m, const Vec2& v)
    {
        return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y};
    }

    /// Eigenvalues as a complex pair (first has non-negative imaginary part,
    /// or is the larger one when real).
    std::array<std::complex<double>, 2> eigenvalues() const
    {
        const double tr = trace(), dt = det();
        const double disc = tr * tr / 4 - dt;
        if (disc >= 0) {
            const double r = std::sqrt(disc);
            return {std::complex<double>(tr / 2 + r, 0), std::complex<double>(tr / 2 - r, 0)};
        }
        const double im = std::sqrt(-disc);
        return {std::complex<double>(tr / 2, im), std::complex<double>(tr / 2, -im)};
    }
};

} // namespace stadion

#endif
