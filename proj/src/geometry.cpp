#include "stadion/geometry.hpp"

#include <cmath>
#include <numbers>

#include "stadion/error.hpp"

namespace stadion {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// Cosine series of sqrt(1 + k sin^2 u) (period pi) by the trapezoidal rule,
// which is spectrally accurate for periodic analytic integrands. The grid is
// doubled until the upper half of the spectrum is below roundoff.
std::vector<double> speed_fourier(double k)
{
    for (int M = 64; M <= (1 << 14); M *= 2) {
        std::vector<double> f(M), cos_table(M);
        for (int j = 0; j < M; ++j) {
            const double u = std::numbers::pi * j / M;
            const double s = std::sin(u);
            f[j] = std::sqrt(1.0 + k * s * s);
            cos_table[j] = std::cos(2.0 * std::numbers::pi * j / M);
        }
        const int mmax = M / 2;
        std::vector<double> c(mmax, 0.0);
        for (int m = 0; m < mmax; ++m) {
            double acc = 0;
            for (int j = 0; j < M; ++j)
                acc += f[j] * cos_table[(static_cast<long>(m) * j) % M];
            c[m] = (m == 0 ? 1.0 : 2.0) * acc / M;
        }
        double tail = 0;
        for (int m = mmax / 2; m < mmax; ++m)
            tail = std::fmax(tail, std::fabs(c[m]));
        if (tail < 2e-16 * c[0]) {
            while (c.size() > 1 && std::fabs(c.back()) < 1e-17 * c[0])
                c.pop_back();
            return c;
        }
    }
    throw DomainError("arc-length series did not converge; major semi-axis too large");
}

} // namespace

std::string_view piece_name(Piece p) noexcept
{
    switch (p) {
    case Piece::RightEllipse: return "RightEllipse";
    case Piece::TopSegment: return "TopSegment";
    case Piece::LeftEllipse: return "LeftEllipse";
    case Piece::BottomSegment: return "BottomSegment";
    }
    return "?";
}

StadiumParams build_stadium(double a, double h)
{
    if (!std::isfinite(a) || !std::isfinite(h))
        throw DomainError("stadium parameters must be finite");
    if (!(a > 1.0))
        throw DomainError("major semi-axis a must exceed 1");
    if (!(h >= 0.0))
        throw DomainError("half segment length h must be non-negative");

    StadiumParams p;
    p.a_ = a;
    p.h_ = h;
    auto fourier = std::make_shared<std::vector<double>>(speed_fourier(a * a - 1.0));
    auto sine = std::make_shared<std::vector<double>>(fourier->size(), 0.0);
    for (std::size_t m = 1; m < fourier->size(); ++m)
        (*sine)[m] = (*fourier)[m] / (2.0 * m);
    p.fourier_ = std::move(fourier);
    p.sine_ = std::move(sine);
    p.quarter_ = (*p.fourier_)[0] * kHalfPi;
    p.length_ = 4.0 * h + 4.0 * p.quarter_;
    return p;
}

std::array<double, 4> StadiumParams::junctions() const
{
    return {quarter_, quarter_ + 2 * h_, 3 * quarter_ + 2 * h_, 3 * quarter_ + 4 * h_};
}

double StadiumParams::ellipse_speed(double lambda) const
{
    const double s = std::sin(lambda);
    return std::sqrt(1.0 + (a_ * a_ - 1.0) * s * s);
}

double StadiumParams::ellipse_arc(double lambda) const
{
    // c0 l + sum_m b_m sin(2 m l), Clenshaw in x = 2l
    const auto& b = *sine_;
    const double x = 2.0 * lambda;
    const double two_cos = 2.0 * std::cos(x);
    double y1 = 0, y2 = 0;
    for (std::size_t m = b.size() - 1; m >= 1; --m) {
        const double y0 = b[m] + two_cos * y1 - y2;
        y2 = y1;
        y1 = y0;
    }
    return (*fourier_)[0] * lambda + y1 * std::sin(x);
}

double StadiumParams::ellipse_lambda(double arc) const
{
    if (arc >= quarter_)
        return kHalfPi;
    if (arc <= -quarter_)
        return -kHalfPi;
    double lo = -kHalfPi, hi = kHalfPi;
    double lam = arc / (*fourier_)[0];
    for (int it = 0; it < 60; ++it) {
        const double f = ellipse_arc(lam) - arc;
        if (f > 0)
            hi = lam;
        else
            lo = lam;
        double next = lam - f / ellipse_speed(lam);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::fabs(next - lam) <= 1e-16 * (1.0 + std::fabs(lam))) {
            lam = next;
            break;
        }
        lam = next;
    }
    return lam;
}

Series1 StadiumParams::ellipse_arc_series(double lambda0, int order) const
{
    const Series1 s = sin(Series1::variable(order, lambda0));
    Series1 g = (a_ * a_ - 1.0) * (s * s);
    g += 1.0;
    return sqrt(g).integrate(ellipse_arc(lambda0));
}

double ellipse_curvature(double a, double lambda)
{
    const double s = std::sin(lambda), c = std::cos(lambda);
    const double g = a * a * s * s + c * c;
    return a / (g * std::sqrt(g));
}

double wrap_arclength(const StadiumParams& params, double s)
{
    const double L = params.length();
    double r = std::fmod(s, L);
    if (r < 0)
        r += L;
    if (r >= L)
        r = 0.0;
    return r;
}

double arclength_difference(const StadiumParams& params, double s1, double s0)
{
    const double L = params.length();
    double d = std::fmod(s1 - s0, L);
    if (d >= L / 2)
        d -= L;
    else if (d < -L / 2)
        d += L;
    return d;
}

BoundaryPoint point_at(const StadiumParams& params, double s_in)
{
    const double a = params.a(), h = params.h();
    const double sq = params.quarter_arc();
    const auto j = params.junctions();
    BoundaryPoint p;
    p.s = wrap_arclength(params, s_in);
    const double s = p.s;

    auto ellipse = [&](Piece piece, double sigma) {
        const double lam = params.ellipse_lambda(sigma);
        const double sn = std::sin(lam), cs = std::cos(lam);
        const double g = params.ellipse_speed(lam);
        const double sign = piece == Piece::RightEllipse ? 1.0 : -1.0;
        p.piece = piece;
        p.local = lam;
        p.position = {sign * (h + a * cs), sign * sn};
        p.tangent = {-sign * a * sn / g, sign * cs / g};
        p.curvature = ellipse_curvature(a, lam);
    };

    if (s < j[0]) {
        ellipse(Piece::RightEllipse, s);
    } else if (s < j[1]) {
        p.piece = Piece::TopSegment;
        p.local = s - sq;
        p.position = {h - p.local, 1.0};
        p.tangent = {-1.0, 0.0};
    } else if (s < j[2]) {
        ellipse(Piece::LeftEllipse, s - (2 * sq + 2 * h));
    } else if (s < j[3]) {
        p.piece = Piece::BottomSegment;
        p.local = s - j[2];
        p.position = {-h + p.local, -1.0};
        p.tangent = {1.0, 0.0};
    } else {
        ellipse(Piece::RightEllipse, s - params.length());
    }
    p.normal = {-p.tangent.y, p.tangent.x};
    return p;
}

double arclength_of(const StadiumParams& params, Piece piece, double local)
{
    const double h = params.h(), sq = params.quarter_arc();
    switch (piece) {
    case Piece::RightEllipse:
    case Piece::LeftEllipse: {
        if (!(local >= -kHalfPi && local <= kHalfPi))
            throw DomainError("ellipse parameter outside [-pi/2, pi/2]");
        const double arc = params.ellipse_arc(local);
        if (piece == Piece::RightEllipse)
            return arc >= 0 ? arc : wrap_arclength(params, params.length() + arc);
        return 2 * sq + 2 * h + arc;
    }
    case Piece::TopSegment:
    case Piece::BottomSegment:
        if (!(local >= 0 && local <= 2 * h))
            throw DomainError("segment coordinate outside [0, 2h]");
        return piece == Piece::TopSegment ? sq + local : 3 * sq + 2 * h + local;
    }
    throw DomainError("unknown boundary piece");
}

double junction_distance(const StadiumParams& params, double s)
{
    if (params.h() == 0.0)
        return INFINITY;
    double best = INFINITY;
    for (double j : params.junctions())
        best = std::fmin(best, std::fabs(arclength_difference(params, s, j)));
    return best;
}

double mirror_x_arclength(const StadiumParams& params, double s)
{
    return wrap_arclength(params, params.length() / 2 - s);
}

double mirror_y_arclength(const StadiumParams& params, double s)
{
    return wrap_arclength(params, -s);
}

double central_arclength(const StadiumParams& params, double s)
{
    return wrap_arclength(params, s + params.length() / 2);
}

} // namespace stadion
