#include "stadion/normalform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "stadion/error.hpp"

namespace stadion {

using cd = std::complex<double>;

namespace {

constexpr int kMaxOrder = 5;
constexpr int kHalfWidth = 4;                    // stencil nodes -4..4
constexpr int kNodes = 2 * kHalfWidth + 1;

// Fornberg weights for derivatives 0..kMaxOrder at 0 on the unit grid -4..4.
using Weights = std::array<std::array<double, kNodes>, kMaxOrder + 1>;

const Weights& stencil_weights()
{
    static const Weights w = [] {
        // Fornberg's recursion, in place over the nodes
        double C[kNodes][kMaxOrder + 1] = {};
        double x[kNodes];
        for (int i = 0; i < kNodes; ++i)
            x[i] = i - kHalfWidth;
        double c1 = 1.0, c4 = x[0];
        C[0][0] = 1.0;
        for (int i = 1; i < kNodes; ++i) {
            const int mn = std::min(i, kMaxOrder);
            double c2 = 1.0;
            const double c5 = c4;
            c4 = x[i];
            for (int j = 0; j < i; ++j) {
                const double c3 = x[i] - x[j];
                c2 *= c3;
                if (j == i - 1) {
                    for (int k = mn; k >= 1; --k)
                        C[i][k] = c1 * (k * C[i - 1][k - 1] - c5 * C[i - 1][k]) / c2;
                    C[i][0] = -c1 * c5 * C[i - 1][0] / c2;
                }
                for (int k = mn; k >= 1; --k)
                    C[j][k] = (c4 * C[j][k] - k * C[j][k - 1]) / c3;
                C[j][0] = c4 * C[j][0] / c3;
            }
            c1 = c2;
        }
        Weights out{};
        for (int k = 0; k <= kMaxOrder; ++k)
            for (int j = 0; j < kNodes; ++j)
                out[k][j] = C[j][k];
        return out;
    }();
    return w;
}

// Truncation order of the 9-point central stencil for derivative m.
int stencil_accuracy(int m)
{
    static const int p[] = {64, 8, 8, 6, 6, 4};
    return p[m];
}

// Step ladder for finite differences, as fractions of the smoothness scale:
// the stencil reaches 4 sqrt 2 steps from the center.
constexpr int kLadder = 13;
double ladder_step(int k) { return std::pow(0.5, 0.5 * k) / 6.0; }

double factorial(int k)
{
    double f = 1;
    for (int i = 2; i <= k; ++i)
        f *= i;
    return f;
}

using Grid = std::array<std::array<Vec2, kNodes>, kNodes>;

Grid sample(const PlanarMap& f, Vec2 center, double delta)
{
    Grid g;
    for (int i = 0; i < kNodes; ++i)
        for (int j = 0; j < kNodes; ++j)
            g[i][j] = f.apply({center.x + (i - kHalfWidth) * delta, center.y + (j - kHalfWidth) * delta});
    return g;
}

Vec2 mixed_derivative(const Grid& g, int i, int j, double delta)
{
    const auto& w = stencil_weights();
    Vec2 acc;
    for (int a = 0; a < kNodes; ++a) {
        if (w[i][a] == 0.0)
            continue;
        for (int b = 0; b < kNodes; ++b) {
            const double wt = w[i][a] * w[j][b];
            acc = acc + wt * g[a][b];
        }
    }
    const double scale = std::pow(delta, -(i + j));
    return scale * acc;
}

// Per degree, Richardson estimates from steps (delta, delta / 2) are formed
// down a geometric ladder, and the pair of neighbouring estimates that agree
// best is kept: large steps lose to truncation, small ones to roundoff.
Jet2 fd_jet(const PlanarMap& f, Vec2 center, int order, double scale)
{
    Jet2 out;
    out.order = order;
    out.chart = f.chart;
    out.x = Jet(order);
    out.y = Jet(order);
    const Vec2 f0 = f.apply(center);
    out.x.coeff(0, 0) = f0.x - center.x;
    out.y.coeff(0, 0) = f0.y - center.y;

    std::vector<Grid> grids;
    for (int k = 0; k < kLadder; ++k)
        grids.push_back(sample(f, center, ladder_step(k) * scale));

    for (int d = 1; d <= order; ++d) {
        // estimates[k][j] for the monomial x^(d-j) y^j
        std::vector<std::vector<Vec2>> est(kLadder - 2, std::vector<Vec2>(d + 1));
        for (int k = 0; k + 2 < kLadder; ++k) {
            const double delta = ladder_step(k) * scale;
            for (int j = 0; j <= d; ++j) {
                const int i = d - j;
                const int p = std::min(stencil_accuracy(i), stencil_accuracy(j));
                const Vec2 D1 = mixed_derivative(grids[k], i, j, delta);
                const Vec2 D2 = mixed_derivative(grids[k + 2], i, j, delta / 2);
                const double r = 1.0 / (std::pow(2.0, p) - 1.0);
                est[k][j] = D2 + r * (D2 - D1);
            }
        }
        int best = 0;
        double best_gap = INFINITY;
        for (int k = 0; k + 3 < kLadder; ++k) {
            double big = 0, gap = 0;
            for (int j = 0; j <= d; ++j) {
                big = std::fmax(big, std::fmax(std::fabs(est[k][j].x), std::fabs(est[k][j].y)));
                gap = std::fmax(gap, norm(est[k][j] - est[k + 1][j]));
            }
            gap /= std::fmax(big, 1e-300);
            if (gap < best_gap) {
                best_gap = gap;
                best = k;
            }
        }
        for (int j = 0; j <= d; ++j) {
            const int i = d - j;
            const Vec2 D = 0.5 * (est[best][j] + est[best + 1][j]);
            const double fac = factorial(i) * factorial(j);
            out.x.coeff(i, j) = D.x / fac;
            out.y.coeff(i, j) = D.y / fac;
        }
    }
    return out;
}

Jet2 series_jet(const PlanarMap& f, Vec2 center, int order)
{
    if (!f.apply_jet)
        throw DomainError("map has no jet evaluation");
    const auto r = f.apply_jet(Jet::variable(order, 0, center.x), Jet::variable(order, 1, center.y));
    Jet2 out;
    out.order = order;
    out.chart = f.chart;
    out.x = r[0] - center.x;
    out.y = r[1] - center.y;
    return out;
}

CPoly to_complex(const Jet& p)
{
    CPoly r(p.order());
    for (int d = 0; d <= p.order(); ++d)
        for (int j = 0; j <= d; ++j)
            r.coeff(d - j, j) = p.coeff(d - j, j);
    return r;
}

// Jet in (s, sin beta) deviations from one in (s, beta) deviations.
std::array<Jet, 2> canonical_components(const Jet2& jet)
{
    Jet X = jet.x, Y = jet.y;
    X.coeff(0, 0) = 0;
    Y.coeff(0, 0) = 0;
    if (jet.chart == JetChart::Canonical)
        return {X, Y};
    const int N = jet.order;
    const double p0 = std::sin(jet.beta0);
    const Jet u = Jet::variable(N, 0);
    Jet dbeta = asin(Jet::variable(N, 1, p0));
    dbeta.coeff(0, 0) = 0;
    const Jet Xs = compose(X, u, dbeta);
    const Jet Bs = compose(Y, u, dbeta);
    Jet P = sin(Bs + jet.beta0);
    P.coeff(0, 0) = 0;
    return {Xs, P};
}

// D_h g = h dg/dzeta + conj(h) dg/dconj(zeta)
CPoly lie_derivative(const CPoly& h, const CPoly& hbar, const CPoly& g)
{
    return h * g.derivative(0) + hbar * g.derivative(1);
}

// zeta-component of the time-1 flow of the field (h, conj h).
CPoly lie_flow(const CPoly& h)
{
    const int N = h.order();
    const CPoly hbar = conj_swap(h);
    CPoly term = CPoly::variable(N, 0);
    CPoly sum = term;
    for (int k = 1; k <= N; ++k) {
        term = lie_derivative(h, hbar, term) * cd(1.0 / k);
        bool zero = true;
        for (const cd& c : term.data())
            if (c != cd{}) {
                zero = false;
                break;
            }
        if (zero)
            break;
        sum += term;
    }
    return sum;
}

double wrap_angle(double x)
{
    return std::remainder(x, 2.0 * std::numbers::pi);
}

double rotation_of(cd mu)
{
    double r = std::arg(mu) / (2.0 * std::numbers::pi);
    if (r < 0)
        r += 1.0;
    return r;
}

// Smoothness scale of the return map at the orbit start: perturbations below
// it keep every impact on its piece.
double smooth_scale(const StadiumParams& params, const PantographOrbit& orbit, const ToleranceSet& tol)
{
    double cap = 0.25;
    Mat2 acc = Mat2::identity();
    PhasePoint p = orbit.start();
    for (int k = 0; k < orbit.period(); ++k) {
        const double dist = junction_distance(params, p.s);
        cap = std::fmin(cap, dist / std::fmax(1.0, acc.norm2()));
        const double graze = std::numbers::pi / 2 - std::fabs(p.beta);
        cap = std::fmin(cap, graze / std::fmax(1.0, acc.norm2()));
        acc = tangent_matrix(params, p, tol).m * acc;
        p = step(params, p, tol);
    }
    return cap;
}

PlanarMap billiard_angle_map(const StadiumParams& params, int period, const ToleranceSet& tol)
{
    PlanarMap f;
    f.chart = JetChart::BilliardAngle;
    f.apply = [params, period, tol](Vec2 x) {
        const PhasePoint q = iterate(params, {wrap_arclength(params, x.x), x.y}, period, tol);
        return Vec2{x.x + arclength_difference(params, q.s, x.x), q.beta};
    };
    f.apply_jet = [params, period, tol](const Jet& s, const Jet& beta) {
        PhaseJet p{s, beta};
        for (int k = 0; k < period; ++k)
            p = step_jet(params, p, tol);
        const double s0 = s.constant();
        Jet out = p.s;
        out.coeff(0, 0) = s0 + arclength_difference(params, p.s.constant(), s0);
        return std::array<Jet, 2>{out, p.beta};
    };
    return f;
}

} // namespace

Mat2 Jet2::linear() const
{
    return {x.coeff(1, 0), x.coeff(0, 1), y.coeff(1, 0), y.coeff(0, 1)};
}

double Jet2::offset() const { return std::hypot(x.constant(), y.constant()); }

std::string_view jet_method_name(JetMethod m) noexcept
{
    return m == JetMethod::Series ? "series" : "finite-difference";
}

std::string_view verdict_name(TwistVerdict v) noexcept
{
    switch (v) {
    case TwistVerdict::IslandCertified: return "IslandCertified";
    case TwistVerdict::Inconclusive: return "Inconclusive";
    case TwistVerdict::ResonantSkip: return "ResonantSkip";
    }
    return "?";
}

Jet2 map_jet(const PlanarMap& f, Vec2 center, int order, JetMethod method, double scale)
{
    if (order < 1 || order > kMaxOrder)
        throw DomainError("jet order must be in [1, 5]");
    return method == JetMethod::Series ? series_jet(f, center, order) : fd_jet(f, center, order, scale);
}

Jet2 return_map_jet(const StadiumParams& params, const PantographOrbit& orbit, int order,
                    JetMethod method, const ToleranceSet& tol)
{
    if (!(orbit.closure <= tol.closure))
        throw RefinementError("return-map jet needs a closed orbit");
    const PlanarMap f = billiard_angle_map(params, orbit.period(), tol);
    const PhasePoint c = orbit.start();
    Jet2 j = map_jet(f, {c.s, c.beta}, order, method, smooth_scale(params, orbit, tol));
    j.beta0 = c.beta;
    return j;
}

double jet_discrepancy(const Jet2& a, const Jet2& b)
{
    const int N = std::min(a.order, b.order);
    std::vector<double> big(N + 1, 0.0);
    double overall = 0;
    for (const auto* p : {&a.x, &b.x, &a.y, &b.y})
        for (int d = 1; d <= N; ++d)
            for (int j = 0; j <= d; ++j)
                big[d] = std::fmax(big[d], std::fabs(p->coeff(d - j, j)));
    for (int d = 1; d <= N; ++d)
        overall = std::fmax(overall, big[d]);
    // degrees that vanish identically are compared against the jet's scale
    const double floor = 1e-8 * overall;
    double worst = 0;
    for (const auto& [pa, pb] : {std::pair{&a.x, &b.x}, std::pair{&a.y, &b.y}})
        for (int d = 1; d <= N; ++d)
            for (int j = 0; j <= d; ++j) {
                const double den = std::fmax(big[d], floor);
                if (den > 0)
                    worst = std::fmax(worst, std::fabs(pa->coeff(d - j, j) - pb->coeff(d - j, j)) / den);
            }
    return worst;
}

JetPair cross_validated_jet(const StadiumParams& params, const PantographOrbit& orbit, int order,
                            const ToleranceSet& tol)
{
    JetPair p;
    p.series = return_map_jet(params, orbit, order, JetMethod::Series, tol);
    p.finite_difference = return_map_jet(params, orbit, order, JetMethod::FiniteDifference, tol);
    p.discrepancy = jet_discrepancy(p.series, p.finite_difference);
    if (!(p.discrepancy <= tol.jet_agreement))
        throw JetDisagreementError("series and finite-difference jets differ by " +
                                   std::to_string(p.discrepancy));
    return p;
}

cd LinearNormalization::to_zeta(Vec2 x) const
{
    return cd(0, -2) * (x.x * std::conj(v2) - x.y * std::conj(v1));
}

Vec2 LinearNormalization::from_zeta(cd z) const
{
    return {2.0 * (v1 * z).real(), 2.0 * (v2 * z).real()};
}

LinearNormalization normalize_linear(const Mat2& m)
{
    if (std::fabs(m.det() - 1.0) > 1e-6)
        throw NotEllipticError("linear part is not area-preserving (det " + std::to_string(m.det()) + ")");
    const double c = m.trace() / 2;
    if (!(std::fabs(c) < 1.0))
        throw NotEllipticError("linear part is not elliptic (half trace " + std::to_string(c) + ")");
    LinearNormalization ln;
    ln.mu = cd(c, std::sqrt(1.0 - c * c));
    if (std::fabs(m.a12) >= std::fabs(m.a21)) {
        ln.v1 = m.a12;
        ln.v2 = ln.mu - m.a11;
    } else {
        ln.v1 = ln.mu - m.a22;
        ln.v2 = m.a21;
    }
    double q = (ln.v1 * std::conj(ln.v2)).imag();
    if (q < 0) {
        ln.mu = std::conj(ln.mu);
        ln.v1 = std::conj(ln.v1);
        ln.v2 = std::conj(ln.v2);
        q = -q;
    }
    const double k = 1.0 / (2.0 * std::sqrt(q));
    ln.v1 *= k;
    ln.v2 *= k;
    return ln;
}

TwistReport birkhoff_coefficients(const Jet2& jet, int q, const ToleranceSet& tol)
{
    if (q < 2 || q > jet.order + 1)
        throw DomainError("normal form order q must satisfy 2 <= q <= jet order + 1");
    const auto [X, Y] = canonical_components(jet);
    const Mat2 A{X.coeff(1, 0), X.coeff(0, 1), Y.coeff(1, 0), Y.coeff(0, 1)};
    const LinearNormalization ln = normalize_linear(A);
    const cd mu = ln.mu;

    TwistReport r;
    r.mu = mu;
    r.rotation_number = rotation_of(mu);
    r.q = q;
    for (int k = 1; k <= q; ++k)
        if (std::abs(std::pow(mu, k) - 1.0) < tol.resonance)
            r.resonances.push_back(k);
    if (!r.resonances.empty())
        throw ResonanceError("eigenvalue is a root of unity of order " + std::to_string(r.resonances.front()));

    const int N = q - 1;
    auto trunc = [N](const Jet& p) {
        Jet t(N);
        for (int d = 0; d <= N; ++d)
            for (int j = 0; j <= d; ++j)
                t.coeff(d - j, j) = p.coeff(d - j, j);
        return t;
    };
    const CPoly Z = CPoly::variable(N, 0);
    const CPoly Zb = CPoly::variable(N, 1);
    const CPoly Xc = Z * ln.v1 + Zb * std::conj(ln.v1);
    const CPoly Yc = Z * ln.v2 + Zb * std::conj(ln.v2);
    CPoly G = (compose(to_complex(trunc(X)), Xc, Yc) * std::conj(ln.v2) -
               compose(to_complex(trunc(Y)), Xc, Yc) * std::conj(ln.v1)) * cd(0, -2);

    for (int d = 2; d <= N; ++d) {
        CPoly h(N);
        bool any = false;
        for (int k = 0; k <= d; ++k) {
            const int j = d - k;
            if (j == k + 1)
                continue;
            const cd P = G.coeff(j, k);
            if (P == cd{})
                continue;
            h.coeff(j, k) = P / (std::pow(mu, j) * std::pow(std::conj(mu), k) - mu);
            any = true;
        }
        if (!any)
            continue;
        const CPoly phi = lie_flow(h);
        const CPoly phi_inv = lie_flow(-h);
        const CPoly G1 = compose(G, phi, conj_swap(phi));
        G = compose(phi_inv, G1, conj_swap(G1));
    }

    const int s = q / 2 - 1;
    for (int m = 1; m <= s; ++m) {
        const cd w = std::conj(mu) * G.coeff(m + 1, m);
        double defect = w.real();
        if (m == 2)
            defect += 0.5 * r.taus[0] * r.taus[0];
        r.taus.push_back(w.imag());
        r.tau_noise.push_back(0.0);
        r.residual_imag = std::fmax(r.residual_imag, std::fabs(defect));
    }
    r.verdict = TwistVerdict::Inconclusive;
    for (int m = 1; m <= s; ++m)
        if (r.taus[m - 1] != 0.0) {
            r.verdict = TwistVerdict::IslandCertified;
            r.certified_order = m;
            break;
        }
    return r;
}

RotationFit rotation_number_fit(const PlanarMap& f, Vec2 center, const std::vector<double>& radii,
                                int iterations)
{
    if (radii.size() < 2)
        throw DomainError("rotation fit needs at least two radii");
    if (iterations < 2)
        throw DomainError("rotation fit needs at least two iterations");
    const Jet2 lin = f.apply_jet ? map_jet(f, center, 1, JetMethod::Series)
                                 : map_jet(f, center, 1, JetMethod::FiniteDifference, 1e-3);
    const LinearNormalization ln = normalize_linear(lin.linear());
    const double base = std::arg(ln.mu);

    std::vector<double> weight(iterations);
    double wsum = 0;
    for (int k = 0; k < iterations; ++k) {
        const double t = (k + 1.0) / (iterations + 1.0);
        weight[k] = std::exp(-1.0 / (t * (1.0 - t)));
        wsum += weight[k];
    }

    RotationFit fit;
    for (double r : radii) {
        Vec2 x = center + ln.from_zeta(r);
        cd z = r;
        double rot = 0, amp = 0;
        for (int k = 0; k < iterations; ++k) {
            try {
                x = f.apply(x);
            } catch (const Error& e) {
                throw EscapeError(std::string("orbit lost in rotation fit: ") + e.what());
            }
            const cd zn = ln.to_zeta(x - center);
            if (!(std::abs(zn) < 4.0 * r))
                throw EscapeError("orbit left the normalized chart at radius " + std::to_string(r));
            rot += weight[k] * (base + wrap_angle(std::arg(zn / (ln.mu * z))));
            amp += weight[k] * std::norm(z);
            z = zn;
        }
        fit.rotations.push_back(rot / wsum);
        fit.amplitudes.push_back(amp / wsum);
    }

    const double n = static_cast<double>(radii.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        mx += fit.amplitudes[i] / n;
        my += fit.rotations[i] / n;
    }
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        sxx += (fit.amplitudes[i] - mx) * (fit.amplitudes[i] - mx);
        sxy += (fit.amplitudes[i] - mx) * (fit.rotations[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = wrap_angle(my - fit.slope * mx);
    fit.rotation_number = fit.intercept / (2.0 * std::numbers::pi);
    if (fit.rotation_number < 0)
        fit.rotation_number += 1.0;
    return fit;
}

PlanarMap pantograph_return_map(const StadiumParams& params, int period, const ToleranceSet& tol)
{
    PlanarMap f;
    f.chart = JetChart::Canonical;
    f.apply = [params, period, tol](Vec2 x) {
        if (!(std::fabs(x.y) < 1.0))
            throw GrazingError("sin beta outside (-1, 1)");
        const PhasePoint q = iterate(params, {wrap_arclength(params, x.x), std::asin(x.y)}, period, tol);
        return Vec2{x.x + arclength_difference(params, q.s, x.x), std::sin(q.beta)};
    };
    f.apply_jet = [params, period, tol](const Jet& s, const Jet& p) {
        PhaseJet j{s, asin(p)};
        for (int k = 0; k < period; ++k)
            j = step_jet(params, j, tol);
        const double s0 = s.constant();
        Jet out = j.s;
        out.coeff(0, 0) = s0 + arclength_difference(params, j.s.constant(), s0);
        return std::array<Jet, 2>{out, sin(j.beta)};
    };
    return f;
}

RotationFit rotation_number_fit(const StadiumParams& params, const PantographOrbit& orbit,
                                const std::vector<double>& radii, int iterations, const ToleranceSet& tol)
{
    const PhasePoint c = orbit.start();
    return rotation_number_fit(pantograph_return_map(params, orbit.period(), tol),
                               {c.s, std::sin(c.beta)}, radii, iterations);
}

TwistReport twist_analysis(int n, double a, double h, const TwistOptions& opt, const ToleranceSet& tol)
{
    if (opt.q < 4 || opt.q > 6)
        throw DomainError("twist analysis supports q in [4, 6]");
    const StabilityReport stab = classify(n, a, h, opt.q, tol);
    if (stab.cls == StabilityClass::Resonant) {
        TwistReport r;
        r.q = opt.q;
        r.stability = stab;
        r.mu = stab.mu;
        r.rotation_number = rotation_of(stab.mu);
        r.resonances.push_back(stab.resonance_k);
        r.verdict = TwistVerdict::ResonantSkip;
        return r;
    }
    if (stab.cls != StabilityClass::Elliptic)
        throw NotEllipticError("Pan(" + std::to_string(n) + ") is " + std::string(stability_name(stab.cls)) +
                               " at this (a, h)");

    const PantographOrbit orbit = materialize_orbit(n, a, h, tol);
    const StadiumParams params = build_stadium(a, h);
    const JetPair jets = cross_validated_jet(params, orbit, opt.q - 1, tol);
    TwistReport r = birkhoff_coefficients(jets.series, opt.q, tol);
    const TwistReport rf = birkhoff_coefficients(jets.finite_difference, opt.q, tol);
    r.stability = stab;
    r.jet_spread = jets.discrepancy;
    r.verdict = TwistVerdict::Inconclusive;
    r.certified_order = 0;
    for (std::size_t m = 0; m < r.taus.size(); ++m) {
        r.tau_noise[m] = std::fabs(r.taus[m] - rf.taus[m]) + 1e-12 * (1.0 + std::fabs(r.taus[m]));
        if (r.verdict == TwistVerdict::Inconclusive && std::fabs(r.taus[m]) > 10.0 * r.tau_noise[m]) {
            r.verdict = TwistVerdict::IslandCertified;
            r.certified_order = static_cast<int>(m) + 1;
        }
    }
    if (r.verdict == TwistVerdict::Inconclusive && opt.retry && opt.q + 2 <= 6) {
        TwistOptions next = opt;
        next.q += 2;
        next.retry = false;
        return twist_analysis(n, a, h, next, tol);
    }
    if (opt.oracle) {
        try {
            const RotationFit fit = rotation_number_fit(params, orbit, opt.oracle_radii, opt.oracle_iterations, tol);
            r.tau1_oracle = fit.slope;
            r.oracle_rotation = fit.rotation_number;
        } catch (const Error&) {
            // oracle unavailable; the report keeps NaN
        }
    }
    return r;
}

} // namespace stadion
