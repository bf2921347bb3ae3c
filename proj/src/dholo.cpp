#include "h3flat/dholo.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace h3flat {

namespace {

constexpr double kDegenerateRel = 1e-13;

std::string vertex_str(Vertex v) {
    return "(" + std::to_string(v.m) + "," + std::to_string(v.n) + ")";
}

std::string edge_str(const Edge& e) { return vertex_str(e.a) + "-" + vertex_str(e.b); }

Cx checked_diff(Cx ga, Cx gb, const std::string& where) {
    const Cx d = gb - ga;
    const double scale = std::max({std::abs(ga), std::abs(gb), 1.0});
    if (std::abs(d) < kDegenerateRel * scale)
        throw DegenerateEdgeError("degenerate edge " + where);
    return d;
}

// 2D orientation of the triangle (a, b, c) in C.
double orient(Cx a, Cx b, Cx c) {
    const Cx u = b - a, v = c - a;
    return u.real() * v.imag() - u.imag() * v.real();
}

bool segments_cross(Cx a, Cx b, Cx c, Cx d) {
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

} // namespace

Cx DiscreteHolomorphic::dg(const Edge& e) const {
    return checked_diff(value(e.a), value(e.b), edge_str(e));
}

Cx cross_ratio_values(Cx gp, Cx gq, Cx gr, Cx gs) {
    const Cx a = checked_diff(gp, gq, "pq");
    const Cx b = checked_diff(gq, gr, "qr");
    const Cx c = checked_diff(gr, gs, "rs");
    const Cx d = checked_diff(gs, gp, "sp");
    return a * (1.0 / b) * c * (1.0 / d);
}

Cx cross_ratio(const DiscreteHolomorphic& g, const Quad& quad) {
    if (!g.domain.contains(quad)) throw GeometryError("cross_ratio: quad outside domain");
    return cross_ratio_values(g.value(quad.p), g.value(quad.q()), g.value(quad.r()),
                              g.value(quad.s()));
}

Cx solve_fourth_vertex(Cx cr, Cx gp, Cx gq, Cx gr, Cx gs, int missing) {
    switch (missing) {
        case 0: {
            const Cx B = gr - gq, C = gs - gr;
            const Cx den = C + cr * B;
            if (std::abs(den) == 0.0) throw PropagationError("solve_fourth_vertex: singular");
            return (C * gq + cr * B * gs) / den;
        }
        case 1: {
            const Cx C = gs - gr, D = gp - gs;
            const Cx den = C + cr * D;
            if (std::abs(den) == 0.0) throw PropagationError("solve_fourth_vertex: singular");
            return (C * gp + cr * D * gr) / den;
        }
        case 2: {
            const Cx A = gq - gp, D = gp - gs;
            const Cx den = A + cr * D;
            if (std::abs(den) == 0.0) throw PropagationError("solve_fourth_vertex: singular");
            return gq - A * (A + D) / den;
        }
        case 3: {
            const Cx A = gq - gp, B = gr - gq;
            const Cx den = A + cr * B;
            if (std::abs(den) == 0.0) throw PropagationError("solve_fourth_vertex: singular");
            return (A * gr + cr * B * gp) / den;
        }
        default:
            throw std::invalid_argument("solve_fourth_vertex: missing must be 0..3");
    }
}

ValidationReport validate(const DiscreteHolomorphic& g, double tol) {
    ValidationReport rep;
    auto flag = [&](const Quad& q, std::string msg, double dev) {
        rep.ok = false;
        rep.issues.push_back({q, std::move(msg), dev});
    };

    // Sign structure: every quad's alpha_h/alpha_v must be negative, which
    // for a rectangle forces uniform signs per family.
    const bool h_pos = !g.alpha_h.empty() && g.alpha_h.front() > 0;
    for (double a : g.alpha_h)
        if (a == 0 || (a > 0) != h_pos) {
            rep.ok = false;
            rep.issues.push_back({Quad{}, "alpha_h changes sign or vanishes", 0});
            break;
        }
    for (double a : g.alpha_v)
        if (a == 0 || (a > 0) == h_pos) {
            rep.ok = false;
            rep.issues.push_back({Quad{}, "alpha_v must have the opposite sign of alpha_h", 0});
            break;
        }

    for (const Quad& q : g.domain.quads()) {
        Cx cr;
        try {
            cr = cross_ratio(g, q);
        } catch (const DegenerateEdgeError& e) {
            flag(q, e.what(), std::abs(g.value(q.p)));
            continue;
        }
        const double target = g.alpha_h[q.p.m - g.domain.m_lo()] /
                              g.alpha_v[q.p.n - g.domain.n_lo()];
        const double dev = std::abs(cr - Cx(target, 0)) / std::abs(cr);
        if (dev > rep.worst_cr_deviation) {
            rep.worst_cr_deviation = dev;
            rep.worst_quad = q;
        }
        if (dev > tol)
            flag(q, "cross ratio deviates from alpha_h/alpha_v at quad " + vertex_str(q.p), dev);
        else if (cr.real() >= 0)
            flag(q, "cross ratio is not negative at quad " + vertex_str(q.p), cr.real());
    }
    return rep;
}

bool properly_embedded(const DiscreteHolomorphic& g, double tol) {
    for (const Quad& q : g.domain.quads()) {
        const Cx zp = g.value(q.p), zq = g.value(q.q()), zr = g.value(q.r()),
                 zs = g.value(q.s());
        try {
            (void)checked_diff(zp, zq, "pq");
            (void)checked_diff(zq, zr, "qr");
            (void)checked_diff(zr, zs, "rs");
            (void)checked_diff(zs, zp, "sp");
        } catch (const DegenerateEdgeError&) {
            return false;
        }
        const std::array<Cx, 4> z{zp, zq, zr, zs};
        for (int i = 0; i < 4; ++i) {
            const Cx u = z[(i + 1) % 4] - z[i];
            const Cx v = z[(i + 3) % 4] - z[i];
            const double cross = u.real() * v.imag() - u.imag() * v.real();
            if (std::abs(cross) <= tol * std::abs(u) * std::abs(v)) return false;
        }
        if (segments_cross(zp, zq, zr, zs) || segments_cross(zq, zr, zs, zp)) return false;
    }
    return true;
}

DiscreteHolomorphic gen_linear(Cx c, const LatticeDomain& domain, double lambda) {
    if (c == Cx(0, 0)) throw std::invalid_argument("gen_linear: c must be nonzero");
    DiscreteHolomorphic g;
    g.domain = domain;
    g.lambda = lambda;
    g.values.reserve(domain.vertex_count());
    for (const Vertex& v : domain.vertices()) g.values.push_back(c * Cx(v.m, v.n));
    g.alpha_h.assign(domain.width() - 1, 1.0);
    g.alpha_v.assign(domain.height() - 1, -1.0);
    return g;
}

DiscreteHolomorphic gen_exp(Cx c, const LatticeDomain& domain, double lambda) {
    if (c == Cx(0, 0)) throw std::invalid_argument("gen_exp: c must be nonzero");
    const double a = std::abs(c);
    if (std::min(std::abs(c.real()), std::abs(c.imag())) > 1e-12 * a)
        throw std::invalid_argument("gen_exp: c must be real or pure imaginary");
    DiscreteHolomorphic g;
    g.domain = domain;
    g.lambda = lambda;
    g.values.reserve(domain.vertex_count());
    // evaluate in extended precision: the concircularity of far-out quads
    // amplifies any inconsistency between the rounded values
    const std::complex<long double> cl(c.real(), c.imag());
    for (const Vertex& v : domain.vertices()) {
        const std::complex<long double> z = std::exp(cl * std::complex<long double>(v.m, v.n));
        g.values.push_back(Cx(double(z.real()), double(z.imag())));
    }
    // cr is the same on every quad; split it as alpha_h / alpha_v with
    // alpha_v = -1.
    const Quad q0{{domain.m_lo(), domain.n_lo()}};
    const Cx cr = cross_ratio_values(g.value(q0.p), g.value(q0.q()), g.value(q0.r()),
                                     g.value(q0.s()));
    if (std::abs(cr.imag()) > 1e-10 * std::abs(cr) || cr.real() >= 0)
        throw GeometryError("gen_exp: cross ratio is not negative real");
    g.alpha_h.assign(domain.width() - 1, -cr.real());
    g.alpha_v.assign(domain.height() - 1, -1.0);
    return g;
}

DiscreteHolomorphic gen_exp_rect(double c1, double c2, const LatticeDomain& domain,
                                 double lambda) {
    DiscreteHolomorphic g;
    g.domain = domain;
    g.lambda = lambda;
    g.values.reserve(domain.vertex_count());
    for (const Vertex& v : domain.vertices()) {
        const std::complex<long double> z =
            std::exp(std::complex<long double>(c1 * v.m, c2 * v.n));
        g.values.push_back(Cx(double(z.real()), double(z.imag())));
    }
    const Quad q0{{domain.m_lo(), domain.n_lo()}};
    const Cx cr = cross_ratio_values(g.value(q0.p), g.value(q0.q()), g.value(q0.r()),
                                     g.value(q0.s()));
    if (std::abs(cr.imag()) > 1e-10 * std::abs(cr) || cr.real() >= 0)
        throw GeometryError("gen_exp_rect: cross ratio is not negative real");
    g.alpha_h.assign(domain.width() - 1, -cr.real());
    g.alpha_v.assign(domain.height() - 1, -1.0);
    return g;
}

double narrow_exp_c2(double c1) {
    // For g = e^{c1 m + i c2 n} the quad cross ratio is
    // (u-1)^2 z / (u (z-1)^2) with u = e^{c1}, z = e^{i c2}; setting it to
    // -1 gives u z^2 + (u^2 - 4u + 1) z + u = 0, and cr = -1 requires the
    // unit-circle root.
    const double u = std::exp(c1);
    const double K = u * u - 4 * u + 1;
    const double disc = 4 * u * u - K * K;
    if (disc <= 0) throw GeometryError("narrow_exp_c2: no unit-circle solution for this c1");
    return std::atan2(std::sqrt(disc), -K);
}

namespace {

// The cross-ratio propagation is severely ill conditioned: perturbing the
// seed g_{0,1} by machine epsilon while keeping the axes fixed breaks the
// integrable structure and the error grows by ~1e12 over 20 rows.  The
// lattice is therefore propagated in quadruple precision and rounded to
// double at the end; the rounded values then carry only their own
// representation error.
struct QC {
    __float128 re{}, im{};
    friend QC operator+(QC a, QC b) { return {a.re + b.re, a.im + b.im}; }
    friend QC operator-(QC a, QC b) { return {a.re - b.re, a.im - b.im}; }
    friend QC operator*(QC a, QC b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend QC operator/(QC a, QC b) {
        const __float128 d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    Cx round() const { return Cx(double(re), double(im)); }
    bool zero() const { return re == 0 && im == 0; }
};

__float128 pochhammer_q(__float128 a, int m) {
    __float128 p = 1;
    for (int k = 0; k < m; ++k) p *= a + k;
    return p;
}

__float128 power_axis_q(__float128 gamma, int m) {
    if (m == 0) return 0;
    if (m % 2 == 0) {
        const int k = m / 2;
        return -__float128(k) * pochhammer_q(gamma / 2, k) / pochhammer_q(-gamma / 2, k + 1);
    }
    const int k = (m - 1) / 2;
    return -pochhammer_q(gamma / 2, k + 1) / pochhammer_q(-gamma / 2, k + 1);
}

} // namespace

double pochhammer(double a, int m) {
    double p = 1.0;
    for (int k = 0; k < m; ++k) p *= a + k;
    return p;
}

Cx power_axis_value(double gamma, int m) {
    return Cx(double(power_axis_q(gamma, m)), 0.0);
}

DiscreteHolomorphic gen_power(double gamma, int M, int N, double lambda, PowerFill fill) {
    if (!(gamma > 0.0 && gamma < 2.0))
        throw std::invalid_argument("gen_power: gamma must lie in (0,2)");
    if (M < 1 || N < 1) throw std::invalid_argument("gen_power: M, N must be >= 1");

    DiscreteHolomorphic g;
    g.domain = build_domain(0, M, 0, N);
    g.lambda = lambda;
    g.values.assign(g.domain.vertex_count(), Cx(0, 0));
    g.alpha_h.assign(M, 1.0);
    g.alpha_v.assign(N, -1.0);

    std::vector<QC> grid(std::size_t(M + 1) * (N + 1));
    auto at = [&](int m, int n) -> QC& { return grid[std::size_t(n) * (M + 1) + m]; };

    const __float128 pi_q = 2 * asinq(1);
    const __float128 gq = __float128(gamma);
    const QC i_gamma{cosq(pi_q * gq / 2), sinq(pi_q * gq / 2)};
    for (int m = 0; m <= M; ++m) at(m, 0) = QC{power_axis_q(gq, m), 0};
    for (int n = 1; n <= N; ++n) at(0, n) = i_gamma * QC{power_axis_q(gq, n), 0};

    if (fill == PowerFill::Recurrence) {
        for (int n = 0; n < N; ++n) {
            QC b = at(0, n + 1) - at(0, n);
            QC c{1, 0};
            for (int m = 0; m <= M; ++m) {
                if (c.zero())
                    throw PropagationError("gen_power: recurrence blow-up (c_m = 0) at " +
                                           vertex_str({m, n + 1}));
                if (m >= 1) at(m, n + 1) = at(m, n) + b / c;
                if (m < M) {
                    const QC p = at(m + 1, n) - at(m, n);
                    const QC b_next = p * b - p * p * c;
                    const QC c_next = b + p * c;
                    b = b_next;
                    c = c_next;
                }
            }
        }
    } else {
        // quad-by-quad solve of cr = -1 for the fourth corner:
        // r = q - A (A + D) / (A - D) with A = q - p, D = p - s
        for (int n = 0; n < N; ++n)
            for (int m = 0; m < M; ++m) {
                const QC A = at(m + 1, n) - at(m, n);
                const QC D = at(m, n) - at(m, n + 1);
                const QC den = A - D;
                if (den.zero())
                    throw PropagationError("gen_power: degenerate quad at " +
                                           vertex_str({m, n}));
                at(m + 1, n + 1) = at(m + 1, n) - A * (A + D) / den;
            }
    }
    for (int n = 0; n <= N; ++n)
        for (int m = 0; m <= M; ++m) g.value({m, n}) = at(m, n).round();
    return g;
}

double power_recursion_residual(const DiscreteHolomorphic& g, double gamma, Vertex v) {
    if (!g.domain.contains(Vertex{v.m - 1, v.n - 1}) ||
        !g.domain.contains(Vertex{v.m + 1, v.n + 1}))
        throw GeometryError("power_recursion_residual: vertex is not interior");
    const Cx gc = g.value(v);
    const Cx gr = g.value({v.m + 1, v.n}), gl = g.value({v.m - 1, v.n});
    const Cx gu = g.value({v.m, v.n + 1}), gd = g.value({v.m, v.n - 1});
    const Cx rhs = 2.0 * double(v.m) * (gr - gc) * (gc - gl) / (gr - gl) +
                   2.0 * double(v.n) * (gu - gc) * (gc - gd) / (gu - gd);
    const double denom = std::max(std::abs(gamma * gc), 1e-30);
    return std::abs(gamma * gc - rhs) / denom;
}

DiscreteHolomorphic dual_function(const DiscreteHolomorphic& g, Cx init, double closure_tol) {
    DiscreteHolomorphic h = g; // same domain, alpha, lambda
    auto inc = [&](const Edge& e) { return -g.alpha(e) / g.dg(e); };

    const LatticeDomain& d = g.domain;
    h.values.assign(d.vertex_count(), Cx(0, 0));
    h.value({d.m_lo(), d.n_lo()}) = init;
    for (int m = d.m_lo() + 1; m <= d.m_hi(); ++m)
        h.value({m, d.n_lo()}) =
            h.value({m - 1, d.n_lo()}) + inc(Edge::make({m - 1, d.n_lo()}, {m, d.n_lo()}));
    for (int m = d.m_lo(); m <= d.m_hi(); ++m)
        for (int n = d.n_lo() + 1; n <= d.n_hi(); ++n)
            h.value({m, n}) = h.value({m, n - 1}) + inc(Edge::make({m, n - 1}, {m, n}));

    for (const Quad& q : d.quads()) {
        const Cx defect = inc(q.edge_pq()) + inc(q.edge_qr()) - inc(q.edge_sr()) -
                          inc(q.edge_ps());
        if (std::abs(defect) > closure_tol)
            throw GeometryError("dual_function: closure defect " +
                                std::to_string(std::abs(defect)) + " at quad " +
                                vertex_str(q.p));
    }
    return h;
}

DiscreteHolomorphic rotate_domain_90(const DiscreteHolomorphic& g) {
    const bool v_neg =
        std::all_of(g.alpha_v.begin(), g.alpha_v.end(),
                    [&](double a) { return g.lambda * a < 0; });
    if (v_neg) return g;
    const bool h_neg =
        std::all_of(g.alpha_h.begin(), g.alpha_h.end(),
                    [&](double a) { return g.lambda * a < 0; });
    if (!h_neg)
        throw GeometryError("rotate_domain_90: lambda*alpha has mixed signs per edge family");

    DiscreteHolomorphic r;
    r.domain = rotate90(g.domain);
    r.lambda = g.lambda;
    r.values.assign(r.domain.vertex_count(), Cx(0, 0));
    for (const Vertex& v : g.domain.vertices()) r.value({v.n, -v.m}) = g.value(v);
    // Old vertical edge (m,n)-(m,n+1) becomes the new horizontal edge at
    // column n; old horizontal edge (m,n)-(m+1,n) becomes the new vertical
    // edge at row -m-1.
    r.alpha_h = g.alpha_v;
    r.alpha_v.assign(g.alpha_h.rbegin(), g.alpha_h.rend());
    return r;
}

namespace {

DiscreteHolomorphic complete_fixture(const std::array<Cx, 6>& seed, double lambda) {
    DiscreteHolomorphic g;
    g.domain = build_domain(-1, 1, -1, 2);
    g.lambda = lambda;
    g.values.assign(g.domain.vertex_count(), Cx(0, 0));
    g.alpha_h.assign(2, 1.0);
    g.alpha_v.assign(3, -1.0);

    g.value({0, -1}) = seed[0];
    g.value({0, 0}) = seed[1];
    g.value({0, 1}) = seed[2];
    g.value({0, 2}) = seed[3];
    g.value({-1, 0}) = seed[4];
    g.value({1, 0}) = seed[5];

    const Cx cr(-1, 0);
    auto val = [&](int m, int n) { return g.value({m, n}); };
    // column m = 1
    g.value({1, 1}) = solve_fourth_vertex(cr, val(0, 0), val(1, 0), {}, val(0, 1), 2);
    g.value({1, 2}) = solve_fourth_vertex(cr, val(0, 1), val(1, 1), {}, val(0, 2), 2);
    g.value({1, -1}) = solve_fourth_vertex(cr, val(0, -1), {}, val(1, 0), val(0, 0), 1);
    // column m = -1
    g.value({-1, 1}) = solve_fourth_vertex(cr, val(-1, 0), val(0, 0), val(0, 1), {}, 3);
    g.value({-1, 2}) = solve_fourth_vertex(cr, val(-1, 1), val(0, 1), val(0, 2), {}, 3);
    g.value({-1, -1}) = solve_fourth_vertex(cr, {}, val(0, -1), val(0, 0), val(-1, 0), 0);
    return g;
}

} // namespace

DiscreteHolomorphic fixture_exa9pt1(double lambda) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    const double th = -2.0 * std::numbers::pi / 5.0;
    const std::array<Cx, 6> seed{
        Cx(1.0 / 3.0, -6.0),
        Cx(1.0 / 3.0, 0.0),
        Cx(1.0 / 3.0, 1.0),
        Cx(10.0 / 3.0, 10.0),
        Cx(1.0 / 3.0 - 0.5 * sqrt(35.0) + 3.0 * cos(th), 0.5 + 3.0 * sin(th)),
        Cx(1.0 / 3.0 + 0.5 * sqrt(15.0) + 2.0 * cos(th), 0.5 + 2.0 * sin(th)),
    };
    return complete_fixture(seed, lambda);
}

DiscreteHolomorphic fixture_exa9pt2(double lambda) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    const double th1 = -std::numbers::pi / 10.0;
    const double th2 = -3.0 * std::numbers::pi / 5.0;
    const std::array<Cx, 6> seed{
        Cx(1.0, -3.0 / 5.0),
        Cx(0.0, 0.0),
        Cx(0.0, 1.0),
        Cx(1.0, 8.0 / 5.0),
        Cx(-sqrt(90.0) + 9.5 * cos(th1), 0.5 + 9.5 * sin(th1)),
        Cx(-sqrt(6.0) + 2.5 * cos(th2), 0.5 + 2.5 * sin(th2)),
    };
    return complete_fixture(seed, lambda);
}

} // namespace h3flat
