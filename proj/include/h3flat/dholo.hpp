#pragma once

#include "h3flat/lattice.hpp"
#include "h3flat/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace h3flat {

// Discrete holomorphic function g : D -> C with a cross ratio factorizing
// function alpha.  Horizontal weights depend only on the column m of the
// edge (m,n)-(m+1,n), vertical weights only on the row n of the edge
// (m,n)-(m,n+1); the arrays below store exactly that, so the row/column
// constancy constraint holds structurally.  lambda is the free global
// factor; all frame equations consume the product lambda * alpha.
struct DiscreteHolomorphic {
    LatticeDomain domain;
    std::vector<Cx> values;        // per vertex, row-major
    std::vector<double> alpha_h;   // size width()-1, indexed by m - m_lo
    std::vector<double> alpha_v;   // size height()-1, indexed by n - n_lo
    double lambda = 1.0;

    Cx value(Vertex v) const { return values[domain.vertex_index(v)]; }
    Cx& value(Vertex v) { return values[domain.vertex_index(v)]; }

    double alpha(const Edge& e) const {
        return e.kind == EdgeKind::Horizontal ? alpha_h[e.a.m - domain.m_lo()]
                                              : alpha_v[e.a.n - domain.n_lo()];
    }
    double lambda_alpha(const Edge& e) const { return lambda * alpha(e); }

    // Difference g_b - g_a along the canonical edge orientation.
    // Throws DegenerateEdgeError when the endpoints (nearly) coincide.
    Cx dg(const Edge& e) const;
};

// Ordered 4-factor cross ratio
//   (g_q-g_p)(g_r-g_q)^{-1}(g_s-g_r)(g_p-g_s)^{-1}
// written multiplicatively so the convention carries over verbatim to the
// noncommutative (matrix-valued) cross ratio used for surface quads.
Cx cross_ratio(const DiscreteHolomorphic& g, const Quad& quad);
Cx cross_ratio_values(Cx gp, Cx gq, Cx gr, Cx gs);

// Given three corners of a quad and a target cross ratio, solve for the
// fourth.  `missing` indexes the corner in (p,q,r,s) order.
Cx solve_fourth_vertex(Cx cr, Cx gp, Cx gq, Cx gr, Cx gs, int missing);

struct ValidationIssue {
    Quad quad;
    std::string message;
    double deviation = 0;
};

struct ValidationReport {
    bool ok = true;
    double worst_cr_deviation = 0;       // |cr - alpha_h/alpha_v| / |cr|
    std::optional<Quad> worst_quad;
    std::vector<ValidationIssue> issues;
};

// Checks every quad's cross ratio against alpha_h/alpha_v (relative
// tolerance tol), negativity of the ratio, and edge nondegeneracy.
ValidationReport validate(const DiscreteHolomorphic& g, double tol);

// True when every image quad is an embedded quadrilateral in C: all edges
// nondegenerate, the two edge vectors at each corner are not parallel, and
// opposite sides do not cross.
bool properly_embedded(const DiscreteHolomorphic& g, double tol = 1e-12);

// g = c (m + i n) with alpha_h = +1, alpha_v = -1 (every quad cross ratio
// is -1).
DiscreteHolomorphic gen_linear(Cx c, const LatticeDomain& domain, double lambda = 1.0);

// g = e^{c (m + i n)} for c real or pure imaginary; the constant quad cross
// ratio cr < 0 is split as alpha_h = -cr, alpha_v = -1.
DiscreteHolomorphic gen_exp(Cx c, const LatticeDomain& domain, double lambda = 1.0);

// g = e^{c1 m + i c2 n}; discrete holomorphic whenever the quad cross ratio
// is real negative.
DiscreteHolomorphic gen_exp_rect(double c1, double c2, const LatticeDomain& domain,
                                 double lambda = 1.0);

// The value of c2 making e^{c1 m + i c2 n} discrete holomorphic in the
// narrow sense (all cross ratios -1).
double narrow_exp_c2(double c1);

enum class PowerFill {
    // Column-by-column recurrence b_{m+1} = p_m b_m - p_m^2 c_m,
    // c_{m+1} = b_m + p_m c_m with c_0 = 1, b_0 = g_{0,n+1} - g_{0,n}.
    Recurrence,
    // Quad-by-quad solve of cross ratio = -1 from the two axes.
    CrossRatio,
};

// Discrete power function z^gamma for gamma in (0,2) on [0,M]x[0,N]:
// g_{0,0} = 0, g_{1,0} = 1, g_{0,1} = i^gamma (principal branch
// e^{i pi gamma / 2}); axis values from the closed Pochhammer formulas,
// interior filled per `fill`.  alpha_h = +1, alpha_v = -1.
DiscreteHolomorphic gen_power(double gamma, int M, int N, double lambda = 1.0,
                              PowerFill fill = PowerFill::Recurrence);

// Closed-form axis value g_{m,0} of the discrete power function.
Cx power_axis_value(double gamma, int m);

// (a)_m = a (a+1) ... (a+m-1)
double pochhammer(double a, int m);

// Dual function: ghat_q - ghat_p = -alpha_pq / (g_q - g_p), propagated from
// `init` at the lower-left base vertex; path independence around every quad
// is verified to closure_tol.  The dual carries the same alpha and lambda.
DiscreteHolomorphic dual_function(const DiscreteHolomorphic& g, Cx init,
                                  double closure_tol = 1e-12);

// If lambda*alpha < 0 on horizontal edges, relabel (m,n) -> (n,-m) so the
// negative weights sit on vertical edges; otherwise return g unchanged.
// Mixed signs raise an error.
DiscreteHolomorphic rotate_domain_90(const DiscreteHolomorphic& g);

// Reference fixtures: explicit functions on [-1,1]x[-1,2] with all cross
// ratios -1, completed from their seed values.  Weight convention
// alpha_h = +1, alpha_v = -1 so the focal machinery applies with
// lambda > 0 without a domain rotation.
DiscreteHolomorphic fixture_exa9pt1(double lambda = 0.01);
DiscreteHolomorphic fixture_exa9pt2(double lambda = 0.01);

// Residual of the defining recursion
//   gamma g = 2m (g_{m+1,n}-g)(g-g_{m-1,n})/(g_{m+1,n}-g_{m-1,n})
//           + 2n (g_{m,n+1}-g)(g-g_{m,n-1})/(g_{m,n+1}-g_{m,n-1})
// at an interior vertex, normalized by |gamma g| (or 1 near zero).
double power_recursion_residual(const DiscreteHolomorphic& g, double gamma, Vertex v);

} // namespace h3flat
