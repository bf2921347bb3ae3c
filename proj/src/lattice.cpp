#include "h3flat/lattice.hpp"

namespace h3flat {

Edge Edge::make(Vertex u, Vertex v) {
    if (v < u) std::swap(u, v);
    Edge e;
    e.a = u;
    e.b = v;
    if (u.m + 1 == v.m && u.n == v.n) {
        e.kind = EdgeKind::Horizontal;
    } else if (u.m == v.m && u.n + 1 == v.n) {
        e.kind = EdgeKind::Vertical;
    } else {
        throw GeometryError("Edge::make: vertices are not lattice-adjacent");
    }
    return e;
}

LatticeDomain::LatticeDomain(int m_lo, int m_hi, int n_lo, int n_hi)
    : m_lo_(m_lo), m_hi_(m_hi), n_lo_(n_lo), n_hi_(n_hi) {
    if (m_lo >= m_hi || n_lo >= n_hi)
        throw std::invalid_argument("LatticeDomain: ranges must satisfy m_lo < m_hi, n_lo < n_hi");
}

std::vector<Vertex> LatticeDomain::vertices() const {
    std::vector<Vertex> out;
    out.reserve(vertex_count());
    for (int n = n_lo_; n <= n_hi_; ++n)
        for (int m = m_lo_; m <= m_hi_; ++m) out.push_back({m, n});
    return out;
}

std::vector<Edge> LatticeDomain::horizontal_edges() const {
    std::vector<Edge> out;
    out.reserve(horizontal_edge_count());
    for (int n = n_lo_; n <= n_hi_; ++n)
        for (int m = m_lo_; m < m_hi_; ++m) out.push_back(Edge::make({m, n}, {m + 1, n}));
    return out;
}

std::vector<Edge> LatticeDomain::vertical_edges() const {
    std::vector<Edge> out;
    out.reserve(vertical_edge_count());
    for (int n = n_lo_; n < n_hi_; ++n)
        for (int m = m_lo_; m <= m_hi_; ++m) out.push_back(Edge::make({m, n}, {m, n + 1}));
    return out;
}

std::vector<Edge> LatticeDomain::edges() const {
    std::vector<Edge> out = horizontal_edges();
    std::vector<Edge> v = vertical_edges();
    out.insert(out.end(), v.begin(), v.end());
    return out;
}

std::vector<Quad> LatticeDomain::quads() const {
    std::vector<Quad> out;
    out.reserve(quad_count());
    for (int n = n_lo_; n < n_hi_; ++n)
        for (int m = m_lo_; m < m_hi_; ++m) out.push_back(Quad{{m, n}});
    return out;
}

LatticeDomain build_domain(int m_lo, int m_hi, int n_lo, int n_hi) {
    return LatticeDomain(m_lo, m_hi, n_lo, n_hi);
}

LatticeDomain rotate90(const LatticeDomain& d) {
    return LatticeDomain(d.n_lo(), d.n_hi(), -d.m_hi(), -d.m_lo());
}

} // namespace h3flat
