#pragma once

#include "h3flat/types.hpp"

#include <cstdint>
#include <vector>

namespace h3flat {

struct Vertex {
    int m = 0;
    int n = 0;

    friend bool operator==(Vertex a, Vertex b) { return a.m == b.m && a.n == b.n; }
    friend bool operator!=(Vertex a, Vertex b) { return !(a == b); }
    friend bool operator<(Vertex a, Vertex b) {
        return a.m != b.m ? a.m < b.m : a.n < b.n;
    }
};

enum class EdgeKind { Horizontal, Vertical };

// Edges are stored with the lexicographically smaller endpoint first, so
// edge pq and edge qp resolve to the same identity for weight lookup.
struct Edge {
    Vertex a;
    Vertex b;
    EdgeKind kind = EdgeKind::Horizontal;

    static Edge make(Vertex u, Vertex v);

    friend bool operator==(const Edge& x, const Edge& y) { return x.a == y.a && x.b == y.b; }
};

// Quad with vertices listed counterclockwise starting from the lower-left
// corner p = (m, n):  q = (m+1, n), r = (m+1, n+1), s = (m, n+1).
struct Quad {
    Vertex p;

    Vertex q() const { return {p.m + 1, p.n}; }
    Vertex r() const { return {p.m + 1, p.n + 1}; }
    Vertex s() const { return {p.m, p.n + 1}; }

    Edge edge_pq() const { return Edge::make(p, q()); }
    Edge edge_qr() const { return Edge::make(q(), r()); }
    Edge edge_sr() const { return Edge::make(s(), r()); }
    Edge edge_ps() const { return Edge::make(p, s()); }
};

// Rectangular subgrid of Z^2 with inclusive vertex ranges
// [m_lo, m_hi] x [n_lo, n_hi].  Enumeration of vertices, edges and quads is
// row-major (n outer, m inner) and deterministic.  Immutable once built.
class LatticeDomain {
  public:
    LatticeDomain() = default;
    LatticeDomain(int m_lo, int m_hi, int n_lo, int n_hi);

    int m_lo() const { return m_lo_; }
    int m_hi() const { return m_hi_; }
    int n_lo() const { return n_lo_; }
    int n_hi() const { return n_hi_; }

    int width() const { return m_hi_ - m_lo_ + 1; }
    int height() const { return n_hi_ - n_lo_ + 1; }

    std::size_t vertex_count() const { return std::size_t(width()) * height(); }
    std::size_t horizontal_edge_count() const { return std::size_t(width() - 1) * height(); }
    std::size_t vertical_edge_count() const { return std::size_t(width()) * (height() - 1); }
    std::size_t quad_count() const { return std::size_t(width() - 1) * (height() - 1); }

    bool contains(Vertex v) const {
        return v.m >= m_lo_ && v.m <= m_hi_ && v.n >= n_lo_ && v.n <= n_hi_;
    }
    bool contains(const Edge& e) const { return contains(e.a) && contains(e.b); }
    bool contains(const Quad& f) const { return contains(f.p) && contains(f.r()); }

    std::size_t vertex_index(Vertex v) const {
        return std::size_t(v.n - n_lo_) * width() + (v.m - m_lo_);
    }
    std::size_t horizontal_edge_index(int m, int n) const {
        return std::size_t(n - n_lo_) * (width() - 1) + (m - m_lo_);
    }
    std::size_t vertical_edge_index(int m, int n) const {
        return std::size_t(n - n_lo_) * width() + (m - m_lo_);
    }
    std::size_t edge_index(const Edge& e) const {
        return e.kind == EdgeKind::Horizontal ? horizontal_edge_index(e.a.m, e.a.n)
                                              : vertical_edge_index(e.a.m, e.a.n);
    }
    std::size_t quad_index(const Quad& f) const {
        return std::size_t(f.p.n - n_lo_) * (width() - 1) + (f.p.m - m_lo_);
    }

    std::vector<Vertex> vertices() const;
    std::vector<Edge> horizontal_edges() const;
    std::vector<Edge> vertical_edges() const;
    std::vector<Edge> edges() const;
    std::vector<Quad> quads() const;

    bool on_boundary(Vertex v) const {
        return v.m == m_lo_ || v.m == m_hi_ || v.n == n_lo_ || v.n == n_hi_;
    }

    friend bool operator==(const LatticeDomain& a, const LatticeDomain& b) {
        return a.m_lo_ == b.m_lo_ && a.m_hi_ == b.m_hi_ && a.n_lo_ == b.n_lo_ &&
               a.n_hi_ == b.n_hi_;
    }

  private:
    int m_lo_ = 0, m_hi_ = 1, n_lo_ = 0, n_hi_ = 1;
};

LatticeDomain build_domain(int m_lo, int m_hi, int n_lo, int n_hi);

// Image of the domain under the relabeling (m, n) -> (n, -m).
LatticeDomain rotate90(const LatticeDomain& d);

} // namespace h3flat
