#pragma once

#include "h3flat/caustics.hpp"
#include "h3flat/surfaces.hpp"

#include <optional>
#include <string>
#include <vector>

namespace h3flat {

struct GeneratorSpec {
    std::string kind = "custom"; // linear | exp | power | fixture:exa9pt1 | fixture:exa9pt2 | custom
    Cx c{0, 0};                  // parameter of linear/exp
    long gamma_num = 0;          // power exponent as an exact fraction
    long gamma_den = 1;
    double lambda = 1.0;

    double gamma() const { return double(gamma_num) / double(gamma_den); }
};

// On-disk surface description: holomorphic data plus the realized surface.
// Serialization is lossless at full double precision.
struct SurfaceDocument {
    int format_version = 1;
    GeneratorSpec generator;
    DiscreteHolomorphic g;
    std::optional<std::vector<Mat2c>> frames;
    std::vector<Vec4> surface;
    std::vector<Vec4> normals;
    FrameKind kind = FrameKind::Flat;
    double t = 0.0;
    double d = 1.0;
};

struct CausticDocument {
    int format_version = 1;
    LatticeDomain domain;
    std::vector<Vec4> points;
    std::vector<double> t_focal;
    double a_weight = 0.5;
    struct Face {
        int m = 0, n = 0; // source horizontal edge (m,n)-(m+1,n)
        double planarity_residual = 0;
        bool embedded = true;
        bool triangle = false;
    };
    std::vector<Face> faces;
};

struct GraphDocument {
    int format_version = 1;
    double d = 1.0;
    bool coincident_vertices = false;
    bool nonembedded_faces = false;
    struct Segment {
        int m = 0, n = 0; // source horizontal edge
        Vec4 a, b;
        bool is_point = false;
    };
    struct Node {
        Vec4 position;
        int valence = 0;
        bool boundary = false;
    };
    std::vector<Segment> segments;
    std::vector<Node> nodes;
    std::vector<double> d_star;
};

// Projected mesh ready for OBJ export.  Quads are kept intact here; the
// split into triangles happens only when writing, along the recorded
// diagonal.
struct MeshDocument {
    std::vector<Vec3> vertices;
    struct Face {
        std::array<std::size_t, 4> corners;
        char split_diagonal = 'r'; // 'r': split along (p, r)
        bool degenerate = false;
        bool singular_adjacent = false;
    };
    std::vector<Face> faces;
    std::string object_name = "surface";
};

std::string to_json(const SurfaceDocument& doc);
SurfaceDocument surface_document_from_json(const std::string& text);

std::string to_json(const CausticDocument& doc);
CausticDocument caustic_document_from_json(const std::string& text);

std::string to_json(const GraphDocument& doc);
GraphDocument graph_document_from_json(const std::string& text);

void save_text(const std::string& path, const std::string& text);
std::string load_text(const std::string& path);

SurfaceDocument make_document(const GeneratorSpec& gen, const DiscreteSurface& s,
                              bool with_frames = false);
CausticDocument make_document(const Caustic& c);
GraphDocument make_document(const SingularGraph& g);

// Reconstructs the surface from the document's holomorphic data (frame
// integrated row-major from the identity, dressed by t for Weingarten
// documents).
DiscreteSurface rebuild_surface(const SurfaceDocument& doc);

enum class BallModel { Poincare, Klein };

MeshDocument project_mesh(const SurfaceDocument& doc, BallModel model);
MeshDocument project_mesh(const CausticDocument& doc, BallModel model);

// Marks faces whose horizontal edges contributed singular-set segments.
void mark_singular_adjacent(MeshDocument& mesh, const SurfaceDocument& doc,
                            const GraphDocument& graph);

// ASCII OBJ: "v x y z" per vertex in document order, "f" lines per quad
// split along the (p,r) diagonal, coordinates with 17 significant digits.
std::string to_obj(const std::vector<MeshDocument>& meshes);
void export_obj(const std::vector<MeshDocument>& meshes, const std::string& path);

} // namespace h3flat
