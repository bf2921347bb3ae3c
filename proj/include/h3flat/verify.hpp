#pragma once

#include "h3flat/io.hpp"

#include <string>
#include <vector>

namespace h3flat {

struct SuiteResult {
    enum class Status { Pass, Fail, Skipped };
    std::string name;
    Status status = Status::Pass;
    double worst = 0;
    double tolerance = 0;
    std::string detail;

    bool failed() const { return status == Status::Fail; }
};

struct VerifyOptions {
    // Multiplies every suite tolerance; driven by H3FLAT_TOL / 1e-9 in the
    // CLI so the whole report can be tightened or loosened coherently.
    double tol_scale = 1.0;
    std::vector<double> t_samples{0.0, 0.25, 0.5, 0.75, 1.0};
    bool run_stokes = false;
};

// Per-theorem verification suites for a surface document.
std::vector<SuiteResult> verify_document(const SurfaceDocument& doc, const VerifyOptions& opt);

// Valence suite for a computed singular graph (skips itself when the
// theorem's hypotheses are violated).
SuiteResult verify_singular_valence(const SingularGraph& graph);

// Individual residual computations, shared with the acceptance suite.
double worst_concircularity_defect(const DiscreteSurface& s);
double worst_arctanh_sum(const DiscreteHolomorphic& g);
double worst_quad_compatibility(const MoebiusFrame& frame);
double surface_path_spread(const DiscreteHolomorphic& g, bool bryant);
double projection_formula_spread(int samples, unsigned seed);

struct GaussAreaWorst {
    double area_mismatch = 0; // |A_f - A_N| / |A_f|
    double mixed_area = 0;    // |MA| / |A_f|
    double lightcone = 0;
};
GaussAreaWorst worst_gauss_area(const DiscreteSurface& s);

struct CausticWorst {
    double pq_disagreement = 0;   // focal point from p-side vs q-side
    double lift_vs_focal = 0;     // sym(lift) vs geometric focal point, a in {0, 1/2, 1}
    double tanh_consistency = 0;  // tanh|t| vs the R^{3,1} distance formula
    double face_planarity = 0;
};
CausticWorst worst_caustic(const DiscreteSurface& s);

struct ParallelWorst {
    double route_mismatch = 0; // frame-scaling route vs cosh/sinh route
    double hdist_mismatch = 0; // hdist(f, f^d) vs |log d|
};
ParallelWorst worst_parallel(const DiscreteSurface& s, const std::vector<double>& ds);

struct DualityWorst {
    double increment_residual = 0; // ghat increments vs -alpha/dg
    double parallel_relation = 0;  // dual-frame surface vs cosh/sinh parallel of f
};
DualityWorst worst_duality(const DiscreteSurface& s);

std::string to_json(const std::vector<SuiteResult>& results);
bool all_passed_or_skipped(const std::vector<SuiteResult>& results);

} // namespace h3flat
