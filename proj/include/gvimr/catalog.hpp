#pragma once

#include "gvimr/applications.hpp"
#include "gvimr/solver.hpp"

#include <string>
#include <vector>

namespace gvimr {

/// Fixed-point problem with a closed-form projection onto Fix(S) and a
/// hand-derived limit of the scheme.
struct CatalogProblem {
    std::string name;
    SchemeConfig config;
    HilbertPoint x0;
    PointMap fix_projection;
    HilbertPoint expected_limit;
    /// box from which test points are sampled
    std::vector<double> sample_lo, sample_hi;
};

/// Problems whose limit z satisfies gamma Q(z) = B z, so the fixed-point
/// residual of the iterates vanishes geometrically rather than like alpha_n.
std::vector<CatalogProblem> fixed_point_catalog();

/// S = projection onto the line x_2 = 0, Q = (1, 2), gamma = 1/2, B = I.
/// The limit (1/2, 0) has gamma Q(z) - B z = (0, 1), so ||x_n - S x_n|| is
/// about alpha_n.
CatalogProblem biased_line_problem();

struct VipCatalogEntry {
    std::string name;
    VIProblem problem;
    /// nullopt when every point of K solves the problem
    std::optional<HilbertPoint> expected_solution;
};

std::vector<VipCatalogEntry> vip_catalog();

} // namespace gvimr
