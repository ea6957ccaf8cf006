#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmhull {

using Vec = std::vector<double>;

/// Thrown when a point set is affinely dependent at the working tolerance.
/// `rank` is the affine rank that was achieved before getting stuck.
struct DegenerateInput : std::runtime_error {
    DegenerateInput(const std::string& what, int rank_achieved)
        : std::runtime_error(what), rank(rank_achieved) {}
    int rank = 0;
};

/// One (d-1)-simplex facet of a hull. `vertex_ids` index into
/// ConvexHull::vertices; `normal` is unit outward and the facet hyperplane
/// is { x : <normal, x> = offset }.
struct Facet {
    std::vector<int> vertex_ids;
    Vec normal;
    double offset = 0.0;
};

struct ConvexHull {
    int dim = 0;
    std::vector<Vec> vertices;
    std::vector<Facet> facets;
    Vec interior_point;  // centroid of the hull vertices
};

struct Ball {
    Vec center;
    double radius = 0.0;
};

struct BoxEnvelope {
    Vec center;
    Vec halfwidths;
};

/// Incremental (beneath-beyond) convex hull with simplicial facets.
/// Side-of-hyperplane tests use eps = tol * bounding-box diagonal.
/// Throws DegenerateInput when the points do not span d affine dimensions.
ConvexHull build_hull(const double* points, std::size_t count, int dim,
                      double tol = 1e-9);
ConvexHull build_hull(const std::vector<Vec>& points, double tol = 1e-9);

/// Sum over facets of the pyramid volumes to the interior point.
double hull_volume(const ConvexHull& hull);

/// Sum of facet (d-1)-measures, each sqrt(det G)/(d-1)! from the
/// edge-vector Gram matrix.
double hull_surface_area(const ConvexHull& hull);

/// Max pairwise Euclidean distance (all-pairs scan).
double diameter(const std::vector<Vec>& points);
double diameter(const double* points, std::size_t count, int dim);

/// Smallest ball containing the points (Welzl, move-to-front). The result
/// is certified by a support set of at most d+1 boundary points.
Ball min_enclosing_ball(const std::vector<Vec>& points, double tol = 1e-9);
Ball min_enclosing_ball(const double* points, std::size_t count, int dim,
                        double tol = 1e-9);

/// The 2^d corners of the centered axis-aligned hyperrectangle.
std::vector<Vec> hyperrectangle_corners(const Vec& halfwidths);

/// Per-coordinate min/max envelope of a point set.
BoxEnvelope circumscribed_box(const std::vector<Vec>& points);

/// Debug text format: one vertex per line (d floats), then one facet per
/// line (d vertex indices). Test use only.
std::string dump_hull(const ConvexHull& hull);

}  // namespace bmhull
