#include "bmhull/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <sstream>

namespace bmhull {

namespace {

constexpr int kMaxDim = 16;

inline double sq(double x) { return x * x; }

double dist2(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += sq(a[i] - b[i]);
    return s;
}

double dot(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += a[i] * b[i];
    return s;
}

// In-place lower Cholesky factor of a row-major k x k SPD matrix.
bool cholesky(double* a, int k) {
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i * k + j];
            for (int t = 0; t < j; ++t) s -= a[i * k + t] * a[j * k + t];
            if (i == j) {
                if (s <= 0.0) return false;
                a[i * k + i] = std::sqrt(s);
            } else {
                a[i * k + j] = s / a[j * k + j];
            }
        }
    }
    return true;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

// ---------------------------------------------------------------------------
// Quickhull (incremental beneath-beyond with outside sets and horizon repair)
// ---------------------------------------------------------------------------

class HullBuilder {
  public:
    HullBuilder(const double* pts, std::size_t m, int d, double tol)
        : pts_(pts), m_(m), d_(d), tol_(tol) {}

    ConvexHull build();

  private:
    const double* p(int id) const { return pts_ + std::size_t(id) * d_; }
    int* verts(int f) { return fverts_.data() + std::size_t(f) * d_; }
    const int* verts(int f) const { return fverts_.data() + std::size_t(f) * d_; }
    int* neigh(int f) { return fneigh_.data() + std::size_t(f) * d_; }
    double* normal(int f) { return fnorm_.data() + std::size_t(f) * d_; }
    const double* normal(int f) const { return fnorm_.data() + std::size_t(f) * d_; }

    double signed_dist(int f, const double* x) const {
        return dot(normal(f), x, d_) - foff_[f];
    }

    int alloc_facet();
    void compute_plane(int f);
    void compute_bbox();
    void initial_simplex();
    void seed_facets();
    void insert_apex(int apex, int seed_facet);
    void assign_point(int id, const std::vector<int>& facets);

    const double* pts_;
    std::size_t m_;
    int d_;
    double tol_;
    double scale_ = 0.0, eps_ = 0.0;

    std::vector<int> simplex_;        // d+1 initial vertex ids
    std::vector<double> interior_;    // strictly interior reference point

    std::vector<int> fverts_, fneigh_;
    std::vector<double> fnorm_, foff_;
    std::vector<char> alive_;
    std::vector<int> mark_;
    int epoch_ = 0;
    std::vector<std::vector<int>> outside_;
    std::vector<int> furthest_;
    std::vector<double> furthest_d_;
    std::vector<int> free_slots_;
    std::vector<int> pending_;

    // scratch
    struct HorizonEdge {
        int facet, slot, outer;
    };
    struct RidgeEntry {
        std::array<int, kMaxDim - 2> key;
        int facet, slot;
    };
    std::vector<double> basis_, work_;
    std::vector<int> visible_, stack_, orphans_, created_;
    std::vector<HorizonEdge> horizon_;
    std::vector<RidgeEntry> ridges_;
};

int HullBuilder::alloc_facet() {
    int f;
    if (!free_slots_.empty()) {
        f = free_slots_.back();
        free_slots_.pop_back();
        outside_[f].clear();
    } else {
        f = static_cast<int>(foff_.size());
        fverts_.resize(fverts_.size() + d_);
        fneigh_.resize(fneigh_.size() + d_);
        fnorm_.resize(fnorm_.size() + d_);
        foff_.push_back(0.0);
        alive_.push_back(0);
        mark_.push_back(-1);
        outside_.emplace_back();
        furthest_.push_back(-1);
        furthest_d_.push_back(0.0);
        return f;
    }
    foff_[f] = 0.0;
    mark_[f] = -1;
    furthest_[f] = -1;
    furthest_d_[f] = 0.0;
    return f;
}

// Unit normal of the hyperplane through the facet's d vertices, oriented
// away from the interior reference point.
void HullBuilder::compute_plane(int f) {
    const int* v = verts(f);
    const double* origin = p(v[0]);
    basis_.assign(std::size_t(d_ - 1) * d_, 0.0);
    int nb = 0;
    for (int i = 1; i < d_; ++i) {
        double* row = basis_.data() + std::size_t(nb) * d_;
        for (int c = 0; c < d_; ++c) row[c] = p(v[i])[c] - origin[c];
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < nb; ++j) {
                const double* bj = basis_.data() + std::size_t(j) * d_;
                double proj = dot(row, bj, d_);
                for (int c = 0; c < d_; ++c) row[c] -= proj * bj[c];
            }
        }
        double nrm = std::sqrt(dot(row, row, d_));
        if (nrm > 0.0) {
            for (int c = 0; c < d_; ++c) row[c] /= nrm;
            ++nb;
        }
    }
    // Residual of the coordinate axis least explained by the edge span.
    double best = -1.0;
    work_.assign(d_, 0.0);
    std::array<double, kMaxDim> cand{};
    for (int k = 0; k < d_; ++k) {
        std::array<double, kMaxDim> r{};
        r[k] = 1.0;
        for (int j = 0; j < nb; ++j) {
            const double* bj = basis_.data() + std::size_t(j) * d_;
            double proj = r[k] * bj[k];
            for (int c = 0; c < k; ++c) proj += r[c] * bj[c];
            for (int c = k + 1; c < d_; ++c) proj += r[c] * bj[c];
            for (int c = 0; c < d_; ++c) r[c] -= proj * bj[c];
        }
        double nrm2 = 0.0;
        for (int c = 0; c < d_; ++c) nrm2 += sq(r[c]);
        if (nrm2 > best) {
            best = nrm2;
            cand = r;
        }
    }
    // One re-orthogonalization pass on the winner.
    for (int j = 0; j < nb; ++j) {
        const double* bj = basis_.data() + std::size_t(j) * d_;
        double proj = 0.0;
        for (int c = 0; c < d_; ++c) proj += cand[c] * bj[c];
        for (int c = 0; c < d_; ++c) cand[c] -= proj * bj[c];
    }
    double nrm = std::sqrt(dot(cand.data(), cand.data(), d_));
    double* n = normal(f);
    if (nrm <= 0.0) {
        // Sliver facet; pick any axis so downstream stays finite.
        std::fill(n, n + d_, 0.0);
        n[0] = 1.0;
    } else {
        for (int c = 0; c < d_; ++c) n[c] = cand[c] / nrm;
    }
    double off = dot(n, origin, d_);
    double side = dot(n, interior_.data(), d_) - off;
    if (side > 0.0) {
        for (int c = 0; c < d_; ++c) n[c] = -n[c];
        off = -off;
    }
    foff_[f] = off;
}

void HullBuilder::compute_bbox() {
    std::vector<double> lo(d_, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d_, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < m_; ++i) {
        const double* x = p(static_cast<int>(i));
        for (int c = 0; c < d_; ++c) {
            lo[c] = std::min(lo[c], x[c]);
            hi[c] = std::max(hi[c], x[c]);
        }
    }
    double diag2 = 0.0;
    for (int c = 0; c < d_; ++c) diag2 += sq(hi[c] - lo[c]);
    scale_ = std::sqrt(diag2);
    eps_ = tol_ * scale_;
}

void HullBuilder::initial_simplex() {
    if (scale_ <= 0.0)
        throw DegenerateInput("all points coincide", 0);

    // Axis-extreme candidates, then the farthest pair among them.
    std::vector<int> extremes;
    for (int c = 0; c < d_; ++c) {
        int imin = 0, imax = 0;
        for (std::size_t i = 1; i < m_; ++i) {
            if (p(static_cast<int>(i))[c] < p(imin)[c]) imin = static_cast<int>(i);
            if (p(static_cast<int>(i))[c] > p(imax)[c]) imax = static_cast<int>(i);
        }
        extremes.push_back(imin);
        extremes.push_back(imax);
    }
    std::sort(extremes.begin(), extremes.end());
    extremes.erase(std::unique(extremes.begin(), extremes.end()), extremes.end());
    int a = extremes[0], b = extremes[0];
    double best = -1.0;
    for (std::size_t i = 0; i < extremes.size(); ++i)
        for (std::size_t j = i + 1; j < extremes.size(); ++j) {
            double dd = dist2(p(extremes[i]), p(extremes[j]), d_);
            if (dd > best) {
                best = dd;
                a = extremes[i];
                b = extremes[j];
            }
        }
    if (best <= sq(eps_)) throw DegenerateInput("no spanning pair of points", 0);

    simplex_ = {a, b};
    basis_.assign(std::size_t(d_) * d_, 0.0);
    {
        double* row = basis_.data();
        double nrm = std::sqrt(best);
        for (int c = 0; c < d_; ++c) row[c] = (p(b)[c] - p(a)[c]) / nrm;
    }
    int nb = 1;
    work_.assign(d_, 0.0);
    while (nb < d_) {
        // Greedily take the point farthest from the current affine span.
        int pick = -1;
        double pick_r2 = sq(eps_);
        for (std::size_t i = 0; i < m_; ++i) {
            const double* x = p(static_cast<int>(i));
            for (int c = 0; c < d_; ++c) work_[c] = x[c] - p(a)[c];
            for (int j = 0; j < nb; ++j) {
                const double* bj = basis_.data() + std::size_t(j) * d_;
                double proj = dot(work_.data(), bj, d_);
                for (int c = 0; c < d_; ++c) work_[c] -= proj * bj[c];
            }
            double r2 = dot(work_.data(), work_.data(), d_);
            if (r2 > pick_r2) {
                pick_r2 = r2;
                pick = static_cast<int>(i);
            }
        }
        if (pick < 0)
            throw DegenerateInput("points are affinely dependent at tolerance", nb);
        simplex_.push_back(pick);
        double* row = basis_.data() + std::size_t(nb) * d_;
        for (int c = 0; c < d_; ++c) row[c] = p(pick)[c] - p(a)[c];
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < nb; ++j) {
                const double* bj = basis_.data() + std::size_t(j) * d_;
                double proj = dot(row, bj, d_);
                for (int c = 0; c < d_; ++c) row[c] -= proj * bj[c];
            }
        }
        double nrm = std::sqrt(dot(row, row, d_));
        for (int c = 0; c < d_; ++c) row[c] /= nrm;
        ++nb;
    }

    interior_.assign(d_, 0.0);
    for (int id : simplex_)
        for (int c = 0; c < d_; ++c) interior_[c] += p(id)[c] / (d_ + 1);
}

void HullBuilder::seed_facets() {
    // Facet i omits simplex_[i]; two seed facets neighbor across the ridge
    // that omits both their missing vertices.
    for (int i = 0; i <= d_; ++i) {
        int f = alloc_facet();
        int* v = verts(f);
        int* nb = neigh(f);
        int slot = 0;
        for (int j = 0; j <= d_; ++j) {
            if (j == i) continue;
            v[slot] = simplex_[j];
            nb[slot] = j;  // facet omitting simplex_[j]
            ++slot;
        }
        alive_[f] = 1;
        compute_plane(f);
    }
    std::vector<char> in_simplex(m_, 0);
    for (int id : simplex_) in_simplex[id] = 1;
    std::vector<int> seed(d_ + 1);
    for (int f = 0; f <= d_; ++f) seed[f] = f;
    for (std::size_t i = 0; i < m_; ++i)
        if (!in_simplex[i]) assign_point(static_cast<int>(i), seed);
    for (int f = 0; f <= d_; ++f)
        if (!outside_[f].empty()) pending_.push_back(f);
}

void HullBuilder::assign_point(int id, const std::vector<int>& facets) {
    const double* x = p(id);
    for (int f : facets) {
        double dd = signed_dist(f, x);
        if (dd > eps_) {
            outside_[f].push_back(id);
            if (dd > furthest_d_[f]) {
                furthest_d_[f] = dd;
                furthest_[f] = id;
            }
            return;
        }
    }
}

void HullBuilder::insert_apex(int apex, int seed_facet) {
    const double* ax = p(apex);
    ++epoch_;
    visible_.clear();
    stack_.clear();
    stack_.push_back(seed_facet);
    mark_[seed_facet] = epoch_;
    while (!stack_.empty()) {
        int f = stack_.back();
        stack_.pop_back();
        visible_.push_back(f);
        for (int s = 0; s < d_; ++s) {
            int g = neigh(f)[s];
            if (mark_[g] == epoch_) continue;
            if (signed_dist(g, ax) > eps_) {
                mark_[g] = epoch_;
                stack_.push_back(g);
            }
        }
    }

    horizon_.clear();
    orphans_.clear();
    for (int f : visible_) {
        for (int s = 0; s < d_; ++s) {
            int g = neigh(f)[s];
            if (mark_[g] != epoch_) horizon_.push_back({f, s, g});
        }
        for (int id : outside_[f])
            if (id != apex) orphans_.push_back(id);
    }
    if (horizon_.empty()) {
        // Numerically ambiguous apex; leave the hull as is.
        outside_[visible_.front()].clear();
        furthest_[visible_.front()] = -1;
        furthest_d_[visible_.front()] = 0.0;
        return;
    }

    // Dead facets stay allocated until the new cone is fully wired; their
    // vertex lists and ids are still read below.
    for (int f : visible_) {
        alive_[f] = 0;
        outside_[f].clear();
    }

    created_.clear();
    ridges_.clear();
    for (const auto& h : horizon_) {
        int nf = alloc_facet();
        int* v = verts(nf);
        int* nb = neigh(nf);
        int slot = 0;
        for (int s = 0; s < d_; ++s) {
            if (s == h.slot) continue;
            v[slot] = fverts_[std::size_t(h.facet) * d_ + s];
            nb[slot] = -1;
            ++slot;
        }
        v[d_ - 1] = apex;
        nb[d_ - 1] = h.outer;
        // Patch the surviving outer facet to point back at the new one;
        // two simplicial facets share at most one ridge, so the slot is unique.
        int* onb = neigh(h.outer);
        for (int s = 0; s < d_; ++s)
            if (onb[s] == h.facet) {
                onb[s] = nf;
                break;
            }
        alive_[nf] = 1;
        compute_plane(nf);
        created_.push_back(nf);

        // Ridges containing the apex, to be paired between new facets.
        for (int drop = 0; drop < d_ - 1; ++drop) {
            RidgeEntry entry;
            entry.facet = nf;
            entry.slot = drop;
            int kslot = 0;
            for (int c = 0; c < d_ - 1; ++c) {
                if (c == drop) continue;
                entry.key[kslot++] = v[c];
            }
            std::sort(entry.key.begin(), entry.key.begin() + (d_ - 2));
            ridges_.push_back(entry);
        }
    }

    // Each apex ridge is shared by exactly two new facets; sort and pair.
    const int klen = d_ - 2;
    std::sort(ridges_.begin(), ridges_.end(),
              [klen](const RidgeEntry& a, const RidgeEntry& b) {
                  for (int i = 0; i < klen; ++i)
                      if (a.key[i] != b.key[i]) return a.key[i] < b.key[i];
                  return false;
              });
    for (std::size_t i = 0; i + 1 < ridges_.size(); i += 2) {
        const RidgeEntry& a = ridges_[i];
        const RidgeEntry& b = ridges_[i + 1];
        neigh(a.facet)[a.slot] = b.facet;
        neigh(b.facet)[b.slot] = a.facet;
    }

    for (int f : visible_) free_slots_.push_back(f);
    for (int id : orphans_) assign_point(id, created_);
    for (int nf : created_)
        if (!outside_[nf].empty()) pending_.push_back(nf);
}

ConvexHull HullBuilder::build() {
    if (d_ < 1 || d_ > kMaxDim - 1)
        throw std::invalid_argument("hull dimension out of supported range");
    if (m_ < std::size_t(d_) + 1)
        throw DegenerateInput("need at least d+1 points",
                              m_ == 0 ? 0 : static_cast<int>(m_) - 1);
    compute_bbox();
    initial_simplex();
    seed_facets();
    while (!pending_.empty()) {
        int f = pending_.back();
        pending_.pop_back();
        if (!alive_[f] || outside_[f].empty()) continue;
        insert_apex(furthest_[f], f);
    }

    ConvexHull hull;
    hull.dim = d_;
    std::vector<int> ids;
    for (std::size_t f = 0; f < alive_.size(); ++f)
        if (alive_[f])
            for (int s = 0; s < d_; ++s) ids.push_back(fverts_[f * d_ + s]);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<int> remap(m_, -1);
    hull.vertices.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        remap[ids[i]] = static_cast<int>(i);
        hull.vertices.emplace_back(p(ids[i]), p(ids[i]) + d_);
    }
    for (std::size_t f = 0; f < alive_.size(); ++f) {
        if (!alive_[f]) continue;
        Facet facet;
        facet.vertex_ids.resize(d_);
        for (int s = 0; s < d_; ++s) facet.vertex_ids[s] = remap[fverts_[f * d_ + s]];
        facet.normal.assign(normal(static_cast<int>(f)),
                            normal(static_cast<int>(f)) + d_);
        facet.offset = foff_[f];
        hull.facets.push_back(std::move(facet));
    }
    hull.interior_point.assign(d_, 0.0);
    for (const auto& v : hull.vertices)
        for (int c = 0; c < d_; ++c)
            hull.interior_point[c] += v[c] / static_cast<double>(hull.vertices.size());
    return hull;
}

ConvexHull build_hull_1d(const double* pts, std::size_t m, double tol) {
    if (m < 2) throw DegenerateInput("need at least 2 points", 0);
    std::size_t imin = 0, imax = 0;
    for (std::size_t i = 1; i < m; ++i) {
        if (pts[i] < pts[imin]) imin = i;
        if (pts[i] > pts[imax]) imax = i;
    }
    double range = pts[imax] - pts[imin];
    if (range <= tol * std::max(1.0, std::abs(pts[imax]) + std::abs(pts[imin])))
        throw DegenerateInput("all points coincide", 0);
    ConvexHull hull;
    hull.dim = 1;
    hull.vertices = {{pts[imin]}, {pts[imax]}};
    hull.facets.push_back({{0}, {-1.0}, -pts[imin]});
    hull.facets.push_back({{1}, {1.0}, pts[imax]});
    hull.interior_point = {0.5 * (pts[imin] + pts[imax])};
    return hull;
}

double facet_measure(const ConvexHull& hull, const Facet& f) {
    const int d = hull.dim;
    if (d == 1) return 1.0;
    const Vec& v0 = hull.vertices[f.vertex_ids[0]];
    const int k = d - 1;
    std::array<double, kMaxDim * kMaxDim> edges{};
    for (int i = 0; i < k; ++i) {
        const Vec& vi = hull.vertices[f.vertex_ids[i + 1]];
        for (int c = 0; c < d; ++c) edges[std::size_t(i) * d + c] = vi[c] - v0[c];
    }
    std::array<double, kMaxDim * kMaxDim> gram{};
    for (int i = 0; i < k; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = dot(&edges[std::size_t(i) * d], &edges[std::size_t(j) * d], d);
            gram[std::size_t(i) * k + j] = s;
            gram[std::size_t(j) * k + i] = s;
        }
    if (!cholesky(gram.data(), k)) return 0.0;
    double root = 1.0;
    for (int i = 0; i < k; ++i) root *= gram[std::size_t(i) * k + i];
    return root / factorial(k);
}

}  // namespace

ConvexHull build_hull(const double* points, std::size_t count, int dim, double tol) {
    if (dim == 1) return build_hull_1d(points, count, tol);
    return HullBuilder(points, count, dim, tol).build();
}

ConvexHull build_hull(const std::vector<Vec>& points, double tol) {
    if (points.empty()) throw DegenerateInput("empty point set", 0);
    const int d = static_cast<int>(points.front().size());
    std::vector<double> flat;
    flat.reserve(points.size() * d);
    for (const auto& pt : points) {
        if (static_cast<int>(pt.size()) != d)
            throw std::invalid_argument("points of mixed dimension");
        flat.insert(flat.end(), pt.begin(), pt.end());
    }
    return build_hull(flat.data(), points.size(), d, tol);
}

double hull_volume(const ConvexHull& hull) {
    double vol = 0.0;
    for (const Facet& f : hull.facets) {
        double height = f.offset - dot(f.normal.data(), hull.interior_point.data(), hull.dim);
        vol += facet_measure(hull, f) * height / hull.dim;
    }
    return std::max(vol, 0.0);
}

double hull_surface_area(const ConvexHull& hull) {
    double area = 0.0;
    for (const Facet& f : hull.facets) area += facet_measure(hull, f);
    return area;
}

double diameter(const double* points, std::size_t count, int dim) {
    if (count == 0) throw std::invalid_argument("diameter of empty point set");
    double best = 0.0;
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i + 1; j < count; ++j)
            best = std::max(best, dist2(points + i * dim, points + j * dim, dim));
    return std::sqrt(best);
}

double diameter(const std::vector<Vec>& points) {
    if (points.empty()) throw std::invalid_argument("diameter of empty point set");
    const int d = static_cast<int>(points.front().size());
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            best = std::max(best, dist2(points[i].data(), points[j].data(), d));
    return std::sqrt(best);
}

namespace {

// ---------------------------------------------------------------------------
// Minimum enclosing ball (Welzl, move-to-front variant; recursion depth is
// bounded by the support size, not the point count)
// ---------------------------------------------------------------------------

class WelzlSolver {
  public:
    WelzlSolver(const double* pts, std::size_t m, int d, double tol)
        : pts_(pts), m_(m), d_(d), tol_(tol) {
        order_.resize(m);
        for (std::size_t i = 0; i < m; ++i) order_[i] = static_cast<int>(i);
        SplitMix64 rng{0x6A09E667F3BCC909ull};
        for (std::size_t i = m; i > 1; --i)
            std::swap(order_[i - 1], order_[rng.next() % i]);
        double s2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) s2 = std::max(s2, dist2(p(0), p(static_cast<int>(i)), d_));
        scale2_ = std::max(s2, 1e-300);
    }

    Ball solve() { return recurse(m_); }

  private:
    const double* p(int id) const { return pts_ + std::size_t(id) * d_; }

    bool inside(int id, const Ball& b) const {
        if (b.radius < 0.0) return false;
        double dd = dist2(p(id), b.center.data(), d_);
        double rr = sq(b.radius);
        return dd <= rr + tol_ * (rr + scale2_ * 1e-6);
    }

    Ball circumsphere() const;
    Ball recurse(std::size_t count);

    const double* pts_;
    std::size_t m_;
    int d_;
    double tol_;
    double scale2_;
    std::vector<int> order_;
    std::vector<int> support_;
};

// Sphere through all support points: with q_j = p_j - p_0 the center is
// p_0 + Q lambda where (Q^T Q) lambda = |q_j|^2 / 2.
Ball WelzlSolver::circumsphere() const {
    Ball b;
    b.center.assign(d_, 0.0);
    if (support_.empty()) {
        b.radius = -1.0;
        return b;
    }
    const double* p0 = p(support_[0]);
    const int k = static_cast<int>(support_.size()) - 1;
    if (k == 0) {
        b.center.assign(p0, p0 + d_);
        b.radius = 0.0;
        return b;
    }
    std::array<double, kMaxDim * kMaxDim> q{};
    std::array<double, kMaxDim> rhs{};
    for (int j = 0; j < k; ++j) {
        const double* pj = p(support_[j + 1]);
        for (int c = 0; c < d_; ++c) q[std::size_t(j) * d_ + c] = pj[c] - p0[c];
        rhs[j] = 0.5 * dot(&q[std::size_t(j) * d_], &q[std::size_t(j) * d_], d_);
    }
    std::array<double, kMaxDim * kMaxDim> gram{};
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            gram[std::size_t(i) * k + j] =
                dot(&q[std::size_t(i) * d_], &q[std::size_t(j) * d_], d_);

    // Gaussian elimination with partial pivoting; near-zero pivots mark a
    // nearly dependent support, where the dependent direction is dropped and
    // one round of iterative refinement recovers the rest.
    std::array<double, kMaxDim * kMaxDim> a = gram;
    std::array<double, kMaxDim> x = rhs;
    std::array<int, kMaxDim> perm{};
    for (int i = 0; i < k; ++i) perm[i] = i;
    double maxdiag = 0.0;
    for (int i = 0; i < k; ++i) maxdiag = std::max(maxdiag, std::abs(a[std::size_t(i) * k + i]));
    auto eliminate = [&](std::array<double, kMaxDim * kMaxDim>& mat,
                         std::array<double, kMaxDim>& vec) {
        for (int col = 0; col < k; ++col) {
            int piv = col;
            for (int r = col + 1; r < k; ++r)
                if (std::abs(mat[std::size_t(r) * k + col]) >
                    std::abs(mat[std::size_t(piv) * k + col]))
                    piv = r;
            if (piv != col) {
                for (int c = 0; c < k; ++c)
                    std::swap(mat[std::size_t(piv) * k + c], mat[std::size_t(col) * k + c]);
                std::swap(vec[piv], vec[col]);
            }
            double pv = mat[std::size_t(col) * k + col];
            if (std::abs(pv) <= 1e-13 * std::max(maxdiag, 1e-300)) {
                mat[std::size_t(col) * k + col] = 1.0;
                for (int c = col + 1; c < k; ++c) mat[std::size_t(col) * k + c] = 0.0;
                vec[col] = 0.0;
                continue;
            }
            for (int r = col + 1; r < k; ++r) {
                double factor = mat[std::size_t(r) * k + col] / pv;
                mat[std::size_t(r) * k + col] = 0.0;
                for (int c = col + 1; c < k; ++c)
                    mat[std::size_t(r) * k + c] -= factor * mat[std::size_t(col) * k + c];
                vec[r] -= factor * vec[col];
            }
        }
        for (int r = k - 1; r >= 0; --r) {
            double s = vec[r];
            for (int c = r + 1; c < k; ++c) s -= mat[std::size_t(r) * k + c] * vec[c];
            vec[r] = s / mat[std::size_t(r) * k + r];
        }
    };
    eliminate(a, x);
    // Iterative refinement against the untouched Gram matrix.
    std::array<double, kMaxDim> resid{};
    for (int i = 0; i < k; ++i) {
        double s = rhs[i];
        for (int j = 0; j < k; ++j) s -= gram[std::size_t(i) * k + j] * x[j];
        resid[i] = s;
    }
    std::array<double, kMaxDim * kMaxDim> a2 = gram;
    eliminate(a2, resid);
    for (int i = 0; i < k; ++i) x[i] += resid[i];

    b.center.assign(p0, p0 + d_);
    for (int j = 0; j < k; ++j)
        for (int c = 0; c < d_; ++c) b.center[c] += x[j] * q[std::size_t(j) * d_ + c];
    double rr = 0.0;
    for (int id : support_) rr = std::max(rr, dist2(b.center.data(), p(id), d_));
    b.radius = std::sqrt(rr);
    return b;
}

Ball WelzlSolver::recurse(std::size_t count) {
    Ball b = circumsphere();
    if (static_cast<int>(support_.size()) == d_ + 1) return b;
    for (std::size_t i = 0; i < count; ++i) {
        int id = order_[i];
        if (!inside(id, b)) {
            support_.push_back(id);
            b = recurse(i);
            support_.pop_back();
            std::rotate(order_.begin(), order_.begin() + i, order_.begin() + i + 1);
        }
    }
    return b;
}

}  // namespace

Ball min_enclosing_ball(const double* points, std::size_t count, int dim, double tol) {
    if (count == 0) throw std::invalid_argument("min_enclosing_ball of empty set");
    return WelzlSolver(points, count, dim, tol).solve();
}

Ball min_enclosing_ball(const std::vector<Vec>& points, double tol) {
    if (points.empty()) throw std::invalid_argument("min_enclosing_ball of empty set");
    const int d = static_cast<int>(points.front().size());
    std::vector<double> flat;
    flat.reserve(points.size() * d);
    for (const auto& pt : points) flat.insert(flat.end(), pt.begin(), pt.end());
    return min_enclosing_ball(flat.data(), points.size(), d, tol);
}

std::vector<Vec> hyperrectangle_corners(const Vec& halfwidths) {
    const int d = static_cast<int>(halfwidths.size());
    if (d < 1 || d > 24) throw std::invalid_argument("hyperrectangle dimension out of range");
    for (double w : halfwidths)
        if (w < 0.0) throw std::invalid_argument("negative halfwidth");
    std::vector<Vec> corners;
    corners.reserve(std::size_t(1) << d);
    for (std::size_t mask = 0; mask < (std::size_t(1) << d); ++mask) {
        Vec pt(d);
        for (int c = 0; c < d; ++c)
            pt[c] = (mask >> c) & 1 ? halfwidths[c] : -halfwidths[c];
        corners.push_back(std::move(pt));
    }
    return corners;
}

BoxEnvelope circumscribed_box(const std::vector<Vec>& points) {
    if (points.empty()) throw std::invalid_argument("circumscribed_box of empty set");
    const int d = static_cast<int>(points.front().size());
    Vec lo(points.front()), hi(points.front());
    for (const auto& pt : points)
        for (int c = 0; c < d; ++c) {
            lo[c] = std::min(lo[c], pt[c]);
            hi[c] = std::max(hi[c], pt[c]);
        }
    BoxEnvelope box;
    box.center.resize(d);
    box.halfwidths.resize(d);
    for (int c = 0; c < d; ++c) {
        box.center[c] = 0.5 * (lo[c] + hi[c]);
        box.halfwidths[c] = 0.5 * (hi[c] - lo[c]);
    }
    return box;
}

std::string dump_hull(const ConvexHull& hull) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& v : hull.vertices) {
        for (int c = 0; c < hull.dim; ++c) out << (c ? " " : "") << v[c];
        out << "\n";
    }
    for (const auto& f : hull.facets) {
        for (int c = 0; c < hull.dim; ++c) out << (c ? " " : "") << f.vertex_ids[c];
        out << "\n";
    }
    return out.str();
}

}  // namespace bmhull
