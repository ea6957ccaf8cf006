#include "bmhull/stage.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace bmhull {

namespace {

double log_factorial(int n) { return std::lgamma(n + 1.0); }

Eigen::MatrixXd columns(const std::vector<Vec>& xs, int dim) {
    Eigen::MatrixXd m(dim, static_cast<int>(xs.size()));
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < dim; ++i) m(i, j) = xs[j][i];
    return m;
}

}  // namespace

StageRadii optimal_radii(int n) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    StageRadii radii;
    radii.r.resize(n);
    const double root_2n = std::exp(log_factorial(n) / (2.0 * n));
    for (int j = 0; j < n; ++j)
        radii.r[j] = std::sqrt(static_cast<double>(n - j)) * root_2n;
    return radii;
}

double expected_total_time(int n, const StageRadii& radii) {
    if (static_cast<int>(radii.r.size()) != n)
        throw std::invalid_argument("radii count must equal the dimension");
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        if (!(radii.r[j] > 0.0)) throw std::invalid_argument("radii must be positive");
        total += radii.r[j] * radii.r[j] / static_cast<double>(n - j);
    }
    return total;
}

double gram_simplex_volume(const std::vector<Vec>& vectors) {
    if (vectors.empty()) throw std::invalid_argument("no vectors");
    const int n = static_cast<int>(vectors.size());
    for (const auto& v : vectors)
        if (static_cast<int>(v.size()) != n)
            throw std::invalid_argument("need n vectors in R^n");
    Eigen::MatrixXd m = columns(vectors, n);
    Eigen::MatrixXd gram = m.transpose() * m;
    double det = gram.determinant();
    if (!(det > 0.0)) return 0.0;
    return std::sqrt(det) * std::exp(-log_factorial(n));
}

std::vector<Vec> complement_basis(const std::vector<Vec>& xs, int dim) {
    const int j = static_cast<int>(xs.size());
    if (j == 0) {
        std::vector<Vec> basis(dim, Vec(dim, 0.0));
        for (int i = 0; i < dim; ++i) basis[i][i] = 1.0;
        return basis;
    }
    Eigen::MatrixXd m = columns(xs, dim);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ();
    std::vector<Vec> basis;
    basis.reserve(dim - j);
    for (int c = j; c < dim; ++c) {
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = q(i, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

StageResult run_construction(int n, const StageRadii& radii, double dt_factor,
                             StreamKey key, std::size_t hull_point_cap) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (static_cast<int>(radii.r.size()) != n)
        throw std::invalid_argument("radii count must equal the dimension");
    if (!(dt_factor > 0.0)) throw std::invalid_argument("dt factor must be > 0");
    if (hull_point_cap < std::size_t(n) + 1)
        throw std::invalid_argument("hull point cap too small");

    GaussianStream stream(key);
    StageResult result;
    result.times.reserve(n);
    result.points.reserve(n);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd xi(n);
    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);

    // Stride-doubling reservoir for the visited grid points.
    std::vector<double> visited(static_cast<std::size_t>(n), 0.0);  // origin
    std::size_t stride = 1, step_index = 0;
    auto record = [&](const Eigen::VectorXd& x) {
        ++step_index;
        if (step_index % stride != 0) return;
        if (visited.size() / n >= hull_point_cap) {
            std::vector<double> halved;
            halved.reserve(visited.size() / 2 + n);
            for (std::size_t i = 0; i < visited.size() / n; i += 2)
                halved.insert(halved.end(), visited.begin() + i * n,
                              visited.begin() + (i + 1) * n);
            visited.swap(halved);
            stride *= 2;
            if (step_index % stride != 0) return;
        }
        for (int c = 0; c < n; ++c) visited.push_back(x[c]);
    };

    const double horizon = 64.0 * expected_total_time(n, radii);
    double t = 0.0;
    for (int j = 0; j < n && !result.censored; ++j) {
        const int sub_dim = n - j;
        const double stage_mean = radii.r[j] * radii.r[j] / sub_dim;
        const double dt = dt_factor * stage_mean;
        const double sdt = std::sqrt(dt);
        const double r2 = radii.r[j] * radii.r[j];
        for (;;) {
            for (int c = 0; c < n; ++c) xi[c] = stream.next();
            w += sdt * xi;
            t += dt;
            record(w);
            double proj2 = (basis.transpose() * w).squaredNorm();
            if (proj2 >= r2) break;
            if (t > horizon) {
                result.censored = true;
                break;
            }
        }
        result.times.push_back(t);
        result.points.emplace_back(w.data(), w.data() + n);
        if (j + 1 < n) {
            Eigen::MatrixXd span(n, j + 1);
            for (int c = 0; c <= j; ++c)
                for (int i = 0; i < n; ++i) span(i, c) = result.points[c][i];
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(span);
            Eigen::MatrixXd q = qr.householderQ();
            basis = q.rightCols(n - j - 1);
        }
    }

    result.total_time = t;
    result.simplex_volume =
        static_cast<int>(result.points.size()) == n && !result.censored
            ? gram_simplex_volume(result.points)
            : 0.0;
    // The stage points and origin always enter the hull input, so the
    // simplex is contained in the reported hull whatever the subsampling.
    for (const auto& x : result.points)
        visited.insert(visited.end(), x.begin(), x.end());
    if (n == 1) {
        double lo = 0.0, hi = 0.0;
        for (std::size_t i = 0; i < visited.size(); ++i) {
            lo = std::min(lo, visited[i]);
            hi = std::max(hi, visited[i]);
        }
        result.hull_volume = hi - lo;
    } else {
        try {
            ConvexHull hull = build_hull(visited.data(), visited.size() / n, n);
            result.hull_volume = hull_volume(hull);
        } catch (const DegenerateInput&) {
            result.hull_volume = 0.0;
        }
    }
    return result;
}

}  // namespace bmhull
