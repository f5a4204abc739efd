#ifndef EIGNETS_GEOMETRY_HPP
#define EIGNETS_GEOMETRY_HPP

#include "eignets/manifold.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace eignets {

// Finite point set on a manifold. Construction canonicalizes coordinates and
// rejects duplicate canonical points.
class point_set {
public:
    point_set() = default;
    point_set(std::shared_ptr<const manifold> m, std::vector<point> pts);

    const manifold& mfd() const { return *m_; }
    const std::shared_ptr<const manifold>& mfd_ptr() const { return m_; }
    const std::vector<point>& points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }
    const point& operator[](std::size_t i) const { return pts_[i]; }
    bool contains(const point& p, double tol = 0.0) const;

private:
    std::shared_ptr<const manifold> m_;
    std::vector<point> pts_;
};

point_set equispaced_circle(std::shared_ptr<const manifold> circle, std::size_t n);

// probe grid with geodesic spacing ~ `spacing`, used for whole-manifold sups
point_set probe_grid(const std::shared_ptr<const manifold>& m, double spacing);

// q(C): exact pairwise minimum; requires |C| >= 2
double min_separation(const point_set& c);

// delta(C,K) = sup_{x in K} rho(x, C)
double mesh_norm(const point_set& c, const point_set& k);

struct mesh_norm_estimate {
    double value = 0.0;         // lower bound for the true sup
    double probe_spacing = 0.0; // resolution of the probe grid
};

// whole-manifold mesh norm on a probe grid 8x denser than the set's nominal
// spacing; a lower-bound estimator, reported with its resolution
mesh_norm_estimate mesh_norm(const point_set& c);

struct thinning_certificate {
    double eps = 0.0;
    double separation = 0.0; // q(C~), certified >= eps
    double covering = 0.0;   // delta(C~, C), certified <= eps
    bool ok = false;
};

// Greedy subset C~ of C with q(C~) >= eps and rho(x, C~) <= eps for all x in
// C. Points are processed in input order; deterministic.
point_set greedy_separate(const point_set& c, double eps, thinning_certificate* cert = nullptr);

struct nested_level_certificate {
    double q = 0.0;
    double delta = 0.0; // probe-grid estimate
    bool uniform = false; // delta <= 2q
};

// Nested thinning: inputs nested C_m (delta ~ 1/m), outputs nested subsets
// with per-level delta <= 2q certificates attached.
std::vector<point_set> nested_separate(const std::vector<point_set>& chain,
                                       std::vector<nested_level_certificate>* certs = nullptr);

// Signed discrete measure: mass per support point.
class discrete_measure {
public:
    discrete_measure() = default;
    discrete_measure(point_set support, std::vector<double> mass);

    const point_set& support() const { return support_; }
    const std::vector<double>& mass() const { return mass_; }
    double total_variation() const;
    double abs_ball(const point& x, double r) const; // |nu|(B(x,r))

    friend discrete_measure operator+(const discrete_measure& a, const discrete_measure& b);

private:
    point_set support_;
    std::vector<double> mass_;
};

struct regularity_estimate {
    double norm = 0.0; // lower bound for ||nu||_{M_d}
    double d = 0.0;
    std::size_t radii = 0;
    std::size_t centers = 0;
};

// sup over probed centers and dyadic radii r in {d 2^i} of
// |nu|(B(x,r)) / (mu(B(x,r)) + d^alpha)
regularity_estimate regularity_norm(const discrete_measure& nu, double d);

} // namespace eignets

#endif
