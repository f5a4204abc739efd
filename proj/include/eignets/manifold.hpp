#ifndef EIGNETS_MANIFOLD_HPP
#define EIGNETS_MANIFOLD_HPP

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eignets {

inline constexpr double pi = 3.14159265358979323846;

enum class domain_kind { circle, sphere };

// Intrinsic coordinates. circle: a = angle in [0,2pi), b unused (0).
// sphere: a = colatitude in [0,pi], b = longitude in [0,2pi).
struct point {
    domain_kind dom;
    double a = 0.0;
    double b = 0.0;
};

// Quadrature grid exact for all products P1*P2 with P1,P2 in Pi_order
// (equivalently, exact for plain diffusion polynomials of degree <= 2*order).
struct grid_rule {
    std::vector<point> nodes;
    std::vector<double> weights;
    double order = 0.0;
};

// A concrete compact manifold carrying the geodesic distance, the
// probability measure mu through closed-form ball measures, and the
// level-major orthonormal eigenbasis {phi_j} with levels {l_j}.
class manifold {
public:
    virtual ~manifold() = default;

    virtual std::string_view name() const = 0;
    virtual domain_kind kind() const = 0;
    virtual double alpha() const = 0;          // ball-measure exponent
    virtual double product_factor() const = 0; // A of the product assumption
    virtual double diameter() const { return pi; }
    virtual int max_level() const = 0;

    virtual point canonical(point p) const = 0;
    virtual double geodesic(const point& x, const point& y) const = 0;
    virtual double ball_measure(const point& x, double r) const = 0;

    // eigenbasis, enumerated level-major and deterministically
    virtual std::size_t basis_count(double level_bound) const = 0; // #{j : l_j <= L}
    virtual double level(std::size_t j) const = 0;
    virtual double basis_eval(std::size_t j, const point& x) const = 0;
    // bulk row phi_0(x)..phi_{n-1}(x); out.size() determines n
    virtual void basis_row(const point& x, std::span<double> out) const = 0;

    virtual grid_rule reference_grid(double order) const = 0;

    double christoffel_sum(const point& x, double level_bound) const;
    double heat_kernel(const point& x, const point& y, double t) const;

    void require_same_domain(const point& p) const;
};

std::shared_ptr<const manifold> make_manifold(std::string_view name);

point circle_point(double theta);
point sphere_point(double colat, double lon);

} // namespace eignets

#endif
