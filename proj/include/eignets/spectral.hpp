#ifndef EIGNETS_SPECTRAL_HPP
#define EIGNETS_SPECTRAL_HPP

#include "eignets/geometry.hpp"
#include "eignets/manifold.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace eignets {

class quadrature_rule; // quadrature.hpp

// Smooth cutoff family. h is C-infinity, even, nonincreasing on [0,inf),
// h = 1 on [0,1/2] and h = 0 on [1,inf):
//   h(t) = chi(2(1-|t|)) on (1/2,1),  chi(u) = s(u)/(s(u)+s(1-u)),
//   s(u) = exp(-1/u) for u > 0 else 0.
// g(t) = h(t) - h(2t) is supported in (1/4,1) and telescopes:
//   h(t/2^n) = h(t) + sum_{k=1..n} g(t/2^k).
// gtilde(t) = h(t) - h(2^{k*+1} t) equals 1 on [2^{-k*-1}, 1/2].
class cutoff_function {
public:
    explicit cutoff_function(int smoothness = 4, int kstar = 2);

    double h(double t) const;
    double g(double t) const { return h(t) - h(2.0 * t); }
    double gtilde(double t) const { return h(t) - h(kstar_scale_ * t); }

    int smoothness() const { return smoothness_; }
    int kstar() const { return kstar_; }

private:
    int smoothness_;
    int kstar_;
    double kstar_scale_;
};

// Mask of type beta: b(t) = (1+|t|)^{-beta} F_b(log|t|) with F_b bounded,
// bounded away from zero; the default has F_b == 1.
class mask {
public:
    explicit mask(double beta);
    mask(double beta, std::function<double(double)> fb, double fb_sup = 1.0);

    double beta() const { return beta_; }
    double fb_sup() const { return fb_sup_; }
    double operator()(double t) const;

    // b_r(t) = (1+|t|)^r b(t), a mask of type beta - r
    mask shifted(double r) const;

private:
    double beta_;
    std::function<double(double)> fb_; // of log|t|; empty means F_b == 1
    double fb_sup_;
};

// Finite coefficient sequence <f, phi_j> over the eigen index, dense storage.
class spectral_vector {
public:
    spectral_vector() = default;
    spectral_vector(std::shared_ptr<const manifold> m, std::size_t n);
    spectral_vector(std::shared_ptr<const manifold> m, std::vector<double> coeffs);

    const manifold& mfd() const { return *m_; }
    const std::shared_ptr<const manifold>& mfd_ptr() const { return m_; }
    std::size_t size() const { return c_.size(); }
    double operator[](std::size_t j) const { return j < c_.size() ? c_[j] : 0.0; }
    double& at(std::size_t j);
    const std::vector<double>& coeffs() const { return c_; }

    double degree() const; // max l_j with a nonzero coefficient

    spectral_vector& operator+=(const spectral_vector& o);
    spectral_vector& operator*=(double s);
    friend spectral_vector operator+(spectral_vector a, const spectral_vector& b) { return a += b; }
    friend spectral_vector operator*(double s, spectral_vector a) { return a *= s; }

private:
    std::shared_ptr<const manifold> m_;
    std::vector<double> c_;
};

// Phi_L(H; x, y) = sum_j H(l_j / L) phi_j(x) phi_j(y); H supported in
// [-support_radius, support_radius] makes the sum finite.
double phi_kernel_eval(const manifold& m, const std::function<double(double)>& H,
                       double support_radius, double L, const point& x, const point& y);

// sigma_L(f): coefficient-wise multiplication by H(l_k / L); default H = h
spectral_vector sigma_continuous(const spectral_vector& f, double L, const cutoff_function& cf);

// discrete sigma: c_k = h(l_k/L) sum_y w_y f(y) phi_k(y). samples align with
// rule centers. The theorem regime needs the rule certified to order >= 2AL;
// pass allow_undercertified to override.
spectral_vector sigma_discrete(std::span<const double> samples, const quadrature_rule& rule,
                               double L, const cutoff_function& cf,
                               bool allow_undercertified = false);

// (Delta*)^r: coefficient-wise scaling by (1+l_k)^r
spectral_vector delta_star(const spectral_vector& f, double r);

// D_G: coefficient-wise division by b(l_k)
spectral_vector dg_apply(const spectral_vector& f, const mask& b);

double synth_eval(const spectral_vector& f, const point& x);
void synth_eval_many(const spectral_vector& f, std::span<const point> xs, std::span<double> out);

// L^p(mu) norms, p in {1, 2, inf}: grid quadrature for p in {1,2}; for
// p = inf a grid max over ~16x the Nyquist density (a lower bound).
double lp_norm(const spectral_vector& f, double p);
double lp_norm_samples(std::span<const double> values, const grid_rule& grid, double p);

// grid analysis: coefficients <f, phi_j> by quadrature against the grid
spectral_vector analyze(const std::shared_ptr<const manifold>& m, const grid_rule& grid,
                        std::span<const double> values, double max_level);

// evaluation grid for sup norms at the stated density factor
std::vector<point> sup_norm_grid(const manifold& m, double degree, int density_factor = 16);

// Cached basis matrix over a fixed node set; the bulk path for repeated
// synthesis, analysis moments, and norms in sweeps.
class synthesis_table {
public:
    synthesis_table(std::shared_ptr<const manifold> m, std::vector<point> nodes,
                    std::size_t n_basis);
    synthesis_table(std::shared_ptr<const manifold> m, const grid_rule& grid,
                    std::size_t n_basis);

    const std::vector<point>& nodes() const { return nodes_; }
    std::size_t n_basis() const { return static_cast<std::size_t>(basis_.cols()); }

    Eigen::VectorXd eval(const spectral_vector& f) const;
    Eigen::VectorXd moments(std::span<const double> node_values) const; // B^T v
    double norm(const spectral_vector& f, double p) const; // needs weights for p in {1,2}

private:
    std::shared_ptr<const manifold> m_;
    std::vector<point> nodes_;
    Eigen::VectorXd weights_; // empty when the node set carries no quadrature
    Eigen::MatrixXd basis_;   // nodes x basis
};

} // namespace eignets

#endif
