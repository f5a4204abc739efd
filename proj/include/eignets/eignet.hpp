#ifndef EIGNETS_EIGNET_HPP
#define EIGNETS_EIGNET_HPP

#include "eignets/geometry.hpp"
#include "eignets/manifold.hpp"
#include "eignets/quadrature.hpp"
#include "eignets/spectral.hpp"

#include <Eigen/Dense>

#include <array>
#include <memory>
#include <span>

namespace eignets {

// Truncated series kernel G(x,y) = sum_{l_j <= trunc} b(l_j) phi_j(x) phi_j(y)
// for a mask b of type beta. The declared tail bound dominates the dropped
// part of the series pointwise: sum_{levels l > trunc} b(l) * dim(l).
class kernel_g {
public:
    kernel_g(std::shared_ptr<const manifold> m, mask b, int trunc_level);

    const manifold& mfd() const { return *m_; }
    const std::shared_ptr<const manifold>& mfd_ptr() const { return m_; }
    const mask& b() const { return b_; }
    int trunc_level() const { return trunc_; }
    double tail_bound() const { return tail_; }

    // G(x,y), summed level-collapsed (circle: cosine sum; sphere: addition
    // theorem), identical to the index-wise series
    double operator()(const point& x, const point& y) const;

    // closed-form tail bound at a hypothetical truncation level
    static double tail_bound_at(const manifold& m, const mask& b, int trunc_level);
    // smallest truncation level with tail bound <= tol
    static int level_for_tail(const manifold& m, const mask& b, double tol);

private:
    std::shared_ptr<const manifold> m_;
    mask b_;
    int trunc_ = 0;
    double tail_ = 0.0;
};

// Kernel network sum_y a_y G(., y). synth_level <= kernel.trunc_level caps
// the levels actually synthesized (the builder lowers it to the range where
// its quadrature rule integrates the products (D_G P) phi_k exactly).
class eignet {
public:
    eignet(point_set centers, Eigen::VectorXd coeffs, kernel_g kernel, int synth_level = -1);

    const point_set& centers() const { return centers_; }
    const Eigen::VectorXd& coeffs() const { return coeffs_; }
    const kernel_g& kernel() const { return kernel_; }
    int synth_level() const { return synth_level_; }

    double eval(const point& x) const;
    spectral_vector to_spectral() const; // <Psi, phi_j> = b(l_j) sum_y a_y phi_j(y)

private:
    point_set centers_;
    Eigen::VectorXd coeffs_;
    kernel_g kernel_;
    int synth_level_;
};

// G(nu; P): coefficients a_y = w_y (D_G P)(y). When the rule is certified
// beyond 2 deg(P) the synthesis level defaults to
// min(trunc, certified_order - deg(P)) so every synthesized product
// (D_G P) phi_k is integrated exactly; otherwise the full kernel is used.
// Pass synth_level >= 0 to override.
eignet build_eignet(const spectral_vector& p, const quadrature_rule& rule, const kernel_g& k,
                    int synth_level = -1);

// G_L(f) = G(rule*; sigma_L(f)); the universal linear operator
eignet g_operator(const spectral_vector& f, double L, const quadrature_rule& rule_star,
                  const kernel_g& k, const cutoff_function& cf,
                  bool allow_undercertified = false);

// discrete data route: G(rule*; sigma_L(rule; samples))
eignet g_operator_discrete(std::span<const double> samples, double L, const quadrature_rule& rule,
                           const quadrature_rule& rule_star, const kernel_g& k,
                           const cutoff_function& cf, bool allow_undercertified = false);

struct dominance_certificate {
    double gamma = 0.0;
    double lambda = 0.0;       // min |A_ii|
    double bound_factor = 0.0; // ((1-gamma) lambda)^{-1}
    std::array<double, 3> solution_norm{};  // p = 1, 2, inf
    std::array<double, 3> rhs_norm{};
    bool verified = false;
};

// Solve A a = y for a matrix with verified row and column dominance
//   sum_{i != j} |A_{j,i}| <= gamma |A_{j,j}|,
//   sum_{i != j} |A_{i,j}| <= gamma |A_{j,j}|,
// and certify ||a||_p <= ((1-gamma) lambda)^{-1} ||y||_p for p in {1,2,inf}.
// Dominance violations are refused with the offending row/column index.
Eigen::VectorXd diag_dominant_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                                    double gamma, dominance_certificate* cert = nullptr);

// ||a||_{l^p} / ||Psi||_p; the denominator through the spectral form
double coeff_norm_ratio(const eignet& net, double p);

} // namespace eignets

#endif
