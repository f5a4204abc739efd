#include "eignets/eignet.hpp"

#include <cmath>
#include <stdexcept>

namespace eignets {

kernel_g::kernel_g(std::shared_ptr<const manifold> m, mask b, int trunc_level)
    : m_(std::move(m)), b_(std::move(b)), trunc_(trunc_level) {
    if (trunc_ < 0) throw std::invalid_argument("kernel_g: negative truncation level");
    if (trunc_ > m_->max_level()) throw std::invalid_argument("kernel_g: truncation beyond max level");
    tail_ = tail_bound_at(*m_, b_, trunc_);
}

double kernel_g::tail_bound_at(const manifold& m, const mask& b, int trunc_level) {
    const double n = static_cast<double>(trunc_level);
    const double beta = b.beta();
    const double sup = b.fb_sup();
    if (m.kind() == domain_kind::circle) {
        // sum_{k > N} 2 (1+k)^{-beta} <= 2 (1+N)^{1-beta} / (beta-1)
        if (beta <= 1.0) return std::numeric_limits<double>::infinity();
        return 2.0 * sup * std::pow(1.0 + n, 1.0 - beta) / (beta - 1.0);
    }
    // sphere: sum_{l > N} (2l+1)(1+l)^{-beta} <= 2 (1+N)^{2-beta} / (beta-2)
    if (beta <= 2.0) return std::numeric_limits<double>::infinity();
    return 2.0 * sup * std::pow(1.0 + n, 2.0 - beta) / (beta - 2.0);
}

int kernel_g::level_for_tail(const manifold& m, const mask& b, double tol) {
    for (int n = 1; n <= m.max_level(); n *= 2)
        if (tail_bound_at(m, b, n) <= tol) return n;
    return m.max_level();
}

double kernel_g::operator()(const point& x, const point& y) const {
    const double rho = m_->geodesic(x, y);
    if (m_->kind() == domain_kind::circle) {
        double s = b_(0.0);
        for (int k = 1; k <= trunc_; ++k) s += b_(k) * 2.0 * std::cos(k * rho);
        return s;
    }
    // sum_l b(l) (2l+1) P_l(cos rho)
    const double t = std::cos(rho);
    double p0 = 1.0, p1 = t;
    double s = b_(0.0);
    if (trunc_ >= 1) s += b_(1.0) * 3.0 * p1;
    for (int l = 2; l <= trunc_; ++l) {
        const double p2 = ((2.0 * l - 1.0) * t * p1 - (l - 1.0) * p0) / static_cast<double>(l);
        s += b_(l) * (2.0 * l + 1.0) * p2;
        p0 = p1;
        p1 = p2;
    }
    return s;
}

eignet::eignet(point_set centers, Eigen::VectorXd coeffs, kernel_g kernel, int synth_level)
    : centers_(std::move(centers)), coeffs_(std::move(coeffs)), kernel_(std::move(kernel)),
      synth_level_(synth_level < 0 ? kernel_.trunc_level() : synth_level) {
    if (static_cast<std::size_t>(coeffs_.size()) != centers_.size())
        throw std::invalid_argument("eignet: centers/coefficients size mismatch");
    if (synth_level_ > kernel_.trunc_level())
        throw std::invalid_argument("eignet: synthesis level exceeds kernel truncation");
}

double eignet::eval(const point& x) const {
    const manifold& m = kernel_.mfd();
    if (synth_level_ == kernel_.trunc_level()) {
        double s = 0.0;
        for (std::size_t i = 0; i < centers_.size(); ++i) s += coeffs_[i] * kernel_(x, centers_[i]);
        return s;
    }
    return synth_eval(to_spectral(), m.canonical(x));
}

spectral_vector eignet::to_spectral() const {
    const auto& m = kernel_.mfd_ptr();
    const std::size_t n = m->basis_count(synth_level_);
    std::vector<double> c(n, 0.0), row(n);
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        m->basis_row(centers_[i], row);
        const double a = coeffs_[i];
        for (std::size_t j = 0; j < n; ++j) c[j] += a * row[j];
    }
    const mask& b = kernel_.b();
    for (std::size_t j = 0; j < n; ++j) c[j] *= b(m->level(j));
    return {m, std::move(c)};
}

eignet build_eignet(const spectral_vector& p, const quadrature_rule& rule, const kernel_g& k,
                    int synth_level) {
    const double deg = p.degree();
    if (deg > k.trunc_level())
        throw std::invalid_argument("build_eignet: polynomial degree exceeds kernel truncation");
    if (synth_level < 0) {
        const double cap = rule.certified_order() - deg;
        synth_level = (rule.certified_order() > 2.0 * deg)
                          ? std::min(k.trunc_level(), static_cast<int>(std::floor(cap)))
                          : k.trunc_level();
    }
    const spectral_vector dgp = dg_apply(p, k.b());
    Eigen::VectorXd a(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i)
        a(static_cast<Eigen::Index>(i)) = rule.weights()[i] * synth_eval(dgp, rule.centers()[i]);
    return {rule.centers(), std::move(a), k, synth_level};
}

eignet g_operator(const spectral_vector& f, double L, const quadrature_rule& rule_star,
                  const kernel_g& k, const cutoff_function& cf, bool allow_undercertified) {
    const double needed = 2.0 * k.mfd().product_factor() * L;
    if (!allow_undercertified && rule_star.certified_order() < needed)
        throw std::invalid_argument("g_operator: rule under-certified for order 2AL");
    return build_eignet(sigma_continuous(f, L, cf), rule_star, k);
}

eignet g_operator_discrete(std::span<const double> samples, double L, const quadrature_rule& rule,
                           const quadrature_rule& rule_star, const kernel_g& k,
                           const cutoff_function& cf, bool allow_undercertified) {
    const double needed = 2.0 * k.mfd().product_factor() * L;
    if (!allow_undercertified && rule_star.certified_order() < needed)
        throw std::invalid_argument("g_operator_discrete: synthesis rule under-certified");
    return build_eignet(sigma_discrete(samples, rule, L, cf, allow_undercertified), rule_star, k);
}

Eigen::VectorXd diag_dominant_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                                    double gamma, dominance_certificate* cert) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n || y.size() != n)
        throw std::invalid_argument("diag_dominant_solve: dimension mismatch");
    if (gamma < 0.0 || gamma >= 1.0)
        throw std::invalid_argument("diag_dominant_solve: gamma must lie in [0,1)");

    double lambda = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double d = std::abs(a(j, j));
        lambda = std::min(lambda, d);
        double row = 0.0, col = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == j) continue;
            row += std::abs(a(j, i));
            col += std::abs(a(i, j));
        }
        if (row > gamma * d)
            throw std::invalid_argument("diag_dominant_solve: row dominance violated at index " +
                                        std::to_string(j));
        if (col > gamma * d)
            throw std::invalid_argument("diag_dominant_solve: column dominance violated at index " +
                                        std::to_string(j));
    }
    if (!(lambda > 0.0)) throw std::invalid_argument("diag_dominant_solve: zero diagonal");

    const Eigen::VectorXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(a).solve(y);

    const double factor = 1.0 / ((1.0 - gamma) * lambda);
    dominance_certificate c;
    c.gamma = gamma;
    c.lambda = lambda;
    c.bound_factor = factor;
    c.solution_norm = {x.lpNorm<1>(), x.norm(), x.lpNorm<Eigen::Infinity>()};
    c.rhs_norm = {y.lpNorm<1>(), y.norm(), y.lpNorm<Eigen::Infinity>()};
    c.verified = true;
    for (int i = 0; i < 3; ++i) {
        // allow roundoff at the scale of the bound itself
        if (c.solution_norm[i] > factor * c.rhs_norm[i] * (1.0 + 1e-12) + 1e-300) c.verified = false;
    }
    if (!c.verified) throw std::logic_error("diag_dominant_solve: certified bound violated");
    if (cert) *cert = c;
    return x;
}

double coeff_norm_ratio(const eignet& net, double p) {
    double an = 0.0;
    if (std::isinf(p)) an = net.coeffs().lpNorm<Eigen::Infinity>();
    else if (p == 1.0) an = net.coeffs().lpNorm<1>();
    else if (p == 2.0) an = net.coeffs().norm();
    else throw std::invalid_argument("coeff_norm_ratio: p must be 1, 2 or inf");
    const double fn = lp_norm(net.to_spectral(), p);
    if (fn == 0.0) throw std::domain_error("coeff_norm_ratio: zero eignet");
    return an / fn;
}

} // namespace eignets
