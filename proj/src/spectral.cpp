#include "eignets/spectral.hpp"

#include "eignets/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eignets {

namespace {

double smooth_step(double u) {
    // chi(u) = s(u)/(s(u)+s(1-u)), s(u) = exp(-1/u) for u > 0
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u);
    const double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

} // namespace

cutoff_function::cutoff_function(int smoothness, int kstar)
    : smoothness_(smoothness), kstar_(kstar), kstar_scale_(std::ldexp(1.0, kstar + 1)) {
    if (kstar < 2) throw std::invalid_argument("cutoff_function: k* must be >= 2");
    if (smoothness < 1) throw std::invalid_argument("cutoff_function: smoothness must be >= 1");
}

double cutoff_function::h(double t) const {
    t = std::abs(t);
    if (t <= 0.5) return 1.0;
    if (t >= 1.0) return 0.0;
    return smooth_step(2.0 * (1.0 - t));
}

mask::mask(double beta) : beta_(beta), fb_(), fb_sup_(1.0) {}

mask::mask(double beta, std::function<double(double)> fb, double fb_sup)
    : beta_(beta), fb_(std::move(fb)), fb_sup_(fb_sup) {}

double mask::operator()(double t) const {
    t = std::abs(t);
    const double base = std::pow(1.0 + t, -beta_);
    if (!fb_) return base;
    if (t == 0.0) return fb_(-745.0) ; // F_b at log 0+; bounded by assumption
    return base * fb_(std::log(t));
}

mask mask::shifted(double r) const {
    if (!fb_) return mask(beta_ - r);
    auto fb = fb_;
    return {beta_ - r, fb, fb_sup_};
}

spectral_vector::spectral_vector(std::shared_ptr<const manifold> m, std::size_t n)
    : m_(std::move(m)), c_(n, 0.0) {}

spectral_vector::spectral_vector(std::shared_ptr<const manifold> m, std::vector<double> coeffs)
    : m_(std::move(m)), c_(std::move(coeffs)) {}

double& spectral_vector::at(std::size_t j) {
    if (j >= c_.size()) c_.resize(j + 1, 0.0);
    return c_[j];
}

double spectral_vector::degree() const {
    for (std::size_t j = c_.size(); j-- > 0;)
        if (c_[j] != 0.0) return m_->level(j);
    return 0.0;
}

spectral_vector& spectral_vector::operator+=(const spectral_vector& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t j = 0; j < o.c_.size(); ++j) c_[j] += o.c_[j];
    return *this;
}

spectral_vector& spectral_vector::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

double phi_kernel_eval(const manifold& m, const std::function<double(double)>& H,
                       double support_radius, double L, const point& x, const point& y) {
    if (L <= 0.0) throw std::invalid_argument("phi_kernel_eval: L must be positive");
    const std::size_t n = m.basis_count(L * support_radius);
    std::vector<double> rx(n), ry(n);
    m.basis_row(x, rx);
    m.basis_row(y, ry);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = H(m.level(j) / L);
        if (w != 0.0) s += w * rx[j] * ry[j];
    }
    return s;
}

spectral_vector sigma_continuous(const spectral_vector& f, double L, const cutoff_function& cf) {
    if (L <= 0.0) throw std::invalid_argument("sigma_continuous: L must be positive");
    const manifold& m = f.mfd();
    const std::size_t n = std::min<std::size_t>(f.size(), m.basis_count(L));
    std::vector<double> c(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) c[j] = cf.h(m.level(j) / L) * f[j];
    return {f.mfd_ptr(), std::move(c)};
}

spectral_vector sigma_discrete(std::span<const double> samples, const quadrature_rule& rule,
                               double L, const cutoff_function& cf, bool allow_undercertified) {
    const point_set& centers = rule.centers();
    if (samples.size() != centers.size())
        throw std::invalid_argument("sigma_discrete: samples missing at rule centers");
    const auto& m = centers.mfd_ptr();
    const double needed = 2.0 * m->product_factor() * L;
    if (!allow_undercertified && rule.certified_order() < needed)
        throw std::invalid_argument("sigma_discrete: rule under-certified for order 2AL");

    const std::size_t n = m->basis_count(std::nextafter(L, 0.0)); // h vanishes at l >= L
    std::vector<double> c(n, 0.0);
    std::vector<double> row(n);
    for (std::size_t i = 0; i < centers.size(); ++i) {
        m->basis_row(centers[i], row);
        const double wf = rule.weights()[i] * samples[i];
        for (std::size_t j = 0; j < n; ++j) c[j] += wf * row[j];
    }
    for (std::size_t j = 0; j < n; ++j) c[j] *= cf.h(m->level(j) / L);
    return {m, std::move(c)};
}

spectral_vector delta_star(const spectral_vector& f, double r) {
    const manifold& m = f.mfd();
    std::vector<double> c(f.coeffs());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] *= std::pow(1.0 + m.level(j), r);
    return {f.mfd_ptr(), std::move(c)};
}

spectral_vector dg_apply(const spectral_vector& f, const mask& b) {
    const manifold& m = f.mfd();
    std::vector<double> c(f.coeffs());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] /= b(m.level(j));
    return {f.mfd_ptr(), std::move(c)};
}

double synth_eval(const spectral_vector& f, const point& x) {
    const manifold& m = f.mfd();
    std::vector<double> row(f.size());
    m.basis_row(x, row);
    double s = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * row[j];
    return s;
}

void synth_eval_many(const spectral_vector& f, std::span<const point> xs, std::span<double> out) {
    const manifold& m = f.mfd();
    std::vector<double> row(f.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        m.basis_row(xs[i], row);
        double s = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * row[j];
        out[i] = s;
    }
}

std::vector<point> sup_norm_grid(const manifold& m, double degree, int density_factor) {
    const double d = std::max(degree, 1.0);
    std::vector<point> pts;
    if (m.kind() == domain_kind::circle) {
        const std::size_t n = static_cast<std::size_t>(density_factor) * (2 * static_cast<std::size_t>(std::ceil(d)) + 1);
        pts.reserve(n);
        for (std::size_t j = 0; j < n; ++j)
            pts.push_back(circle_point(2.0 * pi * static_cast<double>(j) / static_cast<double>(n)));
    } else {
        const int lin = std::max(2, density_factor / 4); // ~16x area density
        const int nth = lin * (static_cast<int>(std::ceil(d)) + 1);
        const int nph = 2 * nth;
        for (int i = 0; i <= nth; ++i)
            for (int j = 0; j < nph; ++j)
                pts.push_back(sphere_point(pi * i / nth, 2.0 * pi * j / nph));
    }
    return pts;
}

double lp_norm_samples(std::span<const double> values, const grid_rule& grid, double p) {
    if (values.size() != grid.nodes.size())
        throw std::invalid_argument("lp_norm_samples: grid/value size mismatch");
    if (std::isinf(p)) {
        double worst = 0.0;
        for (double v : values) worst = std::max(worst, std::abs(v));
        return worst;
    }
    double s = 0.0;
    if (p == 1.0) {
        for (std::size_t i = 0; i < values.size(); ++i) s += grid.weights[i] * std::abs(values[i]);
        return s;
    }
    if (p == 2.0) {
        for (std::size_t i = 0; i < values.size(); ++i) s += grid.weights[i] * values[i] * values[i];
        return std::sqrt(s);
    }
    throw std::invalid_argument("lp_norm: p must be 1, 2 or inf");
}

double lp_norm(const spectral_vector& f, double p) {
    const manifold& m = f.mfd();
    const double deg = f.degree();
    if (std::isinf(p)) {
        const std::vector<point> grid = sup_norm_grid(m, deg);
        std::vector<double> vals(grid.size());
        synth_eval_many(f, grid, vals);
        double worst = 0.0;
        for (double v : vals) worst = std::max(worst, std::abs(v));
        return worst;
    }
    const grid_rule grid = m.reference_grid(std::max(deg, 16.0) + 8.0);
    std::vector<double> vals(grid.nodes.size());
    synth_eval_many(f, grid.nodes, vals);
    return lp_norm_samples(vals, grid, p);
}

synthesis_table::synthesis_table(std::shared_ptr<const manifold> m, std::vector<point> nodes,
                                 std::size_t n_basis)
    : m_(std::move(m)), nodes_(std::move(nodes)) {
    basis_.resize(static_cast<Eigen::Index>(nodes_.size()), static_cast<Eigen::Index>(n_basis));
    std::vector<double> row(n_basis);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        m_->basis_row(nodes_[i], row);
        for (std::size_t j = 0; j < n_basis; ++j) basis_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
    }
}

synthesis_table::synthesis_table(std::shared_ptr<const manifold> m, const grid_rule& grid,
                                 std::size_t n_basis)
    : synthesis_table(std::move(m), grid.nodes, n_basis) {
    weights_ = Eigen::Map<const Eigen::VectorXd>(grid.weights.data(),
                                                 static_cast<Eigen::Index>(grid.weights.size()));
}

Eigen::VectorXd synthesis_table::eval(const spectral_vector& f) const {
    if (f.size() > n_basis()) throw std::invalid_argument("synthesis_table: vector exceeds table basis");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(basis_.cols());
    for (std::size_t j = 0; j < f.size(); ++j) c(static_cast<Eigen::Index>(j)) = f[j];
    return basis_ * c;
}

Eigen::VectorXd synthesis_table::moments(std::span<const double> node_values) const {
    if (node_values.size() != nodes_.size())
        throw std::invalid_argument("synthesis_table: node value count mismatch");
    const Eigen::Map<const Eigen::VectorXd> v(node_values.data(),
                                              static_cast<Eigen::Index>(node_values.size()));
    return basis_.transpose() * v;
}

double synthesis_table::norm(const spectral_vector& f, double p) const {
    const Eigen::VectorXd vals = eval(f);
    if (std::isinf(p)) return vals.lpNorm<Eigen::Infinity>();
    if (weights_.size() != vals.size())
        throw std::invalid_argument("synthesis_table: integral norm needs a weighted grid");
    if (p == 1.0) return weights_.dot(vals.cwiseAbs());
    if (p == 2.0) return std::sqrt(weights_.dot(vals.cwiseAbs2()));
    throw std::invalid_argument("synthesis_table: p must be 1, 2 or inf");
}

spectral_vector analyze(const std::shared_ptr<const manifold>& m, const grid_rule& grid,
                        std::span<const double> values, double max_level) {
    if (values.size() != grid.nodes.size())
        throw std::invalid_argument("analyze: grid/value size mismatch");
    const std::size_t n = m->basis_count(max_level);
    std::vector<double> c(n, 0.0);
    std::vector<double> row(n);
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        m->basis_row(grid.nodes[i], row);
        const double wv = grid.weights[i] * values[i];
        for (std::size_t j = 0; j < n; ++j) c[j] += wv * row[j];
    }
    return {m, std::move(c)};
}

} // namespace eignets
