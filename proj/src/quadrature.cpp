#include "eignets/quadrature.hpp"

#include "eignets/rng.hpp"
#include "eignets/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace eignets {

namespace {

// constraint matrix B_{k,i} = phi_k(y_i) for l_k <= L
Eigen::MatrixXd constraint_matrix(const point_set& c, double L) {
    const manifold& m = c.mfd();
    const std::size_t nk = m.basis_count(L);
    Eigen::MatrixXd b(nk, c.size());
    std::vector<double> row(nk);
    for (std::size_t i = 0; i < c.size(); ++i) {
        m.basis_row(c[i], row);
        for (std::size_t k = 0; k < nk; ++k) b(k, i) = row[k];
    }
    return b;
}

// per-level moment residuals |sum w phi_k - delta_{k0}| up to `order`
std::vector<double> moment_residuals(const quadrature_rule& rule, double order) {
    const manifold& m = rule.centers().mfd();
    const std::size_t nk = m.basis_count(order);
    std::vector<double> res(nk, 0.0);
    std::vector<double> acc(nk, 0.0), row(nk);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        m.basis_row(rule.centers()[i], row);
        const double w = rule.weights()[i];
        for (std::size_t k = 0; k < nk; ++k) acc[k] += w * row[k];
    }
    for (std::size_t k = 0; k < nk; ++k) res[k] = std::abs(acc[k] - (k == 0 ? 1.0 : 0.0));
    return res;
}

} // namespace

quadrature_rule::quadrature_rule(point_set centers, std::vector<double> weights)
    : centers_(std::move(centers)), weights_(std::move(weights)) {
    if (centers_.size() != weights_.size())
        throw std::invalid_argument("quadrature_rule: centers/weights size mismatch");
}

std::string quadrature_rule::method_name() const {
    switch (method_) {
        case weight_method::min_norm: return "min-norm";
        case weight_method::residual_min: return "residual-minimized";
        case weight_method::uniform: return "uniform";
        case weight_method::reference: return "reference-grid";
    }
    return "?";
}

discrete_measure quadrature_rule::abs_measure() const {
    std::vector<double> mass(weights_.size());
    for (std::size_t i = 0; i < mass.size(); ++i) mass[i] = std::abs(weights_[i]);
    return {centers_, std::move(mass)};
}

discrete_measure quadrature_rule::signed_measure() const { return {centers_, weights_}; }

void quadrature_rule::certify(double order, double tol) {
    const manifold& m = centers_.mfd();
    const std::vector<double> res = moment_residuals(*this, order);
    double worst = 0.0, certified = -1.0;
    for (std::size_t k = 0; k < res.size(); ++k) {
        worst = std::max(worst, res[k]);
        if (worst <= tol) certified = m.level(k);
    }
    certified_order_ = certified;
    residual_ = worst;

    if (centers_.size() >= 2) {
        const double q = min_separation(centers_);
        double wmax = 0.0;
        for (double w : weights_) wmax = std::max(wmax, std::abs(w));
        weight_bound_const_ = wmax / std::pow(q, m.alpha());
    }
    if (certified > 0.0) {
        regularity_d_ = 1.0 / certified;
        regularity_norm_est_ = regularity_norm(abs_measure(), regularity_d_).norm;
    }
}

quadrature_rule solve_weights(const point_set& c, double L, double residual_tol) {
    if (c.size() == 0) throw std::invalid_argument("solve_weights: empty center set");
    const manifold& m = c.mfd();
    const std::size_t nk = m.basis_count(L);

    const Eigen::MatrixXd b = constraint_matrix(c, L);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(nk);
    e(0) = 1.0;

    // Complete orthogonal factorization gives the minimum-norm solution of
    // min ||B w - e||; when the constraints are consistent this is exactly
    // the minimizer of sum w^2 subject to B w = e.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(b);
    cod.setThreshold(1e-12);
    const Eigen::VectorXd w = cod.solve(e);

    quadrature_rule rule(c, std::vector<double>(w.data(), w.data() + w.size()));
    rule.rank_ = static_cast<std::size_t>(cod.rank());
    rule.certify(L, residual_tol);
    // rank-deficient or infeasible systems keep their achieved residual and
    // are reported as residual-minimized, never silently accepted
    rule.method_ =
        rule.residual_ <= residual_tol ? weight_method::min_norm : weight_method::residual_min;
    return rule;
}

quadrature_rule uniform_circle_rule(const point_set& c, double certify_order) {
    if (c.mfd().kind() != domain_kind::circle)
        throw std::invalid_argument("uniform_circle_rule: circle manifold required");
    quadrature_rule rule(c, std::vector<double>(c.size(), 1.0 / static_cast<double>(c.size())));
    rule.method_ = weight_method::uniform;
    rule.certify(certify_order);
    return rule;
}

quadrature_rule reference_rule(const std::shared_ptr<const manifold>& m, double order) {
    grid_rule g = m->reference_grid(order);
    quadrature_rule rule(point_set(m, std::move(g.nodes)), std::move(g.weights));
    rule.method_ = weight_method::reference;
    rule.certified_order_ = 2.0 * order; // exact for plain degree <= 2*order
    rule.residual_ = 0.0;
    rule.regularity_d_ = 1.0 / std::max(1.0, 2.0 * order);
    return rule;
}

exactness_report verify_exactness(const quadrature_rule& rule, double order, int product_trials,
                                  std::uint64_t seed) {
    exactness_report rep;
    rep.order = order;
    const std::vector<double> res = moment_residuals(rule, order);
    for (double r : res) rep.max_basis_residual = std::max(rep.max_basis_residual, r);

    // spot-check random products P1 P2 with Pi in Pi_{order/2} against the
    // reference grid (the order-2AL requirement acts on such products)
    const auto& m = rule.centers().mfd_ptr();
    const double half = order / 2.0;
    const std::size_t nh = m->basis_count(half);
    if (nh > 0 && product_trials > 0) {
        rng gen(seed);
        const grid_rule grid = m->reference_grid(half);
        for (int t = 0; t < product_trials; ++t) {
            std::vector<double> c1(nh), c2(nh);
            for (std::size_t j = 0; j < nh; ++j) c1[j] = gen.normal();
            for (std::size_t j = 0; j < nh; ++j) c2[j] = gen.normal();
            spectral_vector p1(m, std::move(c1)), p2(m, std::move(c2));

            double discrete = 0.0;
            for (std::size_t i = 0; i < rule.size(); ++i)
                discrete += rule.weights()[i] *
                            synth_eval(p1, rule.centers()[i]) * synth_eval(p2, rule.centers()[i]);
            double exact = 0.0;
            for (std::size_t i = 0; i < grid.nodes.size(); ++i)
                exact += grid.weights[i] * synth_eval(p1, grid.nodes[i]) * synth_eval(p2, grid.nodes[i]);
            rep.max_product_residual = std::max(rep.max_product_residual, std::abs(discrete - exact));
        }
    }
    return rep;
}

mz_report mz_check(const point_set& c, double L, int trials, std::uint64_t seed) {
    const auto& m = c.mfd_ptr();
    mz_report rep;
    rep.L = L;
    rep.trials = trials;
    rep.delta = mesh_norm(c).value;
    rep.ratio_min = std::numeric_limits<double>::infinity();

    std::vector<double> ball(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) ball[i] = m->ball_measure(c[i], rep.delta);

    rng gen(seed);
    const std::size_t nk = m->basis_count(L);
    const grid_rule grid = m->reference_grid(std::max(4.0 * L, 64.0));
    for (int t = 0; t < trials; ++t) {
        std::vector<double> coef(nk);
        for (std::size_t j = 0; j < nk; ++j) coef[j] = gen.normal();
        spectral_vector p(m, std::move(coef));

        double discrete = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) discrete += ball[i] * std::abs(synth_eval(p, c[i]));
        std::vector<double> vals(grid.nodes.size());
        synth_eval_many(p, grid.nodes, vals);
        const double l1 = lp_norm_samples(vals, grid, 1.0);
        const double ratio = discrete / l1;
        rep.ratio_min = std::min(rep.ratio_min, ratio);
        rep.ratio_max = std::max(rep.ratio_max, ratio);
    }
    return rep;
}

} // namespace eignets
