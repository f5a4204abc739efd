#include "eignets/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eignets {

namespace {

bool same_canonical(const manifold& m, const point& a, const point& b) {
    return a.a == b.a && a.b == b.b && a.dom == b.dom && m.geodesic(a, b) == 0.0;
}

double dist_to_set(const manifold& m, const point& x, const std::vector<point>& c) {
    double best = std::numeric_limits<double>::infinity();
    for (const point& y : c) best = std::min(best, m.geodesic(x, y));
    return best;
}

} // namespace

point_set::point_set(std::shared_ptr<const manifold> m, std::vector<point> pts)
    : m_(std::move(m)) {
    pts_.reserve(pts.size());
    for (point& p : pts) {
        point q = m_->canonical(p);
        for (const point& existing : pts_)
            if (same_canonical(*m_, existing, q))
                throw std::invalid_argument("point_set: duplicate canonical point");
        pts_.push_back(q);
    }
}

bool point_set::contains(const point& p, double tol) const {
    const point q = m_->canonical(p);
    for (const point& y : pts_)
        if (m_->geodesic(y, q) <= tol) return true;
    return false;
}

point_set equispaced_circle(std::shared_ptr<const manifold> circle, std::size_t n) {
    if (circle->kind() != domain_kind::circle)
        throw std::invalid_argument("equispaced_circle: circle manifold required");
    std::vector<point> pts;
    pts.reserve(n);
    for (std::size_t j = 0; j < n; ++j)
        pts.push_back(circle_point(2.0 * pi * static_cast<double>(j) / static_cast<double>(n)));
    return {std::move(circle), std::move(pts)};
}

point_set probe_grid(const std::shared_ptr<const manifold>& m, double spacing) {
    spacing = std::max(spacing, 1e-4);
    std::vector<point> pts;
    if (m->kind() == domain_kind::circle) {
        const std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * pi / spacing));
        for (std::size_t j = 0; j < n; ++j)
            pts.push_back(circle_point(2.0 * pi * static_cast<double>(j) / static_cast<double>(n)));
    } else {
        // latitude rings at the requested spacing, ring sizes scaled by sin
        const std::size_t nth = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(pi / spacing)));
        pts.push_back(sphere_point(0.0, 0.0));
        pts.push_back(sphere_point(pi, 0.0));
        for (std::size_t i = 1; i < nth; ++i) {
            const double th = pi * static_cast<double>(i) / static_cast<double>(nth);
            const std::size_t nph = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::ceil(2.0 * pi * std::sin(th) / spacing)));
            for (std::size_t j = 0; j < nph; ++j)
                pts.push_back(sphere_point(th, 2.0 * pi * static_cast<double>(j) / static_cast<double>(nph)));
        }
    }
    return {m, std::move(pts)};
}

double min_separation(const point_set& c) {
    if (c.size() < 2) throw std::invalid_argument("min_separation: need at least two points");
    const manifold& m = c.mfd();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            best = std::min(best, m.geodesic(c[i], c[j]));
    return best;
}

double mesh_norm(const point_set& c, const point_set& k) {
    if (c.size() == 0) throw std::invalid_argument("mesh_norm: empty center set");
    const manifold& m = c.mfd();
    double worst = 0.0;
    for (const point& x : k.points()) worst = std::max(worst, dist_to_set(m, x, c.points()));
    return worst;
}

mesh_norm_estimate mesh_norm(const point_set& c) {
    if (c.size() == 0) throw std::invalid_argument("mesh_norm: empty center set");
    const auto& m = c.mfd_ptr();
    const double nominal =
        2.0 * m->diameter() * std::pow(static_cast<double>(c.size()), -1.0 / m->alpha());
    const double spacing = nominal / 8.0;
    const point_set probes = probe_grid(m, spacing);
    return {mesh_norm(c, probes), spacing};
}

point_set greedy_separate(const point_set& c, double eps, thinning_certificate* cert) {
    if (eps <= 0.0) throw std::invalid_argument("greedy_separate: eps must be positive");
    const manifold& m = c.mfd();
    std::vector<point> kept;
    for (const point& x : c.points())
        if (kept.empty() || dist_to_set(m, x, kept) >= eps) kept.push_back(x);
    point_set out(c.mfd_ptr(), std::move(kept));
    if (cert) {
        cert->eps = eps;
        cert->separation = out.size() >= 2 ? min_separation(out) : std::numeric_limits<double>::infinity();
        cert->covering = mesh_norm(out, c);
        cert->ok = cert->separation >= eps && cert->covering <= eps;
    }
    return out;
}

std::vector<point_set> nested_separate(const std::vector<point_set>& chain,
                                       std::vector<nested_level_certificate>* certs) {
    if (chain.empty()) return {};
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        for (const point& p : chain[i].points())
            if (!chain[i + 1].contains(p))
                throw std::invalid_argument("nested_separate: inputs are not nested");
    }
    const auto& m = chain.front().mfd_ptr();
    std::vector<point_set> out;
    out.reserve(chain.size());

    const double d0 = mesh_norm(chain.front()).value;
    out.push_back(greedy_separate(chain.front(), std::max(d0, 1e-12)));

    for (std::size_t i = 1; i < chain.size(); ++i) {
        const point_set& fine = chain[i];
        const point_set& coarse = out.back();
        const double df = mesh_norm(fine).value;
        // merge step: keep previous level, adjoin new points at least df away,
        // then thin the adjoined part at scale df
        std::vector<point> fresh;
        for (const point& x : fine.points())
            if (dist_to_set(*m, x, coarse.points()) >= df) fresh.push_back(x);
        std::vector<point> merged = coarse.points();
        if (!fresh.empty()) {
            point_set thinned = greedy_separate(point_set(m, std::move(fresh)), std::max(df, 1e-12));
            for (const point& x : thinned.points()) merged.push_back(x);
        }
        out.emplace_back(m, std::move(merged));
    }

    if (certs) {
        certs->clear();
        for (const point_set& s : out) {
            nested_level_certificate lc;
            lc.q = s.size() >= 2 ? min_separation(s) : std::numeric_limits<double>::infinity();
            lc.delta = mesh_norm(s).value;
            lc.uniform = lc.delta <= 2.0 * lc.q;
            certs->push_back(lc);
        }
    }
    return out;
}

discrete_measure::discrete_measure(point_set support, std::vector<double> mass)
    : support_(std::move(support)), mass_(std::move(mass)) {
    if (support_.size() != mass_.size())
        throw std::invalid_argument("discrete_measure: support/mass size mismatch");
}

double discrete_measure::total_variation() const {
    double s = 0.0;
    for (double v : mass_) s += std::abs(v);
    return s;
}

double discrete_measure::abs_ball(const point& x, double r) const {
    const manifold& m = support_.mfd();
    double s = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i)
        if (m.geodesic(x, support_[i]) <= r) s += std::abs(mass_[i]);
    return s;
}

discrete_measure operator+(const discrete_measure& a, const discrete_measure& b) {
    const manifold& m = a.support().mfd();
    if (&m != &b.support().mfd() && m.kind() != b.support().mfd().kind())
        throw std::invalid_argument("discrete_measure: mixed manifolds");
    std::vector<point> pts = a.support().points();
    std::vector<double> mass = a.mass();
    for (std::size_t i = 0; i < b.support().size(); ++i) {
        const point& p = b.support()[i];
        bool merged = false;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (m.geodesic(pts[k], p) == 0.0) {
                mass[k] += b.mass()[i];
                merged = true;
                break;
            }
        }
        if (!merged) {
            pts.push_back(p);
            mass.push_back(b.mass()[i]);
        }
    }
    return {point_set(a.support().mfd_ptr(), std::move(pts)), std::move(mass)};
}

regularity_estimate regularity_norm(const discrete_measure& nu, double d) {
    if (d <= 0.0) throw std::invalid_argument("regularity_norm: d must be positive");
    const auto& m = nu.support().mfd_ptr();
    const double alpha = m->alpha();
    const double da = std::pow(d, alpha);

    std::vector<double> radii;
    for (double r = d / 8.0; r <= m->diameter() * 1.0000001; r *= 2.0) radii.push_back(r);

    std::vector<point> centers = nu.support().points();
    const point_set probes = probe_grid(m, std::max(d, m->diameter() / 64.0));
    for (const point& p : probes.points()) centers.push_back(p);

    double worst = 0.0;
    for (const point& x : centers)
        for (double r : radii)
            worst = std::max(worst, nu.abs_ball(x, r) / (m->ball_measure(x, r) + da));
    return {worst, d, radii.size(), centers.size()};
}

} // namespace eignets
