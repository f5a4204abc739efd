#include "eignets/manifold.hpp"

#include <cmath>
#include <stdexcept>

namespace eignets {

namespace {

double wrap_angle(double t) {
    t = std::fmod(t, 2.0 * pi);
    if (t < 0.0) t += 2.0 * pi;
    if (t >= 2.0 * pi) t = 0.0;
    return t;
}

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = t;
            for (int k = 1; k < n; ++k) {
                double p2 = ((2.0 * k + 1.0) * t * p1 - k * p0) / (k + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
}

class circle_manifold final : public manifold {
public:
    std::string_view name() const override { return "circle"; }
    domain_kind kind() const override { return domain_kind::circle; }
    double alpha() const override { return 1.0; }
    double product_factor() const override { return 2.0; }
    int max_level() const override { return 4096; }

    point canonical(point p) const override {
        require_same_domain(p);
        return {domain_kind::circle, wrap_angle(p.a), 0.0};
    }

    double geodesic(const point& x, const point& y) const override {
        require_same_domain(x);
        require_same_domain(y);
        double d = std::abs(wrap_angle(x.a) - wrap_angle(y.a));
        return std::min(d, 2.0 * pi - d);
    }

    double ball_measure(const point& x, double r) const override {
        require_same_domain(x);
        if (r < 0.0) throw std::invalid_argument("ball_measure: negative radius");
        return std::min(r / pi, 1.0);
    }

    std::size_t basis_count(double level_bound) const override {
        if (level_bound < 0.0) return 0;
        return 1 + 2 * static_cast<std::size_t>(std::floor(level_bound));
    }

    double level(std::size_t j) const override { return static_cast<double>((j + 1) / 2); }

    double basis_eval(std::size_t j, const point& x) const override {
        require_same_domain(x);
        if (level(j) > max_level()) throw std::out_of_range("basis index beyond configured max level");
        if (j == 0) return 1.0;
        const double k = static_cast<double>((j + 1) / 2);
        const double root2 = std::sqrt(2.0);
        return (j % 2 == 1) ? root2 * std::cos(k * x.a) : root2 * std::sin(k * x.a);
    }

    void basis_row(const point& x, std::span<double> out) const override {
        require_same_domain(x);
        if (out.empty()) return;
        out[0] = 1.0;
        const double root2 = std::sqrt(2.0);
        std::size_t k = 1;
        for (std::size_t j = 1; j < out.size(); j += 2, ++k) {
            const double c = std::cos(k * x.a), s = std::sin(k * x.a);
            out[j] = root2 * c;
            if (j + 1 < out.size()) out[j + 1] = root2 * s;
        }
    }

    grid_rule reference_grid(double order) const override {
        if (order < 0.0) order = 0.0;
        // trapezoid with n nodes is exact for trig degree <= n-1
        const std::size_t n = 2 * static_cast<std::size_t>(std::ceil(order)) + 1;
        grid_rule g;
        g.order = order;
        g.nodes.reserve(n);
        g.weights.assign(n, 1.0 / static_cast<double>(n));
        for (std::size_t j = 0; j < n; ++j)
            g.nodes.push_back({domain_kind::circle, 2.0 * pi * static_cast<double>(j) / static_cast<double>(n), 0.0});
        return g;
    }
};

class sphere_manifold final : public manifold {
public:
    std::string_view name() const override { return "sphere"; }
    domain_kind kind() const override { return domain_kind::sphere; }
    double alpha() const override { return 2.0; }
    double product_factor() const override { return 2.0; }
    int max_level() const override { return 128; }

    point canonical(point p) const override {
        require_same_domain(p);
        double th = p.a, ph = wrap_angle(p.b);
        th = std::fmod(th, 2.0 * pi);
        if (th < 0.0) th += 2.0 * pi;
        if (th > pi) { // reflect through the pole
            th = 2.0 * pi - th;
            ph = wrap_angle(ph + pi);
        }
        if (th == 0.0 || th == pi) ph = 0.0; // poles have a unique representation
        return {domain_kind::sphere, th, ph};
    }

    double geodesic(const point& x, const point& y) const override {
        require_same_domain(x);
        require_same_domain(y);
        // haversine form of the central angle; stable near 0 and symmetric in FP
        const double hdt = std::sin(0.5 * (x.a - y.a));
        const double hdp = std::sin(0.5 * (x.b - y.b));
        double hav = hdt * hdt + std::sin(x.a) * std::sin(y.a) * hdp * hdp;
        hav = std::min(std::max(hav, 0.0), 1.0);
        return 2.0 * std::asin(std::sqrt(hav));
    }

    double ball_measure(const point& x, double r) const override {
        require_same_domain(x);
        if (r < 0.0) throw std::invalid_argument("ball_measure: negative radius");
        return 0.5 * (1.0 - std::cos(std::min(r, pi)));
    }

    std::size_t basis_count(double level_bound) const override {
        if (level_bound < 0.0) return 0;
        const std::size_t l = static_cast<std::size_t>(std::floor(level_bound));
        return (l + 1) * (l + 1);
    }

    double level(std::size_t j) const override {
        return std::floor(std::sqrt(static_cast<double>(j)));
    }

    double basis_eval(std::size_t j, const point& x) const override {
        require_same_domain(x);
        const int l = static_cast<int>(level(j));
        if (l > max_level()) throw std::out_of_range("basis index beyond configured max level");
        const int m = static_cast<int>(j) - l * l - l;
        return harmonic(l, m, x);
    }

    void basis_row(const point& x, std::span<double> out) const override {
        require_same_domain(x);
        if (out.empty()) return;
        const int lmax = static_cast<int>(level(out.size() - 1));
        const double ct = std::cos(x.a), st = std::sin(x.a);
        // alf[m] holds pbar_{l,m}(ct) for the current l of the upward recurrence
        std::vector<double> pmm(lmax + 1), plm(lmax + 1), plm_prev(lmax + 1);
        std::vector<double> cosm(lmax + 1), sinm(lmax + 1);
        for (int m = 0; m <= lmax; ++m) {
            cosm[m] = std::cos(m * x.b);
            sinm[m] = std::sin(m * x.b);
        }
        const double inv4pi = 1.0 / (4.0 * pi);
        double pm = std::sqrt(inv4pi); // pbar_{0,0}
        for (int m = 0; m <= lmax; ++m) {
            pmm[m] = pm;
            pm *= -st * std::sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0));
        }
        for (int l = 0; l <= lmax; ++l) {
            for (int m = 0; m <= l; ++m) {
                double v;
                if (l == m) {
                    v = pmm[m];
                } else if (l == m + 1) {
                    v = ct * std::sqrt(2.0 * m + 3.0) * pmm[m];
                } else {
                    const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
                    const double b = std::sqrt(((l - 1.0) * (l - 1.0) - static_cast<double>(m) * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
                    v = a * (ct * plm[m] - b * plm_prev[m]);
                }
                plm_prev[m] = plm[m];
                plm[m] = v;
                const double scale = std::sqrt(4.0 * pi) * (m == 0 ? 1.0 : std::sqrt(2.0));
                const std::size_t j0 = static_cast<std::size_t>(l) * l + l;
                if (m == 0) {
                    if (j0 < out.size()) out[j0] = scale * v;
                } else {
                    const std::size_t jc = j0 + m, js = j0 - m;
                    if (jc < out.size()) out[jc] = scale * v * cosm[m];
                    if (js < out.size()) out[js] = scale * v * sinm[m];
                }
            }
        }
    }

    grid_rule reference_grid(double order) const override {
        if (order < 0.0) order = 0.0;
        // exact for spherical-polynomial degree <= 2*order
        const int deg = 2 * static_cast<int>(std::ceil(order));
        const int ngl = deg / 2 + 1;
        const int nlon = deg + 1;
        std::vector<double> gx, gw;
        gauss_legendre(ngl, gx, gw);
        grid_rule g;
        g.order = order;
        g.nodes.reserve(static_cast<std::size_t>(ngl) * nlon);
        g.weights.reserve(static_cast<std::size_t>(ngl) * nlon);
        for (int i = 0; i < ngl; ++i) {
            const double th = std::acos(gx[i]);
            const double wi = gw[i] / (2.0 * nlon); // Sum gw = 2, total mass 1
            for (int jl = 0; jl < nlon; ++jl)
                g.nodes.push_back({domain_kind::sphere, th, 2.0 * pi * jl / nlon}), g.weights.push_back(wi);
        }
        return g;
    }

private:
    double harmonic(int l, int m, const point& x) const {
        const int ma = std::abs(m);
        const double ct = std::cos(x.a), st = std::sin(x.a);
        double pmm = std::sqrt(1.0 / (4.0 * pi));
        for (int k = 0; k < ma; ++k) pmm *= -st * std::sqrt((2.0 * k + 3.0) / (2.0 * k + 2.0));
        double v = pmm;
        if (l > ma) {
            double prev = 0.0;
            double cur = pmm;
            for (int ll = ma + 1; ll <= l; ++ll) {
                double nxt;
                if (ll == ma + 1) {
                    nxt = ct * std::sqrt(2.0 * ma + 3.0) * cur;
                } else {
                    const double a = std::sqrt((4.0 * ll * ll - 1.0) / (static_cast<double>(ll) * ll - static_cast<double>(ma) * ma));
                    const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - static_cast<double>(ma) * ma) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
                    nxt = a * (ct * cur - b * prev);
                }
                prev = cur;
                cur = nxt;
            }
            v = cur;
        }
        const double scale = std::sqrt(4.0 * pi) * (m == 0 ? 1.0 : std::sqrt(2.0));
        if (m == 0) return scale * v;
        return scale * v * (m > 0 ? std::cos(m * x.b) : std::sin(ma * x.b));
    }
};

} // namespace

void manifold::require_same_domain(const point& p) const {
    if (p.dom != kind()) throw std::invalid_argument("point does not belong to this manifold");
}

double manifold::christoffel_sum(const point& x, double level_bound) const {
    const std::size_t n = basis_count(level_bound);
    std::vector<double> row(n);
    basis_row(x, row);
    double s = 0.0;
    for (double v : row) s += v * v;
    return s;
}

double manifold::heat_kernel(const point& x, const point& y, double t) const {
    if (t <= 0.0) throw std::invalid_argument("heat_kernel: t must be positive");
    // truncate once exp(-l^2 t) < 1e-16, capped at the configured max level
    double lcut = std::sqrt(16.0 * std::log(10.0) / t);
    lcut = std::min(lcut, static_cast<double>(max_level()));
    const std::size_t n = basis_count(lcut);
    std::vector<double> rx(n), ry(n);
    basis_row(x, rx);
    basis_row(y, ry);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double l = level(j);
        s += std::exp(-l * l * t) * rx[j] * ry[j];
    }
    return s;
}

std::shared_ptr<const manifold> make_manifold(std::string_view name) {
    if (name == "circle") return std::make_shared<circle_manifold>();
    if (name == "sphere") return std::make_shared<sphere_manifold>();
    throw std::invalid_argument("unknown manifold: " + std::string(name));
}

point circle_point(double theta) { return {domain_kind::circle, wrap_angle(theta), 0.0}; }

point sphere_point(double colat, double lon) {
    point p{domain_kind::sphere, colat, lon};
    static const auto sph = make_manifold("sphere");
    return sph->canonical(p);
}

} // namespace eignets
