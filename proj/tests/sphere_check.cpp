// Sphere-side secondary check: the full operator pipeline on thinned nested
// product grids with solved weights. Slower than the circle runs; kept out
// of the unit binary so its cost is visible in the test list.

#include "eignets/harness.hpp"

#include <cmath>
#include <cstdio>

using namespace eignets;

int main() {
    int failures = 0;
    auto check = [&](bool ok, const char* what) {
        std::printf("[%s] sphere: %s\n", ok ? "PASS" : "FAIL", what);
        if (!ok) ++failures;
    };

    experiment_config cfg;
    cfg.manifold = "sphere";
    cfg.target = "zonal:3";
    cfg.p = 2.0;
    cfg.kernel_trunc = 64;
    cfg.sweep = {1, 2, 4, 8};

    const auto s = make_manifold("sphere");
    // certificate scan on the cheaper stages; the rate run below rebuilds the
    // full chain internally
    const auto stages = nested_stages(s, std::vector<int>{1, 2, 4});
    bool uniform = true, certified = true, separated = true;
    for (const auto& st : stages) {
        uniform = uniform && st.cert.uniform;
        certified = certified && st.rule.residual() <= 1e-9 &&
                    st.rule.certified_order() >= 2.0 * s->product_factor() * st.m;
        const double q = min_separation(st.centers);
        separated = separated && q * st.m >= 0.2 && q * st.m <= 2.0;
    }
    check(uniform, "nested stages carry delta <= 2q certificates");
    check(certified, "solved weights certified past order 2Am at 1e-9");
    check(separated, "separation tracks 1/m across the sweep");

    const rate_report rep = rate_experiment(cfg);
    bool decreasing = true;
    for (std::size_t i = 1; i < rep.points.size(); ++i)
        decreasing = decreasing && rep.points[i].second < rep.points[i - 1].second;
    check(decreasing, "zonal target errors decrease along the sweep");
    check(rep.fit.slope <= -1.2 && rep.fit.slope >= -3.0, "L2 rate slope in [-3, -1.2]");
    std::printf("sphere rate slope %.3f\n", rep.fit.slope);

    return failures == 0 ? 0 : 1;
}
