#ifndef EIGNETS_HARNESS_HPP
#define EIGNETS_HARNESS_HPP

#include "eignets/eignet.hpp"
#include "eignets/quadrature.hpp"
#include "eignets/spectral.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eignets {

struct experiment_config {
    std::string manifold = "circle";
    std::string target = "abs_sin"; // abs_sin | bandlimited:<L> | power:<s> | zonal:<s>
    double p = std::numeric_limits<double>::infinity();
    double beta = 4.0;
    double r = 1.0;     // smoothness order of the experiment
    double gamma = 1.0; // derivative order (simultaneous approximation)
    std::vector<int> sweep;
    int trials = 50;
    int kernel_trunc = -1; // -1 selects a per-experiment default
    double slack = 0.3;
    std::uint64_t seed = 0;
    bool saturate_budget = true;   // simultaneous: drive the hypothesis budget
    bool discrete_variant = false; // rates: also run the fully discrete route
    int cutoff_smoothness = 4;
    int kstar = 2;
    // optional direct slope band; experiments without a derived bound use it
    double slope_lo = std::numeric_limits<double>::quiet_NaN();
    double slope_hi = std::numeric_limits<double>::quiet_NaN();
};

struct slope_fit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // rms residual of the log-log fit
};

// OLS in log-log coordinates; requires >= 4 positive pairs
slope_fit fit_slope(std::span<const std::pair<double, double>> pairs);

struct rate_report {
    std::string experiment;
    std::vector<std::pair<double, double>> points; // (scale, error-or-ratio)
    std::vector<double> constants;                 // per-point reported constant
    slope_fit fit;
    double bound_slope = std::numeric_limits<double>::quiet_NaN(); // derived slope bound
    bool pass = true;
    std::string note;
};

// Smoothness target with a truncated spectral representation; abs_sin also
// carries its closed form for sup-norm errors.
struct target_function {
    std::string id;
    spectral_vector coeffs;
    bool has_exact = false;
    double (*exact)(const point&) = nullptr;
};

target_function make_target(const std::shared_ptr<const manifold>& m, const std::string& id,
                            double trunc_level, std::uint64_t seed);

// computable K-functional realization ||f - sigma_L f||_p + L^{-r} ||(D*)^r sigma_L f||_p
double kfunc_realization(const spectral_vector& f, double r, double p, double L,
                         const cutoff_function& cf);

// ||f - G_m(f)||_p across the sweep, with the discrete route alongside when
// requested (p = inf); center sets are the nested equispaced chain
rate_report rate_experiment(const experiment_config& cfg);

// max_a ||a||_p / ||sum a_y G(.,y)||_p per separation; slope checked against
// beta - alpha/p'
rate_report coeff_bound_experiment(const experiment_config& cfg);

// max ||(D*)^r Psi||_p / ||Psi||_p per separation; slope checked against r
rate_report bernstein_experiment(const experiment_config& cfg);

// ||(D*)^gamma (f - Psi_m)||_p with Psi_m meeting the m^{-r} hypothesis
// budget; slope checked against gamma - r
rate_report simultaneous_experiment(const experiment_config& cfg);

struct localization_report {
    std::vector<int> levels;
    std::vector<double> fitted_c; // smallest C with |Phi_L| <= C L^a / max(1,(L rho)^S)
    double spread = 0.0;          // max/min of fitted_c
    bool pass = false;            // spread <= 2
};

localization_report localization_experiment(const experiment_config& cfg);

// MZ ratio scan across the sweep of center counts N; the checked degree per
// stage is L = r N for a regime factor r in (0,1), default 1/4.
struct mz_sweep_report {
    std::vector<double> scales;
    std::vector<mz_report> reports;
    bool pass = true;
};

mz_sweep_report mz_experiment(const experiment_config& cfg);

// shared helper: a nested center chain through nested_separate (circle:
// equispaced 8m points; sphere: thinned dyadic product grids) with rules
// certified past order 2Am
struct center_stage {
    int m = 0;
    point_set centers;
    quadrature_rule rule;
    nested_level_certificate cert;
};

std::vector<center_stage> nested_stages(const std::shared_ptr<const manifold>& m,
                                        std::span<const int> sweep);

} // namespace eignets

#endif
