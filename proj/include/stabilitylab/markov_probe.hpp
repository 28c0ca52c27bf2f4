#pragma once
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "stabilitylab/rng.hpp"

// Empirical probes of the resampling machinery: the Metropolis-Hastings
// step with Gaussian proposal, the acceptance-defect estimate, and the
// Euler-discretized Langevin (Kolmogorov) step.

namespace stab::markov {

struct DensityModel {
    std::string name;
    std::size_t dim = 1;
    std::function<double(const std::vector<double>&)> density;
    std::function<void(Rng&, std::vector<double>&)> sample;
    // Langevin data, present when has_langevin: potential rho with
    // density proportional to exp(-rho), and its gradient
    bool has_langevin = false;
    std::function<double(const std::vector<double>&)> potential;
    std::function<void(const std::vector<double>&, std::vector<double>&)>
        grad_potential;
};

DensityModel gaussian_model(std::size_t dim);
DensityModel uniform_box_model(std::size_t dim, double a, double b);
DensityModel exponential_model(double rate);
DensityModel gamma_model(double shape, double scale); // shape >= 1
DensityModel beta_model(double a, double b);          // a, b >= 1

// One MH step: x + tW accepted when U <= f(x + tW)/f(x); a ratio >= 1
// always accepts. Throws ZeroDensityAtStart when f(x) = 0.
std::vector<double> mh_step(const std::vector<double>& x, double t,
                            const DensityModel& f, Rng& rng);

// Monte Carlo estimate of E[ ||W||^p (1 - f(X + sW)/f(X))_+ ].
double acceptance_defect(const DensityModel& f, double s, double p,
                         std::size_t samples, Rng& rng);

// `steps` Euler-Maruyama steps: y <- y - grad_rho(y) dt + sqrt(2 dt) Z.
std::vector<double> langevin_step(const std::vector<double>& y, double dt,
                                  std::size_t steps, const DensityModel& model,
                                  Rng& rng);

} // namespace stab::markov
