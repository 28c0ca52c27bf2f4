#include "stabilitylab/markov_probe.hpp"

#include <cmath>

#include "stabilitylab/errors.hpp"

namespace stab::markov {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace

DensityModel gaussian_model(std::size_t dim) {
    DensityModel m;
    m.name = "gaussian";
    m.dim = dim;
    m.density = [dim](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::exp(-0.5 * s) / std::pow(kTwoPi, static_cast<double>(dim) / 2.0);
    };
    m.sample = [](Rng& rng, std::vector<double>& x) {
        for (double& v : x) v = rng.gaussian();
    };
    m.has_langevin = true;
    m.potential = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return 0.5 * s;
    };
    m.grad_potential = [](const std::vector<double>& x,
                          std::vector<double>& g) { g = x; };
    return m;
}

DensityModel uniform_box_model(std::size_t dim, double a, double b) {
    DensityModel m;
    m.name = "uniform";
    m.dim = dim;
    const double vol = std::pow(b - a, static_cast<double>(dim));
    m.density = [a, b, vol](const std::vector<double>& x) {
        for (double v : x)
            if (v < a || v > b) return 0.0;
        return 1.0 / vol;
    };
    m.sample = [a, b](Rng& rng, std::vector<double>& x) {
        for (double& v : x) v = rng.uniform(a, b);
    };
    return m;
}

DensityModel exponential_model(double rate) {
    DensityModel m;
    m.name = "exponential";
    m.dim = 1;
    m.density = [rate](const std::vector<double>& x) {
        return x[0] < 0.0 ? 0.0 : rate * std::exp(-rate * x[0]);
    };
    m.sample = [rate](Rng& rng, std::vector<double>& x) {
        x[0] = rng.exponential(rate);
    };
    return m;
}

DensityModel gamma_model(double shape, double scale) {
    if (shape < 1.0) throw UnsupportedLaw("gamma_model requires shape >= 1");
    DensityModel m;
    m.name = "gamma";
    m.dim = 1;
    const double lognorm = std::lgamma(shape) + shape * std::log(scale);
    m.density = [shape, scale, lognorm](const std::vector<double>& x) {
        if (x[0] <= 0.0) return 0.0;
        return std::exp((shape - 1.0) * std::log(x[0]) - x[0] / scale - lognorm);
    };
    m.sample = [shape, scale](Rng& rng, std::vector<double>& x) {
        x[0] = rng.gamma(shape, scale);
    };
    return m;
}

DensityModel beta_model(double a, double b) {
    if (a < 1.0 || b < 1.0) throw UnsupportedLaw("beta_model requires a, b >= 1");
    DensityModel m;
    m.name = "beta";
    m.dim = 1;
    const double lognorm =
        std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    m.density = [a, b, lognorm](const std::vector<double>& x) {
        if (x[0] <= 0.0 || x[0] >= 1.0) return 0.0;
        return std::exp((a - 1.0) * std::log(x[0]) +
                        (b - 1.0) * std::log1p(-x[0]) - lognorm);
    };
    m.sample = [a, b](Rng& rng, std::vector<double>& x) {
        x[0] = rng.beta(a, b);
    };
    return m;
}

std::vector<double> mh_step(const std::vector<double>& x, double t,
                            const DensityModel& f, Rng& rng) {
    const double fx = f.density(x);
    if (fx <= 0.0) throw ZeroDensityAtStart("mh_step started outside the support");
    std::vector<double> proposal(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        proposal[i] = x[i] + t * rng.gaussian();
    const double ratio = f.density(proposal) / fx;
    const double u = rng.u01();
    return u <= ratio ? proposal : x;
}

double acceptance_defect(const DensityModel& f, double s, double p,
                         std::size_t samples, Rng& rng) {
    std::vector<double> x(f.dim), y(f.dim);
    double acc = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        f.sample(rng, x);
        double w2 = 0.0;
        for (std::size_t i = 0; i < f.dim; ++i) {
            const double w = rng.gaussian();
            y[i] = x[i] + s * w;
            w2 += w * w;
        }
        const double ratio = f.density(y) / f.density(x);
        const double defect = ratio < 1.0 ? 1.0 - ratio : 0.0;
        acc += (p == 0.0 ? 1.0 : std::pow(w2, p / 2.0)) * defect;
    }
    return acc / static_cast<double>(samples);
}

std::vector<double> langevin_step(const std::vector<double>& y, double dt,
                                  std::size_t steps, const DensityModel& model,
                                  Rng& rng) {
    if (!model.has_langevin)
        throw UnsupportedLaw("model lacks a Langevin potential");
    std::vector<double> state = y;
    std::vector<double> grad(state.size());
    const double noise = std::sqrt(2.0 * dt);
    for (std::size_t k = 0; k < steps; ++k) {
        model.grad_potential(state, grad);
        for (std::size_t i = 0; i < state.size(); ++i)
            state[i] += -grad[i] * dt + noise * rng.gaussian();
    }
    return state;
}

} // namespace stab::markov
