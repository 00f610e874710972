#include "tdgl/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace tdgl {

DiscOracle::DiscOracle(int n_, double b0_, const PhysParams& p) : n(n_), b0(b0_), params(p) {
    if (n < 1) throw std::invalid_argument("disc oracle: winding n must be >= 1");
    if (!(b0 > 0)) throw std::invalid_argument("disc oracle: B0 must be > 0");
    params.validate();
}

double DiscOracle::r_balance() const {
    return std::sqrt(2.0 * n * params.light_c * params.hbar / (params.abs_charge() * b0));
}

double DiscOracle::velocity(double r) const {
    if (!(r > 0)) throw std::invalid_argument("disc oracle: r must be > 0");
    return (params.abs_charge() * b0 * r / (2.0 * params.light_c) - n * params.hbar / r) /
           params.mass;
}

double DiscOracle::force_sum(double r) const {
    if (!(r > 0)) throw std::invalid_argument("disc oracle: r must be > 0");
    const double q2 = params.charge * params.charge;
    const double c2 = params.light_c * params.light_c;
    return (n * n * params.hbar * params.hbar / (r * r) - q2 * b0 * b0 * r * r / (4.0 * c2)) /
           (params.mass * r);
}

double DiscOracle::neg_q_stat(double r) const {
    if (!(r > 0)) throw std::invalid_argument("disc oracle: r must be > 0");
    const double u =
        n * params.hbar / r - params.abs_charge() * b0 * r / (2.0 * params.light_c);
    return 0.5 * u * u / params.mass + params.alpha;
}

RingOracle::RingOracle(double radius_, double flux_ratio_, const PhysParams& p)
    : radius(radius_), flux_ratio(flux_ratio_), params(p) {
    if (!(radius > 0)) throw std::invalid_argument("ring oracle: radius must be > 0");
    params.validate();
}

double RingOracle::lambda(int n) const {
    const double d = n - flux_ratio;
    return -params.alpha / (params.hbar * params.gamma) -
           params.hbar * d * d / (2.0 * params.mass * params.gamma * radius * radius);
}

int RingOracle::dominant_index() const {
    int best = -10;
    for (int n = -10; n <= 10; ++n)
        if (lambda(n) > lambda(best)) best = n;
    return best;
}

bool RingOracle::single_mode() const {
    int growing = 0;
    for (int n = -10; n <= 10; ++n)
        if (lambda(n) > 0) ++growing;
    return growing == 1;
}

RingOracle::ExpectedFields RingOracle::expected_fields(double max_abs2_psi) const {
    if (!single_mode())
        throw std::invalid_argument("ring oracle: configuration is not single-mode");
    const int nd = dominant_index();
    ExpectedFields f;
    f.q_stat_bound = params.beta * max_abs2_psi;
    f.q_dyn = params.hbar * params.gamma * lambda(nd);
    f.q_dep = -2.0 * params.hbar * lambda(nd);
    f.pair_speed = params.hbar / (params.mass * radius) * std::abs(flux_ratio - nd);
    return f;
}

} // namespace tdgl
