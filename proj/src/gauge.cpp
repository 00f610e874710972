#include "tdgl/gauge.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tdgl {

namespace {

// C^1 smoothstep ramp value and time derivative.
struct RampEval {
    double s = 1.0;
    double ds_dt = 0.0;
};

RampEval eval_ramp(const std::optional<GaugeRamp>& ramp, double t) {
    if (!ramp) return {};
    const double t0 = ramp->t0, t1 = ramp->t1;
    if (t <= t0) return {0.0, 0.0};
    if (t >= t1) return {1.0, 0.0};
    const double u = (t - t0) / (t1 - t0);
    return {u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u) / (t1 - t0)};
}

} // namespace

GaugeSample sample_gauge(const GaugeSchedule& g, const Domain& dom, const PhysParams& p, double t) {
    GaugeSample out;
    out.A = VField::zeros(dom);
    out.E = VField::zeros(dom);
    out.B.assign(dom.node_count(), 0.0);

    const RampEval ramp = eval_ramp(g.ramp, t);
    // E = -(1/c) dA/dt = -(ds/dt / c) * A_base
    const double efac = -ramp.ds_dt / p.light_c;

    switch (g.kind) {
    case GaugeKind::Zero:
        return out;

    case GaugeKind::UniformFieldDisc: {
        if (dom.kind == DomainKind::Disc1D) {
            // A = (B0 r / 2) theta_hat, components (r, theta)
            for (int i = 0; i < dom.n1; ++i) {
                const double a = 0.5 * g.b0 * dom.r(i);
                out.A[1][i] = ramp.s * a;
                out.E[1][i] = efac * a;
                out.B[i] = ramp.s * g.b0;
            }
            return out;
        }
        if (dom.kind == DomainKind::Grid2D) {
            // symmetric gauge about the rectangle center
            const double xc = 0.5 * dom.len1, yc = 0.5 * dom.len2;
            for (int j = 0; j < dom.n2; ++j)
                for (int i = 0; i < dom.n1; ++i) {
                    const std::size_t k = dom.idx(i, j);
                    const double ax = -0.5 * g.b0 * (dom.coord2[j] - yc);
                    const double ay = 0.5 * g.b0 * (dom.coord1[i] - xc);
                    out.A[0][k] = ramp.s * ax;
                    out.A[1][k] = ramp.s * ay;
                    out.E[0][k] = efac * ax;
                    out.E[1][k] = efac * ay;
                    out.B[k] = ramp.s * g.b0;
                }
            return out;
        }
        throw std::invalid_argument("gauge: UniformFieldDisc needs Disc1D or Grid2D");
    }

    case GaugeKind::RingFlux: {
        if (dom.kind != DomainKind::Ring1D)
            throw std::invalid_argument("gauge: RingFlux needs Ring1D");
        // uniform tangential A with loop integral Phi = flux_ratio * Phi_0;
        // B at the wire itself is zero (flux threads the hole).
        const double a = g.flux_ratio * p.flux_quantum() / dom.len1;
        for (int i = 0; i < dom.n1; ++i) {
            out.A[0][i] = ramp.s * a;
            out.E[0][i] = efac * a;
        }
        return out;
    }

    case GaugeKind::UniformFieldLandau: {
        if (dom.kind != DomainKind::Grid2D)
            throw std::invalid_argument("gauge: UniformFieldLandau needs Grid2D");
        // A = -B0 (y - y_c) x_hat: periodic in x, A.n = 0 on y walls.
        const double yc = 0.5 * dom.len2;
        for (int j = 0; j < dom.n2; ++j)
            for (int i = 0; i < dom.n1; ++i) {
                const std::size_t k = dom.idx(i, j);
                const double ax = -g.b0 * (dom.coord2[j] - yc);
                out.A[0][k] = ramp.s * ax;
                out.E[0][k] = efac * ax;
                out.B[k] = ramp.s * g.b0;
            }
        return out;
    }
    }
    return out;
}

std::string GaugeSchedule::describe() const {
    std::ostringstream os;
    switch (kind) {
    case GaugeKind::Zero: os << "Zero"; break;
    case GaugeKind::UniformFieldDisc: os << "UniformFieldDisc{B0=" << b0 << "}"; break;
    case GaugeKind::RingFlux: os << "RingFlux{Phi/Phi0=" << flux_ratio << "}"; break;
    case GaugeKind::UniformFieldLandau: os << "UniformFieldLandau{B0=" << b0 << "}"; break;
    }
    if (ramp) os << " ramp[" << ramp->t0 << "," << ramp->t1 << "]";
    return os.str();
}

} // namespace tdgl
