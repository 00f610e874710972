#pragma once

#include "tdgl/field.hpp"
#include "tdgl/gauge.hpp"

namespace tdgl {

/// Order parameter plus gauge fields on one domain at one instant.
/// psi holds |psi| e^{i phi} directly; the phase is never stored unwrapped.
/// A, E, B are always refreshed together from the schedule.
struct FieldState {
    double t = 0.0;
    CField psi;
    VField A;
    VField E;
    RField B;
};

inline FieldState make_state(const Domain& dom, const GaugeSchedule& g,
                             const PhysParams& p, double t = 0.0) {
    FieldState s;
    s.t = t;
    s.psi.assign(dom.node_count(), Complex{0.0, 0.0});
    GaugeSample gs = sample_gauge(g, dom, p, t);
    s.A = std::move(gs.A);
    s.E = std::move(gs.E);
    s.B = std::move(gs.B);
    return s;
}

inline void refresh_gauge(FieldState& s, const Domain& dom, const GaugeSchedule& g,
                          const PhysParams& p, double t) {
    GaugeSample gs = sample_gauge(g, dom, p, t);
    s.A = std::move(gs.A);
    s.E = std::move(gs.E);
    s.B = std::move(gs.B);
    s.t = t;
}

} // namespace tdgl
