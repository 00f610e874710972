#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tdgl/ops.hpp"
#include "tdgl/state.hpp"

namespace tdgl {

enum class EventKind { Create, Destroy, Starved };

struct PairEvent {
    double t = 0.0;
    EventKind kind = EventKind::Create;
    std::int64_t cell_id = -1;
    std::array<double, 2> pos{0.0, 0.0};
};

struct Particle {
    std::uint64_t id = 0;
    std::array<double, 2> pos{0.0, 0.0};
    bool frozen = false; // drifted into a floored (|psi| ~ 0) region
};

/// Discrete pair ensemble. sigma = physical pairs per computational particle,
/// fixed at init; every hbar threshold in the event models is scaled by sigma,
/// so sigma = 1 reproduces the unscaled model.
struct PairEnsemble {
    std::vector<Particle> particles;
    double sigma = 1.0;
    std::uint64_t next_id = 0;
    std::vector<PairEvent> events;

    std::size_t count() const { return particles.size(); }
};

enum class DepairingVariant { IntervalCells, FixedCells };

struct DepairingConfig {
    double tau = 1e-2;            // check interval
    DepairingVariant variant = DepairingVariant::IntervalCells;
    int fixed_cell_count = 16;    // FixedCells geometry: equal blocks in sweep order
    std::uint64_t seed = 1;       // initial sampling only

    void validate() const;
};

struct DepairingCell {
    std::vector<std::uint32_t> nodes; // member node indices, sweep order
    double integral = 0.0;            // signed integral of q_dep |psi|^2 dV
    std::array<double, 2> center{0.0, 0.0};
    int sign = 0;
};

/// Deterministic partition of the sample into cells whose signed integrals hit
/// +-(hbar sigma / tau) within one node's contribution. The sweep walks maximal
/// contiguous uniform-sign regions in node order (boustrophedon rows on
/// Grid2D); leftovers per region form the marginal remainder, discarded each
/// interval.
struct CellPartition {
    std::vector<DepairingCell> cells;
    double threshold = 0.0;      // hbar * sigma / tau
    double marginal_abs = 0.0;   // |integral| left out of the cells
    double max_node_load = 0.0;  // largest single-node |contribution| / threshold
};

/// Draws round(integral(|psi|^2 dV) / sigma) particles from the normalized
/// |psi|^2 distribution. Deterministic per seed. Throws when the count falls
/// below the statistical floor of 100.
PairEnsemble init_ensemble(const CField& psi, const Domain& dom, double sigma,
                           std::uint64_t seed);

/// One RK2 (midpoint) advection step through the interpolated velocity field.
/// Particles whose nearest node is floored freeze in place and stay flagged.
void advect(PairEnsemble& ens, const VField& v, const Mask& mask, const Domain& dom,
            double dt, const StencilConfig& st);

CellPartition build_cells(const RField& q_dep_density, const Domain& dom, double tau,
                          double sigma, double hbar);

/// One creation per negative cell (at its center), one destruction per
/// positive cell (sample-wide nearest particle to the center; ties break to
/// the lowest id; an empty sample logs a starved event instead).
void apply_events(PairEnsemble& ens, const CellPartition& part, const Domain& dom, double t);

/// Fixed-position cells accumulating the double integral of q_dep |psi|^2
/// dV dt; each +-(hbar sigma) crossing emits one event and keeps the remainder.
struct FixedCellAccumulator {
    std::vector<std::vector<std::uint32_t>> cell_nodes;
    std::vector<std::array<double, 2>> centers;
    std::vector<double> acc;
};

FixedCellAccumulator make_fixed_cells(const Domain& dom, int cell_count);

std::vector<PairEvent> fixed_cell_accumulate(FixedCellAccumulator& fc,
                                             const RField& q_dep_density, const Domain& dom,
                                             double dt, double sigma, double hbar, double t);

/// Applies an event list produced by the fixed-cell model to the ensemble.
void apply_event_list(PairEnsemble& ens, const std::vector<PairEvent>& events,
                      const Domain& dom);

struct DensityReport {
    double sup_rel_dev = 0.0;     // max_j |rho_particles - rho_psi| / rho_psi
    double l2_rel_dev = 0.0;
    double z_sup = 0.0;           // max_j |count_j - expected_j| / sqrt(expected_j)
    double expected_count = 0.0;  // integral |psi|^2 dV / sigma
    std::size_t count = 0;
};

/// Per-node histogram of the ensemble (scaled by sigma) against |psi|^2.
DensityReport density_tracking_report(const PairEnsemble& ens, const CField& psi,
                                      const Domain& dom);

std::string event_kind_name(EventKind k);

} // namespace tdgl
