#include "tdgl/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <stdexcept>

#include "tdgl/rng.hpp"

namespace tdgl {

void DepairingConfig::validate() const {
    if (!(tau > 0)) throw std::invalid_argument("depairing: tau must be > 0");
    if (variant == DepairingVariant::FixedCells && fixed_cell_count < 1)
        throw std::invalid_argument("depairing: fixed_cell_count must be >= 1");
}

std::string event_kind_name(EventKind k) {
    switch (k) {
    case EventKind::Create: return "create";
    case EventKind::Destroy: return "destroy";
    case EventKind::Starved: return "starved";
    }
    return "?";
}

namespace {

// Sweep order: plain node order for 1D kinds, boustrophedon rows on Grid2D.
std::vector<std::uint32_t> sweep_order(const Domain& dom) {
    std::vector<std::uint32_t> order(dom.node_count());
    if (dom.kind != DomainKind::Grid2D) {
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<std::uint32_t>(k);
        return order;
    }
    std::size_t w = 0;
    for (int j = 0; j < dom.n2; ++j) {
        if (j % 2 == 0)
            for (int i = 0; i < dom.n1; ++i) order[w++] = static_cast<std::uint32_t>(dom.idx(i, j));
        else
            for (int i = dom.n1 - 1; i >= 0; --i)
                order[w++] = static_cast<std::uint32_t>(dom.idx(i, j));
    }
    return order;
}

std::array<double, 2> node_position(const Domain& dom, std::uint32_t k) {
    if (dom.kind == DomainKind::Grid2D) {
        const int i = static_cast<int>(k) % dom.n1;
        const int j = static_cast<int>(k) / dom.n1;
        return {dom.coord1[i], dom.coord2[j]};
    }
    return {dom.coord1[k], 0.0};
}

double wrap_len(double x, double len) {
    x -= len * std::floor(x / len);
    if (x >= len) x -= len; // guard against x == len after rounding
    return x;
}

// Periodic-aware squared distance between a particle and a point.
double dist2(const Domain& dom, const std::array<double, 2>& a, const std::array<double, 2>& b) {
    if (dom.kind == DomainKind::Ring1D) {
        double d = std::abs(a[0] - b[0]);
        d = std::min(d, dom.len1 - d);
        return d * d;
    }
    if (dom.kind == DomainKind::Disc1D) {
        const double d = a[0] - b[0];
        return d * d;
    }
    double dx = std::abs(a[0] - b[0]);
    if (dom.periodic1()) dx = std::min(dx, dom.len1 - dx);
    double dy = std::abs(a[1] - b[1]);
    if (dom.periodic2()) dy = std::min(dy, dom.len2 - dy);
    return dx * dx + dy * dy;
}

// Volume-weighted centroid of a cell gathered in sweep order. Ring arcs may
// wrap; positions are unwrapped monotonically before averaging.
std::array<double, 2> cell_centroid(const Domain& dom, const std::vector<std::uint32_t>& nodes) {
    double wsum = 0.0;
    std::array<double, 2> acc{0.0, 0.0};
    double prev = 0.0;
    double shift = 0.0;
    for (std::size_t m = 0; m < nodes.size(); ++m) {
        const std::uint32_t k = nodes[m];
        std::array<double, 2> pos = node_position(dom, k);
        if (dom.kind == DomainKind::Ring1D) {
            double x = pos[0] + shift;
            if (m > 0 && x < prev - 0.5 * dom.len1) {
                shift += dom.len1;
                x = pos[0] + shift;
            }
            prev = x;
            pos[0] = x;
        }
        const double w = dom.volume[k];
        acc[0] += w * pos[0];
        acc[1] += w * pos[1];
        wsum += w;
    }
    acc[0] /= wsum;
    acc[1] /= wsum;
    if (dom.kind == DomainKind::Ring1D) acc[0] = wrap_len(acc[0], dom.len1);
    return acc;
}

int node_bin(const Domain& dom, const std::array<double, 2>& pos) {
    auto axis_bin = [](double x, double h, int n, bool periodic, double origin) {
        int i = static_cast<int>(std::lround((x - origin) / h));
        if (periodic) {
            i %= n;
            if (i < 0) i += n;
        } else {
            i = std::clamp(i, 0, n - 1);
        }
        return i;
    };
    if (dom.kind == DomainKind::Grid2D) {
        const int i = axis_bin(pos[0], dom.h1, dom.n1, dom.periodic1(), 0.0);
        const int j = axis_bin(pos[1], dom.h2, dom.n2, dom.periodic2(), 0.0);
        return static_cast<int>(dom.idx(i, j));
    }
    const double origin = dom.kind == DomainKind::Disc1D ? dom.r_min : 0.0;
    return axis_bin(pos[0], dom.h1, dom.n1, dom.periodic1(), origin);
}

} // namespace

PairEnsemble init_ensemble(const CField& psi, const Domain& dom, double sigma,
                           std::uint64_t seed) {
    if (!(sigma > 0)) throw std::invalid_argument("ensemble: sigma must be > 0");
    RField rho = abs2_field(psi);
    std::vector<double> w(rho.size());
    double total = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k) {
        w[k] = rho[k] * dom.volume[k];
        total += w[k];
    }
    const double expected = total / sigma;
    const long long m = std::llround(expected);
    if (m < 100)
        throw std::invalid_argument("ensemble: pair count " + std::to_string(expected) +
                                    " below the statistical floor of 100 (psi too small?)");

    std::vector<double> cdf(w.size());
    double run = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        run += w[k];
        cdf[k] = run;
    }

    PairEnsemble ens;
    ens.sigma = sigma;
    ens.particles.reserve(static_cast<std::size_t>(m));
    Rng rng(seed);
    for (long long i = 0; i < m; ++i) {
        const double u = rng.uniform() * total;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::uint32_t k = static_cast<std::uint32_t>(
            std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1));
        const double u2 = rng.uniform();

        Particle p;
        p.id = ens.next_id++;
        if (dom.kind == DomainKind::Grid2D) {
            const int ix = static_cast<int>(k) % dom.n1;
            const int jy = static_cast<int>(k) / dom.n1;
            const double u3 = rng.uniform();
            auto cell_span = [](double c, double h, int i, int n, bool periodic, double len) {
                double lo = c - 0.5 * h, hi = c + 0.5 * h;
                if (!periodic) {
                    if (i == 0) lo = 0.0;
                    if (i == n - 1) hi = len;
                }
                return std::pair{lo, hi};
            };
            auto [xl, xh] = cell_span(dom.coord1[ix], dom.h1, ix, dom.n1, dom.periodic1(), dom.len1);
            auto [yl, yh] = cell_span(dom.coord2[jy], dom.h2, jy, dom.n2, dom.periodic2(), dom.len2);
            p.pos[0] = xl + u2 * (xh - xl);
            p.pos[1] = yl + u3 * (yh - yl);
            if (dom.periodic1()) p.pos[0] = wrap_len(p.pos[0], dom.len1);
            if (dom.periodic2()) p.pos[1] = wrap_len(p.pos[1], dom.len2);
        } else if (dom.kind == DomainKind::Ring1D) {
            p.pos[0] = wrap_len(dom.coord1[k] - 0.5 * dom.h1 + u2 * dom.h1, dom.len1);
        } else {
            // radial cell: sample linearly in r^2 (area measure)
            double lo = dom.coord1[k] - 0.5 * dom.h1, hi = dom.coord1[k] + 0.5 * dom.h1;
            lo = std::max(lo, dom.r_min);
            hi = std::min(hi, dom.r_min + dom.len1);
            p.pos[0] = std::sqrt(lo * lo + u2 * (hi * hi - lo * lo));
        }
        ens.particles.push_back(p);
    }
    return ens;
}

namespace {

// Inlined linear sampler for the advection hot path; agrees with
// interpolate() at order 2 (asserted by the unit tests).
struct LinearSampler {
    const Domain& dom;
    const VField& v;

    std::array<double, 2> operator()(const std::array<double, 2>& pos) const {
        if (dom.kind == DomainKind::Grid2D) {
            const auto [i0, i1, ax] = axis(pos[0], dom.h1, dom.n1, dom.periodic1(), 0.0);
            const auto [j0, j1, ay] = axis(pos[1], dom.h2, dom.n2, dom.periodic2(), 0.0);
            std::array<double, 2> out;
            for (int c = 0; c < 2; ++c) {
                const RField& f = v[c];
                const double f00 = f[dom.idx(i0, j0)], f10 = f[dom.idx(i1, j0)];
                const double f01 = f[dom.idx(i0, j1)], f11 = f[dom.idx(i1, j1)];
                out[c] = (1 - ay) * ((1 - ax) * f00 + ax * f10) +
                         ay * ((1 - ax) * f01 + ax * f11);
            }
            return out;
        }
        const double origin = dom.kind == DomainKind::Disc1D ? dom.r_min : 0.0;
        const auto [i0, i1, a] = axis(pos[0], dom.h1, dom.n1, dom.periodic1(), origin);
        std::array<double, 2> out{(1 - a) * v[0][i0] + a * v[0][i1], 0.0};
        if (v.ncomp == 2) out[1] = (1 - a) * v[1][i0] + a * v[1][i1];
        return out;
    }

  private:
    static std::tuple<int, int, double> axis(double x, double h, int n, bool periodic,
                                             double origin) {
        double u = (x - origin) / h;
        if (periodic) {
            if (u < 0.0 || u >= n) u -= std::floor(u / n) * n; // rare; callers pre-wrap
            int i = static_cast<int>(u);
            if (i >= n) i = n - 1;
            const int j = i + 1 == n ? 0 : i + 1;
            return {i, j, u - i};
        }
        u = std::clamp(u, 0.0, static_cast<double>(n - 1));
        const int i = std::min(static_cast<int>(u), n - 2);
        return {i, i + 1, u - i};
    }
};

} // namespace

void advect(PairEnsemble& ens, const VField& v, const Mask& mask, const Domain& dom,
            double dt, const StencilConfig& st) {
    const double len1 = dom.len1;
    const bool per1 = dom.periodic1();
    const double origin1 = dom.kind == DomainKind::Disc1D ? dom.r_min : 0.0;
    const bool fast = st.order == 2;
    const LinearSampler sampler{dom, v};

    bool any_masked = false;
    for (std::uint8_t m : mask)
        if (m) { any_masked = true; break; }

    const std::int64_t n = static_cast<std::int64_t>(ens.particles.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t ip = 0; ip < n; ++ip) {
        Particle& p = ens.particles[static_cast<std::size_t>(ip)];
        if (p.frozen) continue;
        if (any_masked && mask[static_cast<std::size_t>(node_bin(dom, p.pos))]) {
            p.frozen = true;
            continue;
        }
        // midpoint rule through the frozen-in-time field; single-branch wraps
        // suffice since one step moves a particle much less than the domain
        auto wrap_near = [](double x, double len) {
            if (x >= len) x -= len;
            else if (x < 0) x += len;
            return x >= len || x < 0 ? wrap_len(x, len) : x;
        };
        std::array<double, 2> v0 = fast ? sampler(p.pos) : interpolate_vec(v, dom, p.pos, st);
        std::array<double, 2> mid{p.pos[0] + 0.5 * dt * v0[0], p.pos[1] + 0.5 * dt * v0[1]};
        if (per1) mid[0] = wrap_near(mid[0], len1);
        else mid[0] = std::clamp(mid[0], origin1, origin1 + len1);
        if (dom.kind == DomainKind::Grid2D) {
            if (dom.periodic2()) mid[1] = wrap_near(mid[1], dom.len2);
            else mid[1] = std::clamp(mid[1], 0.0, dom.len2);
        }
        std::array<double, 2> v1 = fast ? sampler(mid) : interpolate_vec(v, dom, mid, st);
        p.pos[0] += dt * v1[0];
        p.pos[1] += dt * v1[1];
        if (per1) p.pos[0] = wrap_near(p.pos[0], len1);
        else p.pos[0] = std::clamp(p.pos[0], origin1, origin1 + len1);
        if (dom.kind == DomainKind::Grid2D) {
            if (dom.periodic2()) p.pos[1] = wrap_near(p.pos[1], dom.len2);
            else p.pos[1] = std::clamp(p.pos[1], 0.0, dom.len2);
        }
    }
}

CellPartition build_cells(const RField& q_dep_density, const Domain& dom, double tau,
                          double sigma, double hbar) {
    if (!(tau > 0) || !(sigma > 0)) throw std::invalid_argument("build_cells: tau, sigma > 0");
    CellPartition part;
    part.threshold = hbar * sigma / tau;

    const std::vector<std::uint32_t> order = sweep_order(dom);
    const std::size_t n = order.size();
    auto sgn = [&](std::size_t w) {
        const double v = q_dep_density[order[w]];
        return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    };

    // Maximal contiguous uniform-sign regions in sweep order; zeros extend the
    // current region and a strict sign flip closes it. On the ring the scan
    // starts at the first sign flip so regions stay maximal across the seam.
    std::size_t start = 0;
    if (dom.kind == DomainKind::Ring1D) {
        int prev = 0;
        for (std::size_t w = n; w-- > 0;)
            if (int s = sgn(w); s != 0) { prev = s; break; }
        for (std::size_t w = 0; w < n; ++w) {
            if (int s = sgn(w); s != 0) {
                if (prev != 0 && s != prev) { start = w; break; }
                prev = s;
            }
        }
    }

    std::vector<std::vector<std::uint32_t>> regions;
    {
        std::vector<std::uint32_t> cur;
        int sign = 0;
        for (std::size_t step = 0; step < n; ++step) {
            const std::size_t w = (start + step) % n;
            const int s = sgn(w);
            if (s != 0 && sign != 0 && s != sign) {
                regions.push_back(std::move(cur));
                cur = {};
                sign = 0;
            }
            cur.push_back(order[w]);
            if (s != 0) sign = s;
        }
        regions.push_back(std::move(cur));
    }

    // Sweep each region accumulating |q_dep| rho dV; a cell closes at every
    // threshold crossing of the running total, so a region of total n T + r
    // yields exactly n cells (budget exact at any node load) and discards the
    // sub-threshold remainder r as marginal. A node whose content spans
    // several thresholds spawns one cell per crossing.
    const double T = part.threshold;
    for (const auto& region : regions) {
        double acc = 0.0;        // running total since the last closed cell
        double cell_sum = 0.0;   // content attributed to the open cell
        int sign = 0;
        std::vector<std::uint32_t> members;
        for (const std::uint32_t k : region) {
            const double c = std::abs(q_dep_density[k] * dom.volume[k]);
            part.max_node_load = std::max(part.max_node_load, c / T);
            if (q_dep_density[k] != 0.0) sign = q_dep_density[k] > 0.0 ? 1 : -1;
            acc += c;
            cell_sum += c;
            members.push_back(k);
            while (acc >= T && sign != 0) {
                DepairingCell cell;
                cell.center = cell_centroid(dom, members);
                cell.sign = sign;
                // the closing node's surplus carries into the next cell
                const double surplus = acc - T;
                cell.integral = sign * (cell_sum - surplus);
                cell.nodes = std::move(members);
                part.cells.push_back(std::move(cell));
                members = {};
                acc -= T;
                cell_sum = surplus;
                if (acc >= T) members.push_back(k); // multi-threshold node
            }
        }
        part.marginal_abs += acc;
    }
    return part;
}

namespace {

// Sample-wide nearest particle to a point; ties resolve to the lowest id.
std::ptrdiff_t nearest_particle(const PairEnsemble& ens, const Domain& dom,
                                const std::array<double, 2>& center) {
    std::ptrdiff_t best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    std::uint64_t best_id = 0;
    for (std::size_t i = 0; i < ens.particles.size(); ++i) {
        const double d = dist2(dom, ens.particles[i].pos, center);
        if (d < best_d || (d == best_d && ens.particles[i].id < best_id)) {
            best = static_cast<std::ptrdiff_t>(i);
            best_d = d;
            best_id = ens.particles[i].id;
        }
    }
    return best;
}

void do_create(PairEnsemble& ens, const std::array<double, 2>& center, std::int64_t cell_id,
               double t) {
    Particle p;
    p.id = ens.next_id++;
    p.pos = center;
    ens.particles.push_back(p);
    ens.events.push_back({t, EventKind::Create, cell_id, center});
}

void do_destroy(PairEnsemble& ens, const Domain& dom, const std::array<double, 2>& center,
                std::int64_t cell_id, double t) {
    const std::ptrdiff_t i = nearest_particle(ens, dom, center);
    if (i < 0) {
        ens.events.push_back({t, EventKind::Starved, cell_id, center});
        return;
    }
    const std::array<double, 2> pos = ens.particles[static_cast<std::size_t>(i)].pos;
    ens.particles.erase(ens.particles.begin() + i);
    ens.events.push_back({t, EventKind::Destroy, cell_id, pos});
}

} // namespace

void apply_events(PairEnsemble& ens, const CellPartition& part, const Domain& dom, double t) {
    for (std::size_t c = 0; c < part.cells.size(); ++c) {
        const DepairingCell& cell = part.cells[c];
        if (cell.sign < 0)
            do_create(ens, cell.center, static_cast<std::int64_t>(c), t);
        else if (cell.sign > 0)
            do_destroy(ens, dom, cell.center, static_cast<std::int64_t>(c), t);
    }
}

FixedCellAccumulator make_fixed_cells(const Domain& dom, int cell_count) {
    if (cell_count < 1) throw std::invalid_argument("fixed cells: count must be >= 1");
    const std::vector<std::uint32_t> order = sweep_order(dom);
    const std::size_t n = order.size();
    if (static_cast<std::size_t>(cell_count) > n)
        throw std::invalid_argument("fixed cells: more cells than nodes");

    FixedCellAccumulator fc;
    fc.cell_nodes.resize(cell_count);
    for (std::size_t w = 0; w < n; ++w) {
        const std::size_t c = w * cell_count / n; // equal index blocks
        fc.cell_nodes[c].push_back(order[w]);
    }
    fc.centers.resize(cell_count);
    fc.acc.assign(cell_count, 0.0);
    for (int c = 0; c < cell_count; ++c) fc.centers[c] = cell_centroid(dom, fc.cell_nodes[c]);
    return fc;
}

std::vector<PairEvent> fixed_cell_accumulate(FixedCellAccumulator& fc,
                                             const RField& q_dep_density, const Domain& dom,
                                             double dt, double sigma, double hbar, double t) {
    std::vector<PairEvent> events;
    const double threshold = hbar * sigma;
    for (std::size_t c = 0; c < fc.cell_nodes.size(); ++c) {
        double flux = 0.0;
        for (std::uint32_t k : fc.cell_nodes[c]) flux += q_dep_density[k] * dom.volume[k];
        fc.acc[c] += flux * dt;
        while (fc.acc[c] <= -threshold) {
            fc.acc[c] += threshold;
            events.push_back({t, EventKind::Create, static_cast<std::int64_t>(c), fc.centers[c]});
        }
        while (fc.acc[c] >= threshold) {
            fc.acc[c] -= threshold;
            events.push_back({t, EventKind::Destroy, static_cast<std::int64_t>(c), fc.centers[c]});
        }
    }
    return events;
}

void apply_event_list(PairEnsemble& ens, const std::vector<PairEvent>& events,
                      const Domain& dom) {
    for (const PairEvent& e : events) {
        if (e.kind == EventKind::Create)
            do_create(ens, e.pos, e.cell_id, e.t);
        else if (e.kind == EventKind::Destroy)
            do_destroy(ens, dom, e.pos, e.cell_id, e.t);
    }
}

DensityReport density_tracking_report(const PairEnsemble& ens, const CField& psi,
                                      const Domain& dom) {
    DensityReport rep;
    rep.count = ens.particles.size();
    RField rho = abs2_field(psi);

    std::vector<double> counts(dom.node_count(), 0.0);
    for (const Particle& p : ens.particles)
        counts[static_cast<std::size_t>(node_bin(dom, p.pos))] += 1.0;

    double total = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k) total += rho[k] * dom.volume[k];
    rep.expected_count = total / ens.sigma;

    double l2_num = 0.0, l2_den = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k) {
        const double expected = rho[k] * dom.volume[k] / ens.sigma; // particles in bin
        if (expected <= 0.0) continue;
        const double dev = counts[k] - expected;
        rep.sup_rel_dev = std::max(rep.sup_rel_dev, std::abs(dev) / expected);
        rep.z_sup = std::max(rep.z_sup, std::abs(dev) / std::sqrt(expected));
        l2_num += dev * dev;
        l2_den += expected * expected;
    }
    rep.l2_rel_dev = l2_den > 0 ? std::sqrt(l2_num / l2_den) : 0.0;
    return rep;
}

} // namespace tdgl
