#include "tdgl/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tdgl {

void StencilConfig::validate() const {
    if (order != 2 && order != 4)
        throw std::invalid_argument("stencil: order must be 2 or 4");
    if (!(epsilon_rho > 0.0) || epsilon_rho > 1e-6)
        throw std::invalid_argument("stencil: epsilon_rho must be in (0, 1e-6]");
}

namespace {

struct LineSpec {
    std::size_t base;
    std::size_t stride;
    int count;
    double h;
    AxisBc bc;
};

// Applies fn(line) to every grid line along `axis`.
template <typename Fn>
void for_each_line(const Domain& dom, int axis, Fn&& fn) {
    if (axis == 0) {
        for (int j = 0; j < dom.n2; ++j)
            fn(LineSpec{static_cast<std::size_t>(j) * dom.n1, 1, dom.n1, dom.h1, dom.bc1});
    } else {
        for (int i = 0; i < dom.n1; ++i)
            fn(LineSpec{static_cast<std::size_t>(i), static_cast<std::size_t>(dom.n1), dom.n2,
                        dom.h2, dom.bc2});
    }
}

// First/second derivative along one line. EdgeMode::Mirror imposes an even
// reflection at zero-current walls (the discrete Neumann condition used by the
// solver); the default one-sided stencils evaluate the field as given.
enum class Edge { OneSided, Mirror };

template <typename T>
void d1_line(const T* f, T* out, const LineSpec& ln, int order, Edge edge) {
    const int n = ln.count;
    const double h = ln.h;
    auto at = [&](int k) -> T { return f[ln.base + static_cast<std::size_t>(k) * ln.stride]; };
    auto put = [&](int k, T v) { out[ln.base + static_cast<std::size_t>(k) * ln.stride] = v; };

    if (ln.bc == AxisBc::Periodic) {
        auto wrap = [&](int k) { return at(((k % n) + n) % n); };
        if (order == 2) {
            for (int k = 0; k < n; ++k) put(k, (wrap(k + 1) - wrap(k - 1)) / (2.0 * h));
        } else {
            for (int k = 0; k < n; ++k)
                put(k, (wrap(k - 2) - 8.0 * wrap(k - 1) + 8.0 * wrap(k + 1) - wrap(k + 2)) /
                           (12.0 * h));
        }
        return;
    }

    // zero-current axis
    auto ref = [&](int k) -> T { // mirror reflection about the walls
        if (k < 0) return at(-k);
        if (k >= n) return at(2 * (n - 1) - k);
        return at(k);
    };
    if (order == 2) {
        for (int k = 1; k + 1 < n; ++k) put(k, (at(k + 1) - at(k - 1)) / (2.0 * h));
        if (edge == Edge::Mirror) {
            put(0, (ref(1) - ref(-1)) / (2.0 * h));
            put(n - 1, (ref(n) - ref(n - 2)) / (2.0 * h));
        } else {
            put(0, (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h));
            put(n - 1, (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h));
        }
    } else {
        for (int k = 2; k + 2 < n; ++k)
            put(k, (at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) / (12.0 * h));
        if (edge == Edge::Mirror) {
            for (int k : {0, 1, n - 2, n - 1})
                put(k, (ref(k - 2) - 8.0 * ref(k - 1) + 8.0 * ref(k + 1) - ref(k + 2)) /
                           (12.0 * h));
        } else {
            put(0, (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) /
                       (12.0 * h));
            put(1, (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) /
                       (12.0 * h));
            put(n - 2, (3.0 * at(n - 1) + 10.0 * at(n - 2) - 18.0 * at(n - 3) + 6.0 * at(n - 4) -
                        at(n - 5)) /
                           (12.0 * h));
            put(n - 1, (25.0 * at(n - 1) - 48.0 * at(n - 2) + 36.0 * at(n - 3) -
                        16.0 * at(n - 4) + 3.0 * at(n - 5)) /
                           (12.0 * h));
        }
    }
}

template <typename T>
void d2_line(const T* f, T* out, const LineSpec& ln, int order, Edge edge) {
    const int n = ln.count;
    const double h2 = ln.h * ln.h;
    auto at = [&](int k) -> T { return f[ln.base + static_cast<std::size_t>(k) * ln.stride]; };
    auto put = [&](int k, T v) { out[ln.base + static_cast<std::size_t>(k) * ln.stride] = v; };

    if (ln.bc == AxisBc::Periodic) {
        auto wrap = [&](int k) { return at(((k % n) + n) % n); };
        if (order == 2) {
            for (int k = 0; k < n; ++k)
                put(k, (wrap(k + 1) - 2.0 * wrap(k) + wrap(k - 1)) / h2);
        } else {
            for (int k = 0; k < n; ++k)
                put(k, (-wrap(k - 2) + 16.0 * wrap(k - 1) - 30.0 * wrap(k) + 16.0 * wrap(k + 1) -
                        wrap(k + 2)) /
                           (12.0 * h2));
        }
        return;
    }

    auto ref = [&](int k) -> T {
        if (k < 0) return at(-k);
        if (k >= n) return at(2 * (n - 1) - k);
        return at(k);
    };
    if (order == 2) {
        for (int k = 1; k + 1 < n; ++k) put(k, (at(k + 1) - 2.0 * at(k) + at(k - 1)) / h2);
        if (edge == Edge::Mirror) {
            put(0, (ref(1) - 2.0 * ref(0) + ref(-1)) / h2);
            put(n - 1, (ref(n) - 2.0 * ref(n - 1) + ref(n - 2)) / h2);
        } else {
            put(0, (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / h2);
            put(n - 1, (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) / h2);
        }
    } else {
        for (int k = 2; k + 2 < n; ++k)
            put(k, (-at(k - 2) + 16.0 * at(k - 1) - 30.0 * at(k) + 16.0 * at(k + 1) - at(k + 2)) /
                       (12.0 * h2));
        if (edge == Edge::Mirror) {
            for (int k : {0, 1, n - 2, n - 1})
                put(k, (-ref(k - 2) + 16.0 * ref(k - 1) - 30.0 * ref(k) + 16.0 * ref(k + 1) -
                        ref(k + 2)) /
                           (12.0 * h2));
        } else {
            put(0, (45.0 * at(0) - 154.0 * at(1) + 214.0 * at(2) - 156.0 * at(3) + 61.0 * at(4) -
                    10.0 * at(5)) /
                       (12.0 * h2));
            put(1, (10.0 * at(0) - 15.0 * at(1) - 4.0 * at(2) + 14.0 * at(3) - 6.0 * at(4) +
                    at(5)) /
                       (12.0 * h2));
            put(n - 2, (10.0 * at(n - 1) - 15.0 * at(n - 2) - 4.0 * at(n - 3) + 14.0 * at(n - 4) -
                        6.0 * at(n - 5) + at(n - 6)) /
                           (12.0 * h2));
            put(n - 1, (45.0 * at(n - 1) - 154.0 * at(n - 2) + 214.0 * at(n - 3) -
                        156.0 * at(n - 4) + 61.0 * at(n - 5) - 10.0 * at(n - 6)) /
                           (12.0 * h2));
        }
    }
}

Edge edge_of(const StencilConfig& st) {
    return st.mirror_edges ? Edge::Mirror : Edge::OneSided;
}

template <typename T>
std::vector<T> d_axis(const std::vector<T>& f, const Domain& dom, int axis,
                      const StencilConfig& st, bool second) {
    std::vector<T> out(f.size());
    const Edge e = edge_of(st);
    for_each_line(dom, axis, [&](const LineSpec& ln) {
        if (second)
            d2_line(f.data(), out.data(), ln, st.order, e);
        else
            d1_line(f.data(), out.data(), ln, st.order, e);
    });
    return out;
}

} // namespace

RField gradient_axis(const RField& f, const Domain& dom, int axis, const StencilConfig& st) {
    return d_axis(f, dom, axis, st, false);
}
RField second_derivative_axis(const RField& f, const Domain& dom, int axis,
                              const StencilConfig& st) {
    return d_axis(f, dom, axis, st, true);
}
CField gradient_axis_c(const CField& f, const Domain& dom, int axis, const StencilConfig& st) {
    return d_axis(f, dom, axis, st, false);
}
CField second_derivative_axis_c(const CField& f, const Domain& dom, int axis,
                                const StencilConfig& st) {
    return d_axis(f, dom, axis, st, true);
}

VField gradient_scalar(const RField& f, const Domain& dom, const StencilConfig& st) {
    VField g = VField::zeros(dom);
    g[0] = gradient_axis(f, dom, 0, st);
    if (dom.kind == DomainKind::Grid2D) g[1] = gradient_axis(f, dom, 1, st);
    // Disc1D: axisymmetric scalar, tangential component stays zero
    return g;
}

RField laplacian_scalar(const RField& f, const Domain& dom, const StencilConfig& st) {
    RField lap = second_derivative_axis(f, dom, 0, st);
    if (dom.kind == DomainKind::Grid2D) {
        RField d2y = second_derivative_axis(f, dom, 1, st);
        for (std::size_t k = 0; k < lap.size(); ++k) lap[k] += d2y[k];
    } else if (dom.kind == DomainKind::Disc1D) {
        RField d1 = gradient_axis(f, dom, 0, st);
        for (int i = 0; i < dom.n1; ++i) lap[i] += d1[i] / dom.r(i);
    }
    return lap;
}

RField divergence(const VField& u, const Domain& dom, const StencilConfig& st) {
    RField div = gradient_axis(u[0], dom, 0, st);
    if (dom.kind == DomainKind::Grid2D) {
        RField dy = gradient_axis(u[1], dom, 1, st);
        for (std::size_t k = 0; k < div.size(); ++k) div[k] += dy[k];
    } else if (dom.kind == DomainKind::Disc1D) {
        for (int i = 0; i < dom.n1; ++i) div[i] += u[0][i] / dom.r(i);
    }
    return div;
}

VField laplacian_vector(const VField& u, const Domain& dom, const StencilConfig& st) {
    VField lap = VField::zeros(dom);
    for (int c = 0; c < lap.ncomp; ++c) {
        if (u[c].empty()) continue;
        lap[c] = second_derivative_axis(u[c], dom, 0, st);
        if (dom.kind == DomainKind::Grid2D) {
            RField d2y = second_derivative_axis(u[c], dom, 1, st);
            for (std::size_t k = 0; k < lap[c].size(); ++k) lap[c][k] += d2y[k];
        } else if (dom.kind == DomainKind::Disc1D) {
            RField d1 = gradient_axis(u[c], dom, 0, st);
            for (int i = 0; i < dom.n1; ++i)
                lap[c][i] += d1[i] / dom.r(i) - u[c][i] / (dom.r(i) * dom.r(i));
        }
    }
    return lap;
}

CField laplacian_complex(const CField& psi, const Domain& dom, const StencilConfig& st) {
    CField lap = second_derivative_axis_c(psi, dom, 0, st);
    if (dom.kind == DomainKind::Grid2D) {
        CField d2y = second_derivative_axis_c(psi, dom, 1, st);
        for (std::size_t k = 0; k < lap.size(); ++k) lap[k] += d2y[k];
    } else if (dom.kind == DomainKind::Disc1D) {
        CField d1 = gradient_axis_c(psi, dom, 0, st);
        for (int i = 0; i < dom.n1; ++i) lap[i] += d1[i] / dom.r(i);
    }
    return lap;
}

CVField covariant_gradient(const CField& psi, const VField& A, const Domain& dom,
                           const PhysParams& p, const StencilConfig& st) {
    const Complex mi_hbar{0.0, -p.hbar};
    const double qc = p.charge / p.light_c;
    CVField D = CVField::zeros(dom);

    CField d1 = gradient_axis_c(psi, dom, 0, st);
    for (std::size_t k = 0; k < psi.size(); ++k) D[0][k] = mi_hbar * d1[k] - qc * A[0][k] * psi[k];

    if (dom.kind == DomainKind::Grid2D) {
        CField d2 = gradient_axis_c(psi, dom, 1, st);
        for (std::size_t k = 0; k < psi.size(); ++k)
            D[1][k] = mi_hbar * d2[k] - qc * A[1][k] * psi[k];
    } else if (dom.kind == DomainKind::Disc1D) {
        // factored phase exp(-i n theta): -i hbar (1/r) d_theta -> -n hbar / r
        for (int i = 0; i < dom.n1; ++i)
            D[1][i] = (-dom.winding * p.hbar / dom.r(i) - qc * A[1][i]) * psi[i];
    }
    return D;
}

CField covariant_laplacian(const CField& psi, const VField& A, const Domain& dom,
                           const PhysParams& p, const StencilConfig& st) {
    const double hb = p.hbar;
    const double qc = p.charge / p.light_c;
    const std::size_t n = psi.size();
    CField out(n);

    CField lap = laplacian_complex(psi, dom, st);

    if (dom.kind == DomainKind::Disc1D) {
        // D^2 = -hbar^2 (psi'' + psi'/r) + (n hbar / r + (q/c) A_theta)^2 psi
        //       + radial-A terms (A_r is zero for every catalog gauge)
        CField d1 = gradient_axis_c(psi, dom, 0, st);
        RField divAr = gradient_axis(A[0], dom, 0, st); // + A_r/r below
        for (int i = 0; i < dom.n1; ++i) {
            const double pt = dom.winding * hb / dom.r(i) + qc * A[1][i];
            const double ar = A[0][i];
            out[i] = -hb * hb * lap[i] + pt * pt * psi[i] +
                     Complex{0.0, 2.0 * hb * qc} * ar * d1[i] +
                     Complex{0.0, hb * qc} * (divAr[i] + ar / dom.r(i)) * psi[i] +
                     qc * qc * ar * ar * psi[i];
        }
        return out;
    }

    CField d1x = gradient_axis_c(psi, dom, 0, st);
    const bool two_d = dom.kind == DomainKind::Grid2D;
    CField d1y;
    RField divA = divergence(A, dom, st);
    if (two_d) d1y = gradient_axis_c(psi, dom, 1, st);

    for (std::size_t k = 0; k < n; ++k) {
        Complex a_dot_grad = A[0][k] * d1x[k];
        double a2 = A[0][k] * A[0][k];
        if (two_d) {
            a_dot_grad += A[1][k] * d1y[k];
            a2 += A[1][k] * A[1][k];
        }
        out[k] = -hb * hb * lap[k] + Complex{0.0, 2.0 * hb * qc} * a_dot_grad +
                 Complex{0.0, hb * qc} * divA[k] * psi[k] + qc * qc * a2 * psi[k];
    }
    return out;
}

VelocityField velocity_field(const CField& psi, const VField& A, const Domain& dom,
                             const PhysParams& p, const StencilConfig& st) {
    const std::size_t n = psi.size();
    VelocityField out;
    out.v = VField::zeros(dom);
    out.mask.assign(n, 0);

    double rho_max = max_abs2(psi);
    const double floor_abs = st.epsilon_rho * rho_max;
    const double qc = p.charge / p.light_c;

    CField d1x = gradient_axis_c(psi, dom, 0, st);
    CField d1y;
    if (dom.kind == DomainKind::Grid2D) d1y = gradient_axis_c(psi, dom, 1, st);

    for (std::size_t k = 0; k < n; ++k) {
        const double rho = std::norm(psi[k]);
        if (rho < floor_abs || rho_max == 0.0) out.mask[k] = 1;
        const double denom = std::max(rho, floor_abs);
        const double safe = denom > 0.0 ? denom : 1.0;
        const double jx = std::imag(std::conj(psi[k]) * d1x[k]);
        out.v[0][k] = (p.hbar * jx / safe - qc * A[0][k]) / p.mass;
        if (dom.kind == DomainKind::Grid2D) {
            const double jy = std::imag(std::conj(psi[k]) * d1y[k]);
            out.v[1][k] = (p.hbar * jy / safe - qc * A[1][k]) / p.mass;
        }
    }
    if (dom.kind == DomainKind::Disc1D) {
        // exact tangential component from the factored winding
        for (int i = 0; i < dom.n1; ++i)
            out.v[1][i] = (-dom.winding * p.hbar / dom.r(i) - qc * A[1][i]) / p.mass;
    }
    return out;
}

namespace {

struct AxisQuery {
    int i0;         // first of the stencil nodes
    double w[4];    // weights (w[2], w[3] unused for linear)
    int m;          // number of stencil nodes (2 or 4)
    bool wrap;
    int n;
};

AxisQuery axis_query(double x, double h, int n, bool periodic, double origin, double len,
                     int order) {
    AxisQuery q;
    q.wrap = periodic;
    q.n = n;
    double u = (x - origin) / h; // node units
    if (periodic) {
        u -= std::floor(u / n) * n;
    } else {
        const double tol = 1e-9 * len / h;
        if (u < -tol || u > n - 1 + tol)
            throw std::invalid_argument("interpolate: position outside non-periodic axis");
        u = std::clamp(u, 0.0, static_cast<double>(n - 1));
    }
    if (order == 2) {
        q.m = 2;
        int i = static_cast<int>(std::floor(u));
        if (!periodic) i = std::min(i, n - 2);
        const double a = u - i;
        q.i0 = i;
        q.w[0] = 1.0 - a;
        q.w[1] = a;
    } else {
        q.m = 4;
        int i = static_cast<int>(std::floor(u)) - 1;
        if (!periodic) i = std::clamp(i, 0, n - 4);
        q.i0 = i;
        // Lagrange weights at u on nodes i..i+3
        for (int a = 0; a < 4; ++a) {
            double w = 1.0;
            for (int b = 0; b < 4; ++b) {
                if (a == b) continue;
                w *= (u - (i + b)) / static_cast<double>(a - b);
            }
            q.w[a] = w;
        }
    }
    return q;
}

int wrap_index(int i, int n, bool wrap) {
    if (!wrap) return std::clamp(i, 0, n - 1);
    i %= n;
    return i < 0 ? i + n : i;
}

} // namespace

double interpolate(const RField& f, const Domain& dom, const std::array<double, 2>& pos,
                   const StencilConfig& st) {
    if (dom.kind == DomainKind::Grid2D) {
        AxisQuery qx = axis_query(pos[0], dom.h1, dom.n1, dom.periodic1(), 0.0, dom.len1, st.order);
        AxisQuery qy = axis_query(pos[1], dom.h2, dom.n2, dom.periodic2(), 0.0, dom.len2, st.order);
        double acc = 0.0;
        for (int b = 0; b < qy.m; ++b) {
            const int j = wrap_index(qy.i0 + b, dom.n2, qy.wrap);
            double row = 0.0;
            for (int a = 0; a < qx.m; ++a) {
                const int i = wrap_index(qx.i0 + a, dom.n1, qx.wrap);
                row += qx.w[a] * f[dom.idx(i, j)];
            }
            acc += qy.w[b] * row;
        }
        return acc;
    }
    const double origin = dom.kind == DomainKind::Disc1D ? dom.r_min : 0.0;
    AxisQuery q = axis_query(pos[0], dom.h1, dom.n1, dom.periodic1(), origin, dom.len1, st.order);
    double acc = 0.0;
    for (int a = 0; a < q.m; ++a) acc += q.w[a] * f[wrap_index(q.i0 + a, dom.n1, q.wrap)];
    return acc;
}

std::array<double, 2> interpolate_vec(const VField& u, const Domain& dom,
                                      const std::array<double, 2>& pos, const StencilConfig& st) {
    std::array<double, 2> out{0.0, 0.0};
    for (int c = 0; c < u.ncomp; ++c)
        if (!u[c].empty()) out[c] = interpolate(u[c], dom, pos, st);
    return out;
}

double max_abs(const RField& f) {
    double m = 0.0;
    for (double x : f) m = std::max(m, std::abs(x));
    return m;
}

double max_abs2(const CField& psi) {
    double m = 0.0;
    for (const Complex& z : psi) m = std::max(m, std::norm(z));
    return m;
}

double integrate(const RField& f, const Domain& dom) {
    double acc = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) acc += f[k] * dom.volume[k];
    return acc;
}

} // namespace tdgl
