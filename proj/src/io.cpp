#include "tdgl/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tdgl {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary); // fixed newlines on every platform
    if (!os) throw std::runtime_error("io: cannot open " + path.string() + " for writing");
    return os;
}

} // namespace

void write_snapshot_csv(const std::filesystem::path& path, const FieldState& s,
                        const BohmFields& bf, const Domain& dom) {
    std::ofstream os = open_out(path);
    const bool two_d = dom.ncomp() == 2;
    os << "node_index,x";
    if (dom.kind == DomainKind::Grid2D) os << ",y";
    os << ",re_psi,im_psi,abs2,vx";
    if (two_d) os << ",vy";
    os << ",q_stat,q_dyn,q_dep\n";

    for (std::size_t k = 0; k < s.psi.size(); ++k) {
        const bool masked = !bf.mask.empty() && bf.mask[k];
        auto val = [&](double x) { return format_double(masked ? kNan : x); };
        os << k << ',';
        if (dom.kind == DomainKind::Grid2D) {
            os << format_double(dom.coord1[static_cast<int>(k) % dom.n1]) << ','
               << format_double(dom.coord2[static_cast<int>(k) / dom.n1]);
        } else {
            os << format_double(dom.coord1[k]);
        }
        os << ',' << format_double(s.psi[k].real()) << ',' << format_double(s.psi[k].imag())
           << ',' << format_double(std::norm(s.psi[k]));
        os << ',' << val(bf.v[0][k]);
        if (two_d) os << ',' << val(bf.v[1][k]);
        os << ',' << val(bf.q_stat[k]) << ',' << val(bf.q_dyn[k]) << ',' << val(bf.q_dep[k])
           << '\n';
    }
}

void write_events_csv(const std::filesystem::path& path, const std::vector<PairEvent>& events,
                      const Domain& dom) {
    std::ofstream os = open_out(path);
    const bool two_d = dom.kind == DomainKind::Grid2D;
    os << "t,kind,cell_id,pos";
    if (two_d) os << ",pos_y";
    os << '\n';
    for (const PairEvent& e : events) {
        os << format_double(e.t) << ',' << event_kind_name(e.kind) << ',' << e.cell_id << ','
           << format_double(e.pos[0]);
        if (two_d) os << ',' << format_double(e.pos[1]);
        os << '\n';
    }
}

struct TrajectoryWriter::Impl {
    std::ofstream os;
    bool two_d = false;
};

TrajectoryWriter::TrajectoryWriter(const std::filesystem::path& path, const Domain& dom)
    : impl_(new Impl) {
    impl_->os = open_out(path);
    impl_->two_d = dom.kind == DomainKind::Grid2D;
    impl_->os << "t,id,x";
    if (impl_->two_d) impl_->os << ",y";
    impl_->os << '\n';
}

TrajectoryWriter::~TrajectoryWriter() { delete impl_; }

void TrajectoryWriter::append(double t, const PairEnsemble& ens, std::size_t sample) {
    const std::size_t n = std::min(sample, ens.particles.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Particle& p = ens.particles[i];
        impl_->os << format_double(t) << ',' << p.id << ',' << format_double(p.pos[0]);
        if (impl_->two_d) impl_->os << ',' << format_double(p.pos[1]);
        impl_->os << '\n';
    }
}

CsvData read_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("io: cannot open " + path.string());
    CsvData data;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("io: empty csv " + path.string());
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) data.header.push_back(cell);
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        data.rows.push_back(std::move(row));
    }
    return data;
}

void write_csv(const std::filesystem::path& path, const CsvData& data) {
    std::ofstream os = open_out(path);
    for (std::size_t c = 0; c < data.header.size(); ++c)
        os << data.header[c] << (c + 1 < data.header.size() ? ',' : '\n');
    for (const auto& row : data.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            // node_index stays integral
            if (c == 0 && row[c] == static_cast<double>(static_cast<long long>(row[c])))
                os << static_cast<long long>(row[c]);
            else
                os << format_double(row[c]);
            os << (c + 1 < row.size() ? ',' : '\n');
        }
    }
}

} // namespace tdgl
