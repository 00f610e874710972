#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tdgl/bohm.hpp"
#include "tdgl/ensemble.hpp"
#include "tdgl/state.hpp"

namespace tdgl {

/// Doubles serialized with 17 significant digits (lossless round-trip).
std::string format_double(double x);

/// Per-snapshot field export:
///   node_index, x[, y], re_psi, im_psi, abs2, vx[, vy], q_stat, q_dyn, q_dep
/// Masked nodes write nan in the velocity/potential columns (absent, not zero).
void write_snapshot_csv(const std::filesystem::path& path, const FieldState& s,
                        const BohmFields& bf, const Domain& dom);

/// Event log export: t, kind, cell_id, pos[, pos_y].
void write_events_csv(const std::filesystem::path& path, const std::vector<PairEvent>& events,
                      const Domain& dom);

struct TrajectoryWriter {
    explicit TrajectoryWriter(const std::filesystem::path& path, const Domain& dom);
    ~TrajectoryWriter();
    TrajectoryWriter(const TrajectoryWriter&) = delete;
    TrajectoryWriter& operator=(const TrajectoryWriter&) = delete;

    /// Appends rows for up to `sample` particles (lowest ids first).
    void append(double t, const PairEnsemble& ens, std::size_t sample);

  private:
    struct Impl;
    Impl* impl_;
};

struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Reads a purely numeric CSV (as written by write_snapshot_csv).
CsvData read_csv(const std::filesystem::path& path);

/// Writes CsvData back with the canonical formatting.
void write_csv(const std::filesystem::path& path, const CsvData& data);

} // namespace tdgl
