#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pump/fock2.hpp"
#include "pump/protocol.hpp"

namespace pump {

/// Shortest representation that round-trips a double (17 significant digits,
/// "%.17g"); identical bytes on any IEEE-754 platform.
std::string format_double(double value);

/// Trajectory of one run: header
///   t,phi,com,gamma_max,nity,fidelity,density_1..density_M
/// one row per record, LF line endings, no quoting needed by the schema.
std::string records_csv(const std::vector<ObservableRecord>& records);

/// Ensemble trajectory: t,phi then mean/std of every scalar observable
/// followed by mean_density_* and std_density_*.
std::string ensemble_csv(const TrajectoryStats& traj);

/// Disorder scan table: amplitude,mean_fidelity,std_fidelity,mean_shift,std_shift.
std::string scan_csv(const std::vector<DisorderScanRow>& rows);

/// M x M correlation matrix, header site_1..site_M, one row per site.
std::string gamma_csv(const Eigen::MatrixXd& gamma);

void write_text_file(const std::string& path, const std::string& content);

enum class SvgKind { Heatmap, Lines };

struct LineSeries {
  std::string name;
  std::vector<double> y;
};

/// Site-by-time density map, one rect per (site, time) cell, linear
/// white-to-dark ramp, labeled axes. Deterministic output.
std::string heatmap_svg(const std::vector<double>& t, const std::vector<Eigen::VectorXd>& density,
                        const std::string& title);

/// Line plot of one or more series against t with axis ticks and a legend.
std::string lines_svg(const std::vector<double>& t, const std::vector<LineSeries>& series,
                      const std::string& title, const std::string& y_label);

/// FNV-1a 64-bit digest, printed as 16 hex digits.
std::uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

struct EmittedFile {
  std::string name;
  std::size_t bytes = 0;
  std::string digest;
};

/// Run manifest JSON: config echo, library version, per-sample seeds, wall
/// time, and the digest of every emitted file. Written last.
std::string manifest_json(const std::string& config_echo, const std::vector<std::uint64_t>& seeds,
                          double duration_seconds, const std::vector<EmittedFile>& files);

}  // namespace pump
