#include "pump/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pump/errors.hpp"
#include "pump/version.hpp"

namespace pump {

namespace {

void append_row_value(std::string& out, double v, bool first) {
  if (!first) out += ',';
  out += format_double(v);
}

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Frame {
  double x0 = 70, y0 = 45, x1 = 770, y1 = 360;  // plot area in svg coordinates
  double tmin = 0, tmax = 1, vmin = 0, vmax = 1;

  double x(double t) const { return x0 + (t - tmin) / (tmax - tmin) * (x1 - x0); }
  double y(double v) const { return y1 - (v - vmin) / (vmax - vmin) * (y1 - y0); }
};

void open_svg(std::ostringstream& svg, const std::string& title) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"420\" "
         "viewBox=\"0 0 800 420\">\n";
  svg << "<rect width=\"800\" height=\"420\" fill=\"white\"/>\n";
  svg << "<text x=\"400\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" << title << "</text>\n";
}

void draw_axes(std::ostringstream& svg, const Frame& f, const std::string& x_label,
               const std::string& y_label) {
  svg << "<rect x=\"" << svg_num(f.x0) << "\" y=\"" << svg_num(f.y0) << "\" width=\""
      << svg_num(f.x1 - f.x0) << "\" height=\"" << svg_num(f.y1 - f.y0)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double t = f.tmin + (f.tmax - f.tmin) * i / 5.0;
    const double x = f.x(t);
    svg << "<line x1=\"" << svg_num(x) << "\" y1=\"" << svg_num(f.y1) << "\" x2=\"" << svg_num(x)
        << "\" y2=\"" << svg_num(f.y1 + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << svg_num(x) << "\" y=\"" << svg_num(f.y1 + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick_label(t) << "</text>\n";
    const double v = f.vmin + (f.vmax - f.vmin) * i / 5.0;
    const double y = f.y(v);
    svg << "<line x1=\"" << svg_num(f.x0 - 5) << "\" y1=\"" << svg_num(y) << "\" x2=\""
        << svg_num(f.x0) << "\" y2=\"" << svg_num(y) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << svg_num(f.x0 - 8) << "\" y=\"" << svg_num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(v)
        << "</text>\n";
  }
  svg << "<text x=\"" << svg_num(0.5 * (f.x0 + f.x1)) << "\" y=\"410\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"13\">" << x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << svg_num(0.5 * (f.y0 + f.y1))
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 16 " << svg_num(0.5 * (f.y0 + f.y1)) << ")\">" << y_label
      << "</text>\n";
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string records_csv(const std::vector<ObservableRecord>& records) {
  std::string out = "t,phi,com,gamma_max,nity,fidelity";
  const int m = records.empty() ? 0 : static_cast<int>(records.front().density.size());
  for (int j = 1; j <= m; ++j) out += ",density_" + std::to_string(j);
  out += '\n';
  for (const ObservableRecord& rec : records) {
    append_row_value(out, rec.t, true);
    append_row_value(out, rec.phi, false);
    append_row_value(out, rec.com, false);
    append_row_value(out, rec.gamma_max, false);
    append_row_value(out, rec.nity, false);
    append_row_value(out, rec.fidelity, false);
    for (int j = 0; j < rec.density.size(); ++j) append_row_value(out, rec.density(j), false);
    out += '\n';
  }
  return out;
}

std::string ensemble_csv(const TrajectoryStats& traj) {
  std::string out =
      "t,phi,mean_com,std_com,mean_shift,std_shift,mean_gamma_max,std_gamma_max,"
      "mean_nity,std_nity,mean_fidelity,std_fidelity";
  const int m = traj.mean_density.empty() ? 0 : static_cast<int>(traj.mean_density.front().size());
  for (int j = 1; j <= m; ++j) out += ",mean_density_" + std::to_string(j);
  for (int j = 1; j <= m; ++j) out += ",std_density_" + std::to_string(j);
  out += '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    append_row_value(out, traj.t[k], true);
    append_row_value(out, traj.phi[k], false);
    append_row_value(out, traj.mean_com[k], false);
    append_row_value(out, traj.std_com[k], false);
    append_row_value(out, traj.mean_shift[k], false);
    append_row_value(out, traj.std_shift[k], false);
    append_row_value(out, traj.mean_gamma_max[k], false);
    append_row_value(out, traj.std_gamma_max[k], false);
    append_row_value(out, traj.mean_nity[k], false);
    append_row_value(out, traj.std_nity[k], false);
    append_row_value(out, traj.mean_fidelity[k], false);
    append_row_value(out, traj.std_fidelity[k], false);
    for (int j = 0; j < m; ++j) append_row_value(out, traj.mean_density[k](j), false);
    for (int j = 0; j < m; ++j) append_row_value(out, traj.std_density[k](j), false);
    out += '\n';
  }
  return out;
}

std::string scan_csv(const std::vector<DisorderScanRow>& rows) {
  std::string out = "amplitude,mean_fidelity,std_fidelity,mean_shift,std_shift\n";
  for (const DisorderScanRow& row : rows) {
    append_row_value(out, row.amplitude, true);
    append_row_value(out, row.mean_fidelity, false);
    append_row_value(out, row.std_fidelity, false);
    append_row_value(out, row.mean_shift, false);
    append_row_value(out, row.std_shift, false);
    out += '\n';
  }
  return out;
}

std::string gamma_csv(const Eigen::MatrixXd& gamma) {
  std::string out;
  for (int j = 0; j < gamma.cols(); ++j) {
    out += (j ? ",site_" : "site_") + std::to_string(j + 1);
  }
  out += '\n';
  for (int q = 0; q < gamma.rows(); ++q) {
    for (int r = 0; r < gamma.cols(); ++r) append_row_value(out, gamma(q, r), r == 0);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw numerical_error("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw numerical_error("failed while writing '" + path + "'");
}

std::string heatmap_svg(const std::vector<double>& t, const std::vector<Eigen::VectorXd>& density,
                        const std::string& title) {
  std::ostringstream svg;
  open_svg(svg, title);
  if (!t.empty() && !density.empty()) {
    const int m = static_cast<int>(density.front().size());
    const int n_t = static_cast<int>(t.size());
    Frame f;
    f.tmin = t.front();
    f.tmax = t.back() > t.front() ? t.back() : t.front() + 1.0;
    f.vmin = 0.5;
    f.vmax = m + 0.5;
    double peak = 0.0;
    for (const auto& column : density) peak = std::max(peak, column.maxCoeff());
    if (peak <= 0.0) peak = 1.0;

    const double cell_w = (f.x1 - f.x0) / n_t;
    const double cell_h = (f.y1 - f.y0) / m;
    for (int k = 0; k < n_t; ++k) {
      for (int j = 0; j < m; ++j) {
        const double w = std::clamp(density[k](j) / peak, 0.0, 1.0);
        if (w < 1e-3) continue;  // leave the background white
        const int r = static_cast<int>(std::lround(255 + w * (8 - 255)));
        const int g = static_cast<int>(std::lround(255 + w * (48 - 255)));
        const int b = static_cast<int>(std::lround(255 + w * (107 - 255)));
        svg << "<rect x=\"" << svg_num(f.x0 + k * cell_w) << "\" y=\""
            << svg_num(f.y1 - (j + 1) * cell_h) << "\" width=\"" << svg_num(cell_w + 0.5)
            << "\" height=\"" << svg_num(cell_h + 0.5) << "\" fill=\"rgb(" << r << ',' << g << ','
            << b << ")\"/>\n";
      }
    }
    draw_axes(svg, f, "t", "site");
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string lines_svg(const std::vector<double>& t, const std::vector<LineSeries>& series,
                      const std::string& title, const std::string& y_label) {
  std::ostringstream svg;
  open_svg(svg, title);
  Frame f;
  if (!t.empty()) {
    f.tmin = t.front();
    f.tmax = t.back() > t.front() ? t.back() : t.front() + 1.0;
  }
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  for (const LineSeries& s : series) {
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  if (!(vmin < vmax)) {
    vmin = std::isfinite(vmin) ? vmin - 1.0 : 0.0;
    vmax = vmin + 2.0;
  }
  const double pad = 0.05 * (vmax - vmin);
  f.vmin = vmin - pad;
  f.vmax = vmax + pad;

  int color = 0;
  for (const LineSeries& s : series) {
    std::string points;
    for (std::size_t k = 0; k < s.y.size() && k < t.size(); ++k) {
      if (!std::isfinite(s.y[k])) continue;
      points += svg_num(f.x(t[k])) + "," + svg_num(f.y(s.y[k])) + " ";
    }
    if (!points.empty()) {
      svg << "<polyline fill=\"none\" stroke=\"" << kPalette[color % 6]
          << "\" stroke-width=\"1.5\" points=\"" << points << "\"/>\n";
    }
    svg << "<text x=\"" << svg_num(f.x1 - 8) << "\" y=\"" << svg_num(f.y0 + 16 + 16 * color)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
        << kPalette[color % 6] << "\">" << s.name << "</text>\n";
    ++color;
  }
  draw_axes(svg, f, "t", y_label);
  svg << "</svg>\n";
  return svg.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string digest_hex(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string manifest_json(const std::string& config_echo, const std::vector<std::uint64_t>& seeds,
                          double duration_seconds, const std::vector<EmittedFile>& files) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["config"] = config_echo;
  j["seeds"] = seeds;
  j["duration_seconds"] = duration_seconds;
  j["files"] = nlohmann::json::array();
  for (const EmittedFile& f : files) {
    j["files"].push_back({{"name", f.name}, {"bytes", f.bytes}, {"fnv1a64", f.digest}});
  }
  return j.dump(2) + "\n";
}

}  // namespace pump
