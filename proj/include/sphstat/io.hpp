#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sphstat/bootstrap.hpp"
#include "sphstat/error.hpp"
#include "sphstat/estimators.hpp"
#include "sphstat/geometry.hpp"
#include "sphstat/samples.hpp"
#include "sphstat/version.hpp"

namespace sphstat {

using Json = nlohmann::ordered_json;

enum class FileFormat { cartesian_csv, polar_csv };
enum class DataKind { direction, axis };

inline const char* format_name(FileFormat f) {
  return f == FileFormat::cartesian_csv ? "cartesian" : "polar";
}
inline const char* kind_name(DataKind k) { return k == DataKind::direction ? "direction" : "axis"; }

struct DatasetFile {
  std::string path;
  FileFormat format = FileFormat::cartesian_csv;
  DataKind kind = DataKind::direction;
};

using AnySample = std::variant<DirectionSample, AxisSample>;

inline int sample_dim(const AnySample& s) {
  return std::visit([](const auto& x) { return x.dim(); }, s);
}
inline std::size_t sample_size(const AnySample& s) {
  return std::visit([](const auto& x) { return x.size(); }, s);
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

[[noreturn]] inline void parse_fail(std::size_t line, std::size_t column, const std::string& reason) {
  std::ostringstream os;
  os << "line " << line << ", column " << column << ": " << reason;
  fail(errc::parse_error, os.str());
}

inline double parse_number(const std::string& field, std::size_t line, std::size_t column) {
  if (field.empty()) parse_fail(line, column, "empty field");
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size()) parse_fail(line, column, "not a number: '" + field + "'");
  if (!std::isfinite(v)) parse_fail(line, column, "non-finite value");
  return v;
}

}  // namespace detail

/// Parse a CSV stream per the dataset grammar. Cartesian rows within the
/// 1e-6 norm band are silently renormalized, anything further is an error
/// naming the row; axis datasets are canonicalized row by row.
inline AnySample ingest(std::istream& in, FileFormat format, DataKind kind,
                        const std::string& name = "<stream>") {
  std::string line;
  if (!std::getline(in, line)) fail(errc::parse_error, name + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_csv_line(line);

  int q = 0;
  PolarConvention convention = PolarConvention::dec_inc_3d;
  if (format == FileFormat::cartesian_csv) {
    q = static_cast<int>(header.size());
    if (q < 2) detail::parse_fail(1, 1, "cartesian header needs at least columns x1,x2");
    for (int c = 0; c < q; ++c) {
      const std::string expect = "x" + std::to_string(c + 1);
      if (header[static_cast<std::size_t>(c)] != expect)
        detail::parse_fail(1, static_cast<std::size_t>(c) + 1, "expected header '" + expect + "'");
    }
  } else {
    if (header.size() == 1 && header[0] == "theta_deg") {
      q = 2;
      convention = PolarConvention::angle_2d;
    } else if (header.size() == 2 && header[0] == "dec" && header[1] == "inc") {
      q = 3;
      convention = PolarConvention::dec_inc_3d;
    } else {
      detail::parse_fail(1, 1, "polar header must be 'theta_deg' (q=2) or 'dec,inc' (q=3)");
    }
  }

  std::vector<Direction> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size())
      detail::parse_fail(line_no, fields.size(),
                         "expected " + std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
    if (format == FileFormat::cartesian_csv) {
      Vec v(static_cast<std::size_t>(q));
      for (std::size_t c = 0; c < v.size(); ++c)
        v[c] = detail::parse_number(fields[c], line_no, c + 1);
      const double nm = norm(v);
      if (std::abs(nm - 1.0) > kIngestNormTol) {
        std::ostringstream os;
        os << "line " << line_no << ": vector norm " << nm << " outside the 1e-6 unit tolerance";
        fail(errc::norm_tolerance, os.str());
      }
      rows.push_back(normalize(v));
    } else {
      PolarRecord rec;
      rec.convention = convention;
      for (std::size_t c = 0; c < fields.size(); ++c)
        rec.angles_deg.push_back(detail::parse_number(fields[c], line_no, c + 1));
      try {
        rows.push_back(polar_to_cartesian(rec));
      } catch (const Error& e) {
        detail::parse_fail(line_no, 1, e.what());
      }
    }
  }
  if (rows.empty()) fail(errc::parse_error, name + ": no data rows");

  if (kind == DataKind::direction) return DirectionSample(std::move(rows));
  std::vector<Axis> axes;
  axes.reserve(rows.size());
  for (const Direction& d : rows) axes.emplace_back(d);
  return AxisSample(std::move(axes));
}

inline AnySample ingest(const DatasetFile& file) {
  std::ifstream in(file.path);
  if (!in) fail(errc::io_error, "cannot open '" + file.path + "'");
  return ingest(in, file.format, file.kind, file.path);
}

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Round to 4 decimals (polar display precision).
inline double round4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return std::strtod(buf, nullptr);
}

inline void write_cartesian_csv(std::ostream& out, const DirectionSample& sample) {
  for (int c = 0; c < sample.dim(); ++c) out << (c ? ",x" : "x") << (c + 1);
  out << "\n";
  for (const Direction& d : sample) {
    for (int c = 0; c < d.dim(); ++c) {
      if (c) out << ",";
      out << format_full(d[static_cast<std::size_t>(c)]);
    }
    out << "\n";
  }
}

inline void write_cartesian_csv(std::ostream& out, const AxisSample& sample) {
  write_cartesian_csv(out, hemisphere_representation(sample));
}

// --- result documents -------------------------------------------------------

inline Json polar_json(const Direction& d) {
  Json j;
  if (d.dim() == 2) {
    const PolarRecord rec = cartesian_to_polar(d, PolarConvention::angle_2d);
    j["theta_deg"] = round4(rec.angles_deg[0]);
  } else if (d.dim() == 3) {
    const PolarRecord rec = cartesian_to_polar(d, PolarConvention::dec_inc_3d);
    j["dec"] = round4(rec.angles_deg[0]);
    j["inc"] = round4(rec.angles_deg[1]);
  }
  return j;  // empty for q > 3: no polar convention defined
}

inline Json input_json(const DatasetFile& file, const AnySample& sample) {
  Json j;
  j["path"] = file.path;
  j["format"] = format_name(file.format);
  j["kind"] = kind_name(file.kind);
  j["n"] = sample_size(sample);
  j["q"] = sample_dim(sample);
  return j;
}

inline Json direction_estimates_json(const DirectionSample& sample, bool half_dispersion) {
  Json j;
  const Vec m = resultant_mean(sample);
  j["resultant_norm"] = norm(m);
  const Direction mu = mean_direction(sample);
  j["mean_direction"] = mu.coords();
  const Json polar = polar_json(mu);
  if (!polar.empty()) j["mean_direction_polar"] = polar;
  const double disp = directional_dispersion(sample);
  j["dispersion"] = disp;
  if (half_dispersion) j["dispersion_half"] = 0.5 * disp;
  return j;
}

inline Json axis_estimates_json(const AxisSample& sample, bool half_dispersion) {
  Json j;
  const AxialLocation loc = mean_axis(sample);
  j["mean_axis"] = loc.axis.rep().coords();
  const Json polar = polar_json(loc.axis.rep());
  if (!polar.empty()) j["mean_axis_polar"] = polar;
  j["lambda_max"] = loc.lambda_max;
  j["eigen_gap"] = loc.eigen_gap;
  const double disp = axial_dispersion(sample);
  j["axial_dispersion"] = disp;
  if (half_dispersion) j["axial_dispersion_half"] = 0.5 * disp;
  return j;
}

inline Json confidence_json(const ConfidenceSummary& s) {
  Json j;
  if (const auto* cone = std::get_if<Cone>(&s.geometry)) {
    j["type"] = "cone";
    j["apex"] = cone->apex.coords();
    const Json polar = polar_json(cone->apex);
    if (!polar.empty()) j["apex_polar"] = polar;
    j["half_angle_rad"] = cone->half_angle;
    j["half_angle_deg"] = cone->half_angle * kDegPerRad;
  } else if (const auto* dc = std::get_if<DoubleCone>(&s.geometry)) {
    j["type"] = "double-cone";
    j["axis"] = dc->axis.rep().coords();
    const Json polar = polar_json(dc->axis.rep());
    if (!polar.empty()) j["axis_polar"] = polar;
    j["half_angle_rad"] = dc->half_angle;
    j["half_angle_deg"] = dc->half_angle * kDegPerRad;
  } else if (const auto* iv = std::get_if<Interval>(&s.geometry)) {
    j["type"] = "interval";
    j["estimate"] = iv->estimate;
    j["lo"] = iv->lo;
    j["hi"] = iv->hi;
    j["range_max"] = iv->range_max;
  } else if (const auto* band = std::get_if<DistributionBand>(&s.geometry)) {
    j["type"] = "distribution-band";
    j["band_halfwidth"] = band->band_halfwidth;
  }
  j["beta"] = s.beta;
  j["B"] = s.B;
  j["critical_value"] = s.critical;
  j["degenerate_replicates"] = s.degenerate_count;
  if (degenerate_warning(s))
    j["warning"] = "more than 1% of bootstrap replicates were degenerate; the set was widened";
  return j;
}

inline Json document_shell(const std::string& command, std::uint64_t seed) {
  Json doc;
  doc["tool"] = kToolName;
  doc["version"] = kVersion;
  doc["command"] = command;
  doc["seed"] = seed;
  return doc;
}

/// Stable-key-order serialization; a trailing newline closes the document.
inline std::string serialize_document(const Json& doc) { return doc.dump(2) + "\n"; }

// --- Lambert SVG plot -------------------------------------------------------

namespace detail {

inline std::string fmt4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

struct PanelMapper {
  double cx, cy, scale;

  std::pair<double, double> to_px(const std::array<double, 2>& planar) const {
    // SVG y axis points down.
    return {cx + scale * planar[0], cy - scale * planar[1]};
  }
};

inline void svg_circle(std::ostream& os, double cx, double cy, double r, const std::string& style) {
  os << "  <circle cx=\"" << fmt4(cx) << "\" cy=\"" << fmt4(cy) << "\" r=\"" << fmt4(r) << "\" "
     << style << "/>\n";
}

/// Spherical circle of angular radius `half_angle` around `center`, projected
/// into the two hemisphere panels as polyline runs.
inline void draw_small_circle(std::ostream& os, const Direction& center, double half_angle,
                              const Direction& pole, const PanelMapper& upper,
                              const PanelMapper& lower, const std::string& style) {
  const auto frame = tangent_frame(center);
  const double ct = std::cos(half_angle);
  const double st = std::sin(half_angle);
  std::vector<std::pair<bool, std::pair<double, double>>> pts;  // (is_upper, pixel)
  const int segments = 360;
  for (int k = 0; k <= segments; ++k) {
    const double phi = 2.0 * kPi * k / segments;
    Vec p(3);
    for (std::size_t c = 0; c < 3; ++c)
      p[c] = ct * center[c] + st * (std::cos(phi) * frame[0][c] + std::sin(phi) * frame[1][c]);
    const Direction d = normalize(p);
    const double side = dot(d.coords(), pole.coords());
    if (side >= 0.0) {
      pts.emplace_back(true, upper.to_px(lambert_project(d, pole)));
    } else {
      Vec anti(3);
      for (std::size_t c = 0; c < 3; ++c) anti[c] = -d[c];
      pts.emplace_back(false, lower.to_px(lambert_project(Direction(std::move(anti)), pole)));
    }
  }
  // Emit one polyline per run on the same panel.
  std::size_t i = 0;
  while (i < pts.size()) {
    std::size_t j = i;
    while (j + 1 < pts.size() && pts[j + 1].first == pts[i].first) ++j;
    if (j > i) {
      os << "  <polyline fill=\"none\" " << style << " points=\"";
      for (std::size_t k = i; k <= j; ++k) {
        if (k > i) os << " ";
        os << fmt4(pts[k].second.first) << "," << fmt4(pts[k].second.second);
      }
      os << "\"/>\n";
    }
    i = j + 1;
  }
}

}  // namespace detail

/// Two-panel Lambert equal-area plot (upper hemisphere solid, lower hemisphere
/// hollow at the antipodal projections). The frame circle is the projected
/// equator (radius sqrt(2) in projection units); an optional cone or double
/// cone is drawn as the projected circle of its half-angle.
inline std::string render_lambert(const DirectionSample& sample,
                                  const std::optional<ConfidenceSummary>& summary,
                                  const Direction& pole) {
  if (sample.dim() != 3 || pole.dim() != 3)
    fail(errc::dimension_mismatch, "lambert plot requires q=3");
  const double frame_r = std::sqrt(2.0);
  const double panel_px = 190.0;
  const double scale = panel_px / frame_r;
  const detail::PanelMapper upper{230.0, 270.0, scale};
  const detail::PanelMapper lower{690.0, 270.0, scale};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"920\" height=\"520\" "
        "viewBox=\"0 0 920 520\">\n";
  os << "  <rect width=\"920\" height=\"520\" fill=\"white\"/>\n";
  os << "  <text x=\"230\" y=\"40\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"14\">upper hemisphere</text>\n";
  os << "  <text x=\"690\" y=\"40\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"14\">lower hemisphere (antipodal)</text>\n";
  detail::svg_circle(os, upper.cx, upper.cy, scale * frame_r,
                     "fill=\"none\" stroke=\"black\" stroke-width=\"1\"");
  detail::svg_circle(os, lower.cx, lower.cy, scale * frame_r,
                     "fill=\"none\" stroke=\"black\" stroke-width=\"1\"");

  for (const Direction& d : sample) {
    const double side = dot(d.coords(), pole.coords());
    if (side >= 0.0) {
      const auto px = upper.to_px(lambert_project(d, pole));
      detail::svg_circle(os, px.first, px.second, 3.0, "fill=\"#333333\"");
    } else {
      Vec anti(3);
      for (std::size_t c = 0; c < 3; ++c) anti[c] = -d[c];
      const auto px = lower.to_px(lambert_project(Direction(std::move(anti)), pole));
      detail::svg_circle(os, px.first, px.second, 3.0,
                         "fill=\"none\" stroke=\"#333333\" stroke-width=\"1.2\"");
    }
  }

  const auto draw_apex = [&](const Direction& apex) {
    const double side = dot(apex.coords(), pole.coords());
    if (side >= 0.0) {
      const auto px = upper.to_px(lambert_project(apex, pole));
      detail::svg_circle(os, px.first, px.second, 5.0,
                         "fill=\"#d62728\" stroke=\"white\" stroke-width=\"1\"");
    } else {
      Vec anti(3);
      for (std::size_t c = 0; c < 3; ++c) anti[c] = -apex[c];
      const auto px = lower.to_px(lambert_project(Direction(std::move(anti)), pole));
      detail::svg_circle(os, px.first, px.second, 5.0,
                         "fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"");
    }
  };

  if (summary.has_value()) {
    const std::string cone_style = "stroke=\"#1f77b4\" stroke-width=\"1.5\"";
    if (const auto* cone = std::get_if<Cone>(&summary->geometry)) {
      draw_apex(cone->apex);
      if (cone->half_angle > 0.0)
        detail::draw_small_circle(os, cone->apex, cone->half_angle, pole, upper, lower, cone_style);
    } else if (const auto* dc = std::get_if<DoubleCone>(&summary->geometry)) {
      draw_apex(dc->axis.rep());
      Vec anti(3);
      for (std::size_t c = 0; c < 3; ++c) anti[c] = -dc->axis.rep()[c];
      const Direction other(std::move(anti));
      draw_apex(other);
      if (dc->half_angle > 0.0) {
        detail::draw_small_circle(os, dc->axis.rep(), dc->half_angle, pole, upper, lower, cone_style);
        detail::draw_small_circle(os, other, dc->half_angle, pole, upper, lower, cone_style);
      }
    }
  }

  os << "  <text x=\"20\" y=\"505\" font-family=\"sans-serif\" font-size=\"12\">n=" << sample.size()
     << ", equator radius " << detail::fmt4(frame_r) << " (projection units)</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace sphstat
