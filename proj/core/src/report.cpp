#include "wban/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "wban/error.hpp"

namespace wban {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string num(std::size_t v) { return std::to_string(v); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_csv(const Table& table, const ArtifactHeader& header) {
  std::ostringstream out;
  out << "# config_hash: " << header.config_hash << '\n';
  out << "# seeds: ";
  for (std::size_t i = 0; i < header.seeds.size(); ++i) out << (i ? " " : "") << header.seeds[i];
  out << '\n';
  for (const auto& [k, v] : header.extra) out << "# " << k << ": " << v << '\n';
  out << "schema_version";
  for (const auto& c : table.columns) out << ',' << csv_escape(c);
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw Error("to_csv: row width mismatch");
    out << kCsvSchemaVersion;
    for (const auto& cell : row) out << ',' << csv_escape(cell);
    out << '\n';
  }
  return out.str();
}

Table rounds_table(const MetricsLog& log) {
  Table t;
  t.columns = {"protocol",        "seed",          "round",           "wban",
               "mean_sinr_db",    "min_sinr_db",   "sinr_samples",    "energy_mws",
               "beacons_sent",    "beacons_collided", "frames_generated", "frames_sent",
               "frames_delivered", "frames_collided", "frames_in_flight", "frames_dropped",
               "codes_assigned",  "channel_switches"};
  for (const auto& r : log.records) {
    const bool any = r.sinr_samples > 0;
    t.rows.push_back({std::string(to_string(log.protocol)), std::to_string(log.seed), num(r.round),
                      num(r.wban + 1), any ? format_number(r.mean_sinr_db()) : "",
                      any ? format_number(r.sinr_min_db) : "", num(r.sinr_samples),
                      format_number(r.energy_mws), num(r.beacons_sent), num(r.beacons_collided),
                      num(r.frames_generated), num(r.frames_sent), num(r.frames_delivered),
                      num(r.frames_collided), num(r.frames_in_flight), num(r.frames_dropped),
                      num(r.codes_assigned), num(r.channel_switches)});
  }
  return t;
}

Table sweep_table(const std::vector<SweepPoint>& points, SweepAxis axis) {
  Table t;
  t.columns = {"axis",       "axis_value", "protocol",  "seeds",   "sinr_mean_db",
               "sinr_std_db", "energy_mean_mws", "energy_std_mws", "fdr_mean", "fdr_std",
               "beacon_success_mean", "beacon_success_std"};
  for (const auto& p : points)
    t.rows.push_back({std::string(to_string(axis)), format_number(p.axis_value),
                      std::string(to_string(p.protocol)), num(p.seeds), format_number(p.sinr_mean),
                      format_number(p.sinr_std), format_number(p.energy_mean),
                      format_number(p.energy_std), format_number(p.fdr_mean),
                      format_number(p.fdr_std), format_number(p.beacon_mean),
                      format_number(p.beacon_std)});
  return t;
}

Table analytics_table(const std::vector<AnalyticRow>& rows) {
  Table t;
  t.columns = {"n_wbans",   "pr_bcoll",  "pr_bsucc_openloop", "pr_bsucc_fixedpoint",
               "pr_frsucc", "pr_frsucc_beacon_aware", "validity_flags"};
  for (const auto& r : rows)
    t.rows.push_back({num(r.n_wbans), format_number(r.pr_bcoll),
                      format_number(r.pr_bsucc_openloop), format_number(r.pr_bsucc_fixedpoint),
                      format_number(r.pr_frsucc), format_number(r.pr_frsucc_beacon_aware),
                      describe_flags(r.flags)});
  return t;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

// Round outward to a 1/2/5 step grid.
std::vector<double> ticks(double lo, double hi, double& out_lo, double& out_hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double raw = (hi - lo) / 5;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  out_lo = std::floor(lo / step) * step;
  out_hi = std::ceil(hi / step) * step;
  std::vector<double> t;
  for (double v = out_lo; v <= out_hi + step * 1e-9; v += step) t.push_back(v);
  return t;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};

}  // namespace

std::string svg_line_plot(const PlotSpec& spec) {
  constexpr double W = 640, H = 420, L = 70, R = 150, T = 40, B = 55;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : spec.series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      const double e = i < s.err.size() ? s.err[i] : 0;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i] - e);
      ymax = std::max(ymax, s.y[i] + e);
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  double x0, x1, y0, y1;
  const auto xt = ticks(xmin, xmax, x0, x1);
  const auto yt = ticks(ymin, ymax, y0, y1);
  const double pw = W - L - R, ph = H - T - B;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return T + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << xml_escape(spec.title) << "</text>\n";
  for (double v : xt)
    o << "<line x1=\"" << fixed(px(v)) << "\" y1=\"" << T << "\" x2=\"" << fixed(px(v))
      << "\" y2=\"" << T + ph << "\" stroke=\"#eee\"/><text x=\"" << fixed(px(v)) << "\" y=\""
      << T + ph + 16 << "\" text-anchor=\"middle\">" << format_number(v) << "</text>\n";
  for (double v : yt)
    o << "<line x1=\"" << L << "\" y1=\"" << fixed(py(v)) << "\" x2=\"" << L + pw << "\" y2=\""
      << fixed(py(v)) << "\" stroke=\"#eee\"/><text x=\"" << L - 6 << "\" y=\""
      << fixed(py(v) + 4) << "\" text-anchor=\"end\">" << format_number(v) << "</text>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
    << xml_escape(spec.x_label) << "</text>\n";
  o << "<text transform=\"translate(18," << T + ph / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(spec.y_label) << "</text>\n";

  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    const auto& s = spec.series[si];
    const char* color = kPalette[si % std::size(kPalette)];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      pts += fixed(px(s.x[i])) + "," + fixed(py(s.y[i])) + " ";
      if (i < s.err.size() && s.err[i] > 0)
        o << "<line x1=\"" << fixed(px(s.x[i])) << "\" y1=\"" << fixed(py(s.y[i] - s.err[i]))
          << "\" x2=\"" << fixed(px(s.x[i])) << "\" y2=\"" << fixed(py(s.y[i] + s.err[i]))
          << "\" stroke=\"" << color << "\"/>\n";
      o << "<circle cx=\"" << fixed(px(s.x[i])) << "\" cy=\"" << fixed(py(s.y[i]))
        << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << pts
      << "\"/>\n";
    const double ly = T + 14 + 18 * static_cast<double>(si);
    o << "<line x1=\"" << L + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 32
      << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/><text x=\""
      << L + pw + 38 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// Manifest

struct Manifest::Impl {
  json doc = json::object();
};

Manifest::Manifest() : impl_(std::make_unique<Impl>()) {}
Manifest::~Manifest() = default;
Manifest::Manifest(Manifest&&) noexcept = default;
Manifest& Manifest::operator=(Manifest&&) noexcept = default;

void Manifest::set(const std::string& key, const std::string& value) { impl_->doc[key] = value; }

void Manifest::set_config(const std::string& hash, const std::string& canonical) {
  impl_->doc["config_hash"] = hash;
  impl_->doc["config"] = json::parse(canonical);
}

void Manifest::set_seeds(const std::vector<std::uint64_t>& seeds) { impl_->doc["seeds"] = seeds; }

void Manifest::add_codes(const CowhcSet& codes) {
  json j;
  j["matrix_order"] = codes.matrix_order;
  j["codes"] = json::array();
  for (const auto& c : codes.codes) {
    std::string chips;
    for (Chip x : c.chips) chips += x > 0 ? '+' : '-';
    j["codes"].push_back({{"source_row", c.source_row}, {"chips", chips}});
  }
  impl_->doc["cowhc"] = std::move(j);
}

namespace {

json sensor_list(const SensorSet& set) {
  json a = json::array();
  for (const auto& id : set) a.push_back(to_string(id));
  return a;
}

}  // namespace

void Manifest::add_trace(const OcaimTrace& trace) {
  json j;
  for (const auto& l : trace.lists)
    j["interference_lists"]["I_" + std::to_string(l.owner + 1)] = sensor_list(l.members);
  for (const auto& s : trace.sets)
    j["interference_sets"]["IS_" + std::to_string(s.owner + 1)] = sensor_list(s.members);
  for (const auto& p : trace.patterns) {
    json peers = json::object();
    for (const auto& [peer, ov] : p.entries) {
      json pairs = json::array();
      for (const auto& [a, b] : ov.colliding_pairs) pairs.push_back({a + 1, b + 1});
      peers[std::to_string(peer + 1)] = {{"timeshift_s", ov.timeshift}, {"slot_pairs", pairs}};
    }
    j["timeshift_patterns"][std::to_string(p.owner + 1)] = peers;
  }
  for (const auto& [id, set] : trace.sils) j["sils"]["SIL" + to_string(id).substr(1)] = sensor_list(set);
  for (const auto& a : trace.assignments) {
    json slots = json::array();
    for (const auto& s : a.per_slot)
      slots.push_back(s.spread && s.code ? json(*s.code + 1) : json(nullptr));
    j["code_assignments"]["Code_" + std::to_string(a.wban + 1)] = slots;
  }
  impl_->doc["ocaim_trace"] = std::move(j);
}

void Manifest::add_flags(std::size_t n_wbans, std::uint32_t flags) {
  impl_->doc["validity_flags"][std::to_string(n_wbans)] = describe_flags(flags);
}

void Manifest::add_file(const std::string& path) { impl_->doc["files"].push_back(path); }

std::string Manifest::dump() const { return impl_->doc.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace wban
