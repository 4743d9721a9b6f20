// Result persistence: versioned CSV tables, run manifests, SVG line plots.
#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wban/analytics.hpp"
#include "wban/codes.hpp"
#include "wban/protocols.hpp"
#include "wban/sim.hpp"

namespace wban {

inline constexpr int kCsvSchemaVersion = 1;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// Comment lines written ahead of the CSV header ("# key: value").
struct ArtifactHeader {
  std::string config_hash;
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<std::string, std::string>> extra;
};

/// Shortest decimal form that round-trips the double; locale independent.
std::string format_number(double v);

/// Prepends a schema_version column to every row.
std::string to_csv(const Table& table, const ArtifactHeader& header);

Table rounds_table(const MetricsLog& log);
Table sweep_table(const std::vector<SweepPoint>& points, SweepAxis axis);
Table analytics_table(const std::vector<AnalyticRow>& rows);

struct Series {
  std::string name;
  std::vector<double> x, y;
  std::vector<double> err;  // optional symmetric error bars
};

struct PlotSpec {
  std::string title, x_label, y_label;
  std::vector<Series> series;
};

std::string svg_line_plot(const PlotSpec& spec);

/// Structured run manifest rendered as JSON.
class Manifest {
 public:
  Manifest();
  ~Manifest();
  Manifest(Manifest&&) noexcept;
  Manifest& operator=(Manifest&&) noexcept;

  void set(const std::string& key, const std::string& value);
  void set_config(const std::string& config_hash, const std::string& canonical_config_json);
  void set_seeds(const std::vector<std::uint64_t>& seeds);
  void add_codes(const CowhcSet& codes);
  void add_trace(const OcaimTrace& trace);
  void add_flags(std::size_t n_wbans, std::uint32_t flags);
  void add_file(const std::string& path);
  std::string dump() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Writes text through a temporary file and rename, creating parent dirs.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace wban
