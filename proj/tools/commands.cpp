#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>

#include "wban/analytics.hpp"
#include "wban/codes.hpp"
#include "wban/config.hpp"
#include "wban/error.hpp"
#include "wban/golden.hpp"
#include "wban/report.hpp"
#include "wban/sim.hpp"

#ifndef WBAN_DEFAULT_FIXTURE
#define WBAN_DEFAULT_FIXTURE "fixtures/golden_three_wban.json"
#endif

namespace wban::cli {

namespace fs = std::filesystem;

namespace {

std::uint64_t parse_u64(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw ArgumentError("--seeds: '" + s + "' is not a non-negative integer");
  return std::stoull(s);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const ArgumentError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

ExperimentConfig prepare(const Options& opt, std::ostream& out) {
  if (opt.config_path.empty()) throw ConfigError("--config is required");
  ExperimentConfig cfg = load_config(opt.config_path);
  if (opt.seeds) cfg.seeds = *opt.seeds;
  if (opt.workers) cfg.workers = *opt.workers;
  if (opt.protocols) cfg.protocols = *opt.protocols;
  if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
  cfg.validate();
  out << "constants: " << describe_constants(cfg) << '\n';
  out << "config hash: " << config_hash(cfg) << '\n';
  return cfg;
}

ArtifactHeader header_for(const ExperimentConfig& cfg, const std::string& what) {
  ArtifactHeader h;
  h.config_hash = config_hash(cfg);
  h.seeds = cfg.seeds;
  h.extra = {{"artifact", what}};
  return h;
}

Manifest manifest_for(const ExperimentConfig& cfg, const std::string& what) {
  Manifest m;
  m.set("artifact", what);
  m.set_config(config_hash(cfg), canonical_json(cfg));
  m.set_seeds(cfg.seeds);
  return m;
}

void add_codes_if_needed(Manifest& m, const std::vector<ProtocolKind>& protocols,
                         std::size_t max_n) {
  if (std::find(protocols.begin(), protocols.end(), ProtocolKind::kOcaim) != protocols.end() &&
      max_n > 0)
    m.add_codes(cowhc_for(max_n));
}

std::vector<double> n_values(const ExperimentConfig& cfg, std::vector<double> fallback) {
  return cfg.sweep.axis == SweepAxis::kNWbans ? cfg.sweep.values : fallback;
}

std::vector<double> round_values(const ExperimentConfig& cfg) {
  std::vector<double> v;
  for (std::size_t r = cfg.sim.warmup_superframes; r < cfg.sim.horizon_superframes; ++r)
    v.push_back(static_cast<double>(r));
  return v;
}

PlotSpec plot_points(const std::vector<SweepPoint>& points, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::function<double(const SweepPoint&)>& y,
                     const std::function<double(const SweepPoint&)>& e,
                     double x_scale = 1.0) {
  PlotSpec spec{title, x_label, y_label, {}};
  for (const auto& p : points) {
    const std::string name(to_string(p.protocol));
    auto it = std::find_if(spec.series.begin(), spec.series.end(),
                           [&](const Series& s) { return s.name == name; });
    if (it == spec.series.end()) {
      spec.series.push_back(Series{name, {}, {}, {}});
      it = spec.series.end() - 1;
    }
    it->x.push_back(p.axis_value * x_scale);
    it->y.push_back(y(p));
    if (e) it->err.push_back(e(p));
  }
  return spec;
}

struct Artifacts {
  fs::path dir;
  Manifest manifest;
  std::ostream& out;

  void write(const std::string& file, const std::string& text) {
    write_text(dir / file, text);
    manifest.add_file(file);
    out << "wrote " << (dir / file).string() << '\n';
  }
};

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, SweepAxis axis,
                                  const std::vector<double>& values,
                                  const std::vector<ProtocolKind>& protocols) {
  return sweep(cfg.sim, axis, values, protocols, cfg.seeds, cfg.workers);
}

void figure_beacon_prob(const ExperimentConfig& cfg, Artifacts& a) {
  std::vector<double> ns = n_values(cfg, {2, 3, 4, 5, 6, 7, 8, 9, 10});
  const auto points = run_sweep(cfg, SweepAxis::kNWbans, ns, {ProtocolKind::kOs});
  Table t;
  t.columns = {"n_wbans",      "simulated", "ci_half_width", "attempts",
               "insufficient", "theoretical_fixedpoint", "theoretical_openloop"};
  Series sim{"simulated", {}, {}, {}}, theory{"theoretical", {}, {}, {}};
  for (const auto& p : points) {
    const auto n = static_cast<std::size_t>(p.axis_value);
    std::size_t sent = 0, lost = 0;
    for (const auto& r : p.per_seed) {
      sent += r.beacons_sent;
      lost += r.beacons_collided;
    }
    const double prob = sent ? 1.0 - static_cast<double>(lost) / static_cast<double>(sent) : 1.0;
    const double ci = sent ? 1.96 * std::sqrt(prob * (1 - prob) / static_cast<double>(sent)) : 0;
    const bool few = sent < kMinBeaconAttempts;
    if (few)
      a.out << "warning: n_wbans=" << n << " has only " << sent
            << " beacon attempts; confidence interval is wide\n";
    const auto curve = analytic_curve(analytic_params(cfg.sim, n), std::vector<std::size_t>{n});
    a.manifest.add_flags(n, curve[0].flags);
    t.rows.push_back({std::to_string(n), format_number(prob), format_number(ci),
                      std::to_string(sent), few ? "1" : "0",
                      format_number(curve[0].pr_bsucc_fixedpoint),
                      format_number(curve[0].pr_bsucc_openloop)});
    sim.x.push_back(static_cast<double>(n));
    sim.y.push_back(prob);
    sim.err.push_back(ci);
    theory.x.push_back(static_cast<double>(n));
    theory.y.push_back(curve[0].pr_bsucc_fixedpoint);
  }
  a.write("beacon_prob.csv", to_csv(t, header_for(cfg, "beacon_prob")));
  a.write("beacon_prob.svg",
          svg_line_plot({"Successful beacon transmission", "number of WBANs",
                         "probability", {sim, theory}}));
}

}  // namespace

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  if (text.find(',') == std::string::npos && text.find('-') == std::string::npos) {
    const auto n = parse_u64(text);
    if (n == 0) throw ArgumentError("--seeds: count must be >= 1");
    for (std::uint64_t s = 1; s <= n; ++s) seeds.push_back(s);
    return seeds;
  }
  if (text.find(',') == std::string::npos) {
    const auto parts = split(text, '-');
    if (parts.size() != 2) throw ArgumentError("--seeds: malformed range '" + text + "'");
    const auto lo = parse_u64(parts[0]), hi = parse_u64(parts[1]);
    if (hi < lo) throw ArgumentError("--seeds: empty range '" + text + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  for (const auto& p : split(text, ',')) seeds.push_back(parse_u64(p));
  return seeds;
}

std::vector<ProtocolKind> parse_protocols(const std::string& text) {
  std::vector<ProtocolKind> out;
  for (const auto& p : split(text, ',')) {
    if (p.empty()) continue;
    try {
      out.push_back(parse_protocol(p));
    } catch (const Error& e) {
      throw ArgumentError(std::string("--protocols: ") + e.what());
    }
  }
  return out;
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = prepare(opt, out);
    out << "valid: " << opt.config_path << " (" << cfg.seeds.size() << " seeds, "
        << cfg.protocols.size() << " protocols, sweep " << to_string(cfg.sweep.axis) << ")\n";
    return kOk;
  });
}

int cmd_figure(const std::string& name, const Options& opt, std::ostream& out,
               std::ostream& err) {
  if (std::find(kFigureNames.begin(), kFigureNames.end(), name) == kFigureNames.end()) {
    err << "unknown figure '" << name << "'; valid names:";
    for (const auto& n : kFigureNames) err << ' ' << n;
    err << '\n';
    return kValidationFailure;
  }
  return guarded(err, [&] {
    const auto cfg = prepare(opt, out);
    Artifacts a{cfg.output_dir, manifest_for(cfg, name), out};
    const double bi = cfg.sim.scenario.beacon_interval;
    auto protocols_or = [&](std::vector<ProtocolKind> fallback) {
      return opt.protocols ? *opt.protocols : fallback;
    };

    if (name == "beacon_prob") {
      figure_beacon_prob(cfg, a);
    } else {
      std::vector<SweepPoint> points;
      SweepAxis axis = SweepAxis::kTime;
      std::vector<ProtocolKind> protos;
      PlotSpec spec;
      if (name == "sinr_time") {
        protos = protocols_or({ProtocolKind::kOcaim, ProtocolKind::kOs});
        points = run_sweep(cfg, axis, round_values(cfg), protos);
        spec = plot_points(points, "Average SINR versus time", "time (s)", "SINR (dB)",
                           [](const SweepPoint& p) { return p.sinr_mean; }, nullptr, bi);
      } else if (name == "power_time") {
        protos = protocols_or({ProtocolKind::kOcaim, ProtocolKind::kSms, ProtocolKind::kOs});
        points = run_sweep(cfg, axis, round_values(cfg), protos);
        spec = plot_points(points, "WBAN power consumption versus time", "time (s)",
                           "mean power per WBAN (mW)",
                           [bi](const SweepPoint& p) { return p.energy_mean / bi; }, nullptr, bi);
      } else if (name == "sinr_theta") {
        axis = SweepAxis::kTheta;
        protos = protocols_or({ProtocolKind::kOcaim});
        const auto values = cfg.sweep.axis == SweepAxis::kTheta
                                ? cfg.sweep.values
                                : std::vector<double>{0, 5, 10, 15, 20};
        points = run_sweep(cfg, axis, values, protos);
        spec = plot_points(points, "SINR versus interference threshold", "theta (dB)",
                           "SINR (dB)", [](const SweepPoint& p) { return p.sinr_mean; },
                           [](const SweepPoint& p) { return p.sinr_std; });
      } else {  // fdr
        axis = SweepAxis::kNWbans;
        protos = protocols_or({ProtocolKind::kOcaim, ProtocolKind::kSms, ProtocolKind::kOs});
        points = run_sweep(cfg, axis, n_values(cfg, {2, 4, 6, 8, 10}), protos);
        spec = plot_points(points, "Data frames delivery ratio versus WBANs count",
                           "number of WBANs", "FDR",
                           [](const SweepPoint& p) { return p.fdr_mean; },
                           [](const SweepPoint& p) { return p.fdr_std; });
      }
      std::size_t max_n = cfg.sim.scenario.n_wbans;
      for (const auto& p : points)
        if (axis == SweepAxis::kNWbans) max_n = std::max(max_n, static_cast<std::size_t>(p.axis_value));
      add_codes_if_needed(a.manifest, protos, max_n);
      a.write(name + ".csv", to_csv(sweep_table(points, axis), header_for(cfg, name)));
      a.write(name + ".svg", svg_line_plot(spec));
    }
    a.write(name + ".manifest.json", a.manifest.dump());
    return kOk;
  });
}

int cmd_golden(const Options& opt, std::ostream& out, std::ostream& err) {
  const std::string path = opt.fixture_path.empty() ? WBAN_DEFAULT_FIXTURE : opt.fixture_path;
  GoldenReport report;
  GoldenFixture fixture;
  try {
    fixture = load_golden(path);
    report = run_golden(fixture);
  } catch (const std::exception& e) {
    err << "golden setup error: " << e.what() << '\n';
    return kRuntimeError;
  }
  auto braces = [](const std::vector<std::string>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s + "}";
  };
  out << "fixture: " << path << " (theta " << fixture.theta_db << " dB, "
      << fixture.network.n() << " WBANs)\n";
  if (report.checks.empty()) {
    for (const auto& [name, members] : golden_sets(report.trace, fixture.network))
      out << "  " << name << " = " << braces(members) << '\n';
  }
  for (const auto& c : report.checks) {
    if (c.match)
      out << "match     " << c.name << " = " << braces(c.actual) << '\n';
    else
      out << "MISMATCH  " << c.name << ": expected " << braces(c.expected) << ", derived "
          << braces(c.actual) << '\n';
  }
  if (!opt.out_dir.empty()) {
    try {
      Manifest m;
      m.set("artifact", "golden");
      m.set("fixture", path);
      m.set("result", report.pass() ? "pass" : "fail");
      m.add_trace(report.trace);
      write_text(fs::path(opt.out_dir) / "golden.manifest.json", m.dump());
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kRuntimeError;
    }
  }
  if (!report.pass()) {
    err << "golden mismatch in:";
    for (const auto& n : report.mismatches()) err << ' ' << n;
    err << '\n';
    return kGoldenMismatch;
  }
  out << "golden: pass (" << report.checks.size() << " sets)\n";
  return kOk;
}

int cmd_sweep(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = prepare(opt, out);
    Artifacts a{cfg.output_dir, manifest_for(cfg, "sweep"), out};
    const auto points = run_sweep(cfg, cfg.sweep.axis, cfg.sweep.values, cfg.protocols);
    const double bi = cfg.sim.scenario.beacon_interval;
    const bool time_axis = cfg.sweep.axis == SweepAxis::kTime;
    const std::string x_label = time_axis ? "time (s)" : std::string(to_string(cfg.sweep.axis));
    const double xs = time_axis ? bi : 1.0;
    a.write("sweep.csv", to_csv(sweep_table(points, cfg.sweep.axis), header_for(cfg, "sweep")));
    a.write("sweep_sinr.svg",
            svg_line_plot(plot_points(points, "Mean SINR", x_label, "SINR (dB)",
                                      [](const SweepPoint& p) { return p.sinr_mean; },
                                      [](const SweepPoint& p) { return p.sinr_std; }, xs)));
    a.write("sweep_energy.svg",
            svg_line_plot(plot_points(points, "Energy per WBAN", x_label, "energy (mW s)",
                                      [](const SweepPoint& p) { return p.energy_mean; },
                                      [](const SweepPoint& p) { return p.energy_std; }, xs)));
    a.write("sweep_fdr.svg",
            svg_line_plot(plot_points(points, "Frame delivery ratio", x_label, "FDR",
                                      [](const SweepPoint& p) { return p.fdr_mean; },
                                      [](const SweepPoint& p) { return p.fdr_std; }, xs)));
    if (opt.write_rounds) {
      // Per-run round logs, one file per (value, protocol, seed).
      const std::vector<double> values = time_axis ? std::vector<double>{-1} : cfg.sweep.values;
      for (double v : values)
        for (auto proto : cfg.protocols)
          for (auto seed : cfg.seeds) {
            SimConfig sc = cfg.sim;
            std::string tag = std::string(to_string(proto)) + "_seed" + std::to_string(seed);
            if (cfg.sweep.axis == SweepAxis::kNWbans) {
              sc.scenario.n_wbans = static_cast<std::size_t>(v);
              tag += "_n" + format_number(v);
            } else if (cfg.sweep.axis == SweepAxis::kTheta) {
              sc.theta_db = v;
              tag += "_theta" + format_number(v);
            }
            const auto log = run_simulation(sc, proto, seed);
            ArtifactHeader h = header_for(cfg, "rounds");
            h.seeds = {seed};
            a.write("rounds/" + tag + ".csv", to_csv(rounds_table(log), h));
          }
    }
    add_codes_if_needed(a.manifest, cfg.protocols, cfg.sim.scenario.n_wbans);
    a.write("sweep.manifest.json", a.manifest.dump());
    return kOk;
  });
}

int cmd_analytics(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = prepare(opt, out);
    Artifacts a{cfg.output_dir, manifest_for(cfg, "analytics"), out};
    std::vector<std::size_t> ns;
    for (double v : n_values(cfg, {})) ns.push_back(static_cast<std::size_t>(v));
    if (ns.empty()) {
      ns.resize(20);
      std::iota(ns.begin(), ns.end(), std::size_t{1});
    }
    const auto rows = analytic_curve(analytic_params(cfg.sim, 2), ns);
    Series fixed{"beacon success (fixed point)", {}, {}, {}};
    Series open{"beacon success (open loop)", {}, {}, {}};
    Series frame{"frame success", {}, {}, {}};
    for (const auto& r : rows) {
      const auto x = static_cast<double>(r.n_wbans);
      fixed.x.push_back(x);
      fixed.y.push_back(r.pr_bsucc_fixedpoint);
      open.x.push_back(x);
      open.y.push_back(r.pr_bsucc_openloop);
      frame.x.push_back(x);
      frame.y.push_back(r.pr_frsucc);
      a.manifest.add_flags(r.n_wbans, r.flags);
    }
    a.write("analytics.csv", to_csv(analytics_table(rows), header_for(cfg, "analytics")));
    a.write("analytics.svg", svg_line_plot({"Closed-form success probabilities",
                                            "number of WBANs", "probability",
                                            {fixed, open, frame}}));
    a.write("analytics.manifest.json", a.manifest.dump());
    return kOk;
  });
}

}  // namespace wban::cli
