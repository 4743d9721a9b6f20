#include "wban/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <exception>
#include <string>
#include <thread>
#include <tuple>

#include "wban/codes.hpp"
#include "wban/error.hpp"
#include "wban/rng.hpp"

namespace wban {

namespace {

constexpr std::size_t kBeaconSensor = std::numeric_limits<std::size_t>::max();
constexpr std::uint64_t kMobilityStepStream = 3;
constexpr double kTimeEps = 1e-12;

struct Tx {
  double start = 0, end = 0;
  std::size_t wban = 0;
  SensorId source;
  Vec3 position;
  double power_dbm = kDefaultTxPowerDbm;
  std::size_t channel = 0;
  std::optional<std::size_t> code;
};

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

struct SensorState {
  std::deque<unsigned> buffer;  // retry count per queued frame
  unsigned in_flight_retries = 0;
  std::optional<Tx> current;
};

struct WbanState {
  double sf_start = 0;
  bool beacon_ok = false;
  std::vector<SensorState> sensors;
};

class Simulator {
 public:
  Simulator(const SimConfig& cfg, ProtocolKind protocol, std::uint64_t seed)
      : cfg_(cfg), protocol_(protocol), seed_(seed) {
    net_ = cfg.network ? *cfg.network : scatter_network(cfg.scenario, cfg.box, seed);
    net_.waypoints.resize(net_.n());
    bi_ = cfg.scenario.beacon_interval;
    horizon_ = static_cast<double>(cfg.horizon_superframes) * bi_;
    const std::size_t n = net_.n();
    if (protocol == ProtocolKind::kOcaim && n > 0) codes_ = cowhc_for(n);
    patterns_ = run_os_round(net_);
    for (const auto& w : net_.wbans)
      for (const auto& s : w.sensors) channel_[s.id] = 0;
    states_.resize(n);
    for (std::size_t i = 0; i < n; ++i) states_[i].sensors.resize(net_.wbans[i].k());

    log_.protocol = protocol;
    log_.seed = seed;
    log_.n_wbans = n;
    log_.warmup_rounds = cfg.warmup_superframes;
    log_.records.resize(cfg.horizon_superframes * n);
    for (std::size_t r = 0; r < cfg.horizon_superframes; ++r)
      for (std::size_t i = 0; i < n; ++i) {
        auto& rec = log_.records[r * n + i];
        rec.round = r;
        rec.wban = i;
      }
  }

  MetricsLog run() {
    for (std::size_t r = 0; r < cfg_.horizon_superframes; ++r) {
      const double t = static_cast<double>(r) * bi_;
      if (r > 0 && cfg_.mobility_enabled) queue_.push({t, EventKind::kMobilityStep, 0, r});
      queue_.push({t, EventKind::kProtocolRound, 0, r});
    }
    for (const auto& w : net_.wbans) {
      const double first = std::fmod(w.superframe_offset, w.period());
      queue_.push({first < 0 ? first + w.period() : first, EventKind::kSuperframeBoundary, w.id, 0});
    }
    while (!queue_.empty()) {
      const Event e = queue_.pop();
      now_ = e.time;
      prune();
      dispatch(e);
    }
    return std::move(log_);
  }

 private:
  RoundRecord& record(std::size_t wban, double t) {
    auto r = static_cast<std::size_t>(std::max(0.0, std::floor(t / bi_ + kTimeEps)));
    r = std::min(r, cfg_.horizon_superframes - 1);
    return log_.records[r * net_.n() + wban];
  }

  double frame_energy() const { return dbm_to_mw(cfg_.scenario.tx_power_dbm) * cfg_.t_fr; }

  void dispatch(const Event& e) {
    switch (e.kind) {
      case EventKind::kMobilityStep: on_mobility(e.sensor); break;
      case EventKind::kProtocolRound: on_protocol_round(); break;
      case EventKind::kSuperframeBoundary: on_boundary(e.wban); break;
      case EventKind::kBeaconTx: on_beacon_tx(e.wban); break;
      case EventKind::kBeaconEnd: on_beacon_end(e.wban); break;
      case EventKind::kSlotStart: on_slot_start(e.wban, e.sensor); break;
      case EventKind::kFrameTx: on_frame_tx(e.wban, e.sensor); break;
      case EventKind::kFrameEnd: on_frame_end(e.wban, e.sensor); break;
    }
  }

  void prune() {
    if (++prune_counter_ % 64 != 0) return;
    const double keep_after = now_ - 4 * std::max({cfg_.t_fr, cfg_.t_b, bi_ / 1000});
    std::erase_if(ledger_, [&](const Tx& tx) { return tx.end < keep_after; });
  }

  void on_mobility(std::size_t round) {
    auto rng = make_stream(seed_, kMobilityStepStream, round);
    net_ = step_mobility(net_, bi_, rng(), cfg_.mobility);
  }

  void on_protocol_round() {
    switch (protocol_) {
      case ProtocolKind::kOs:
        break;
      case ProtocolKind::kOcaim: {
        OcaimOptions opt;
        opt.theta_db = cfg_.theta_db;
        opt.now = now_;
        patterns_ = run_ocaim_round(net_, cfg_.channel, codes_, opt).assignments;
        for (const auto& p : patterns_) record(p.wban, now_).codes_assigned += p.spread_slots();
        break;
      }
      case ProtocolKind::kSms: {
        const auto plan = run_sms_round(net_, cfg_.channel, cfg_.theta_db, cfg_.n_channels);
        for (const auto& [id, ch] : plan.channel) {
          auto& rec = record(id.wban, now_);
          if (ch != 0) ++rec.codes_assigned;
          if (channel_[id] != ch) {
            ++rec.channel_switches;
            rec.energy_mws += cfg_.switch_cost_frames * frame_energy();
          }
          channel_[id] = ch;
        }
        break;
      }
    }
  }

  void on_boundary(std::size_t w) {
    const Wban& wban = net_.wbans[w];
    WbanState& st = states_[w];
    st.sf_start = now_;
    st.beacon_ok = false;
    auto& rec = record(w, now_);
    for (auto& s : st.sensors) {
      rec.frames_dropped += s.buffer.size();
      s.buffer.assign(cfg_.nfrs, 0u);
      rec.frames_generated += cfg_.nfrs;
    }
    queue_.push({now_, EventKind::kBeaconTx, w, 0});
    const double next = now_ + wban.period();
    if (next < horizon_ - kTimeEps) queue_.push({next, EventKind::kSuperframeBoundary, w, 0});
  }

  void on_beacon_tx(std::size_t w) {
    const Wban& wban = net_.wbans[w];
    Tx tx;
    tx.start = now_;
    tx.end = now_ + cfg_.t_b;
    tx.wban = w;
    tx.source = SensorId{w, kBeaconSensor};
    tx.position = wban.coordinator;
    tx.power_dbm = cfg_.scenario.tx_power_dbm;
    ledger_.push_back(tx);
    record(w, now_).energy_mws += dbm_to_mw(cfg_.scenario.tx_power_dbm) * cfg_.t_b;
    queue_.push({tx.end, EventKind::kBeaconEnd, w, 0});
  }

  void on_beacon_end(std::size_t w) {
    WbanState& st = states_[w];
    const double start = now_ - cfg_.t_b;
    bool lost = false;
    for (const auto& tx : ledger_) {
      if (tx.wban == w || tx.channel != 0) continue;
      if (overlap(start, now_, tx.start, tx.end) > kTimeEps) {
        lost = true;
        break;
      }
    }
    auto& rec = record(w, start);
    ++rec.beacons_sent;
    if (lost) {
      ++rec.beacons_collided;
      return;
    }
    st.beacon_ok = true;
    const Wban& wban = net_.wbans[w];
    for (const auto& s : wban.sensors) {
      const double slot = st.sf_start + static_cast<double>(s.assigned_slot) * wban.slot_length;
      if (slot < horizon_ - kTimeEps)
        queue_.push({std::max(slot, now_), EventKind::kSlotStart, w, s.id.sensor});
    }
  }

  double slot_end(std::size_t w, std::size_t k) const {
    const Wban& wban = net_.wbans[w];
    return states_[w].sf_start +
           static_cast<double>(wban.sensors[k].assigned_slot + 1) * wban.slot_length;
  }

  void on_slot_start(std::size_t w, std::size_t k) {
    const WbanState& st = states_[w];
    // The beacon occupies the head of slot 0.
    const double first = std::max(now_, st.sf_start + cfg_.t_b);
    queue_.push({first, EventKind::kFrameTx, w, k});
  }

  void on_frame_tx(std::size_t w, std::size_t k) {
    SensorState& s = states_[w].sensors[k];
    if (s.buffer.empty() || now_ >= horizon_ - kTimeEps) return;
    if (now_ + cfg_.t_fr > slot_end(w, k) + kTimeEps) return;
    const Wban& wban = net_.wbans[w];
    const Sensor& sensor = wban.sensors[k];
    s.in_flight_retries = s.buffer.front();
    s.buffer.pop_front();

    Tx tx;
    tx.start = now_;
    tx.end = now_ + cfg_.t_fr;
    tx.wban = w;
    tx.source = sensor.id;
    tx.position = sensor.position;
    tx.power_dbm = sensor.tx_power_dbm;
    tx.channel = channel_.at(sensor.id);
    const auto& slot = patterns_[w].per_slot[sensor.assigned_slot];
    if (slot.spread) tx.code = slot.code;
    ledger_.push_back(tx);
    s.current = tx;

    auto& rec = record(w, now_);
    ++rec.frames_sent;
    rec.energy_mws += dbm_to_mw(sensor.tx_power_dbm) * cfg_.t_fr;
    if (tx.end > horizon_ + kTimeEps) {
      ++rec.frames_in_flight;
      s.current.reset();
      return;
    }
    queue_.push({tx.end, EventKind::kFrameEnd, w, k});
  }

  void on_frame_end(std::size_t w, std::size_t k) {
    SensorState& s = states_[w].sensors[k];
    const Tx tx = *s.current;
    s.current.reset();
    std::vector<Emission> interferers;
    for (const auto& other : ledger_) {
      if (other.wban == w || other.channel != tx.channel) continue;
      const double ov = overlap(tx.start, tx.end, other.start, other.end);
      if (ov <= kTimeEps) continue;
      interferers.push_back(
          Emission{other.source, other.position, other.power_dbm, other.code, ov / cfg_.t_fr});
    }
    const Emission signal{tx.source, tx.position, tx.power_dbm, tx.code, 1.0};
    const double db =
        sinr(net_.wbans[w].coordinator, signal, interferers, cfg_.channel, /*code_aware=*/true);

    auto& rec = record(w, tx.start);
    rec.sinr_min_db = rec.sinr_samples == 0 ? db : std::min(rec.sinr_min_db, db);
    rec.sinr_sum_db += db;
    ++rec.sinr_samples;
    if (db >= cfg_.capture_threshold_db) {
      ++rec.frames_delivered;
    } else {
      ++rec.frames_collided;
      if (s.in_flight_retries < cfg_.max_retries) s.buffer.push_front(s.in_flight_retries + 1);
    }
    const double next = now_ + cfg_.sifs;
    if (!s.buffer.empty() && next + cfg_.t_fr <= slot_end(w, k) + kTimeEps)
      queue_.push({next, EventKind::kFrameTx, w, k});
  }

  const SimConfig& cfg_;
  ProtocolKind protocol_;
  std::uint64_t seed_;
  NetworkState net_;
  CowhcSet codes_;
  std::vector<CodeAssignmentPattern> patterns_;
  std::map<SensorId, std::size_t> channel_;
  std::vector<WbanState> states_;
  std::vector<Tx> ledger_;
  EventQueue queue_;
  MetricsLog log_;
  double bi_ = 0.1;
  double horizon_ = 0;
  double now_ = 0;
  std::size_t prune_counter_ = 0;
};

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0;
  double acc = 0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0;
  double acc = 0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

RunSummary summarize_rounds(const MetricsLog& log, std::size_t first, std::size_t last) {
  RunSummary s;
  double sinr_sum = 0, energy = 0, codes = 0;
  std::size_t samples = 0, rounds = 0;
  bool have_min = false;
  std::size_t last_round = first;
  for (const auto& r : log.records) {
    if (r.round < first || r.round > last) continue;
    last_round = std::max(last_round, r.round);
    sinr_sum += r.sinr_sum_db;
    samples += r.sinr_samples;
    if (r.sinr_samples > 0) {
      s.min_sinr_db = have_min ? std::min(s.min_sinr_db, r.sinr_min_db) : r.sinr_min_db;
      have_min = true;
    }
    energy += r.energy_mws;
    codes += static_cast<double>(r.codes_assigned);
    s.beacons_sent += r.beacons_sent;
    s.beacons_collided += r.beacons_collided;
    s.frames_sent += r.frames_sent;
    s.frames_delivered += r.frames_delivered;
    s.frames_collided += r.frames_collided;
    s.frames_in_flight += r.frames_in_flight;
    s.channel_switches += r.channel_switches;
  }
  rounds = last_round >= first ? last_round - first + 1 : 0;
  s.mean_sinr_db = samples ? sinr_sum / static_cast<double>(samples) : 0;
  s.energy_mws_per_wban = log.n_wbans ? energy / static_cast<double>(log.n_wbans) : 0;
  const std::size_t judged = s.frames_delivered + s.frames_collided;
  s.fdr = judged ? static_cast<double>(s.frames_delivered) / static_cast<double>(judged) : 1;
  s.beacon_success = s.beacons_sent ? 1.0 - static_cast<double>(s.beacons_collided) /
                                               static_cast<double>(s.beacons_sent)
                                    : 1;
  s.codes_assigned_per_round = rounds ? codes / static_cast<double>(rounds) : 0;
  return s;
}

}  // namespace

bool operator<(const Event& a, const Event& b) {
  return std::tie(a.time, a.kind, a.wban, a.sensor) < std::tie(b.time, b.kind, b.wban, b.sensor);
}

Event EventQueue::pop() {
  Event e = heap_.top();
  heap_.pop();
  return e;
}

void SimConfig::validate() const {
  channel.validate();
  const auto& s = scenario;
  if (s.k_sensors == 0) throw ConfigError("scenario.k_sensors must be >= 1");
  if (!(s.beacon_interval > 0 && s.slot_length > 0))
    throw ConfigError("timing: beacon_interval and slot_length must be > 0");
  if (static_cast<double>(s.k_sensors) * s.slot_length > s.beacon_interval / 2 * (1 + 1e-12))
    throw ConfigError("timing: K * slot_length exceeds the active period BI/2");
  if (!(t_fr > 0 && t_b > 0 && sifs > 0)) throw ConfigError("timing: t_fr, t_b, sifs must be > 0");
  if (t_b + t_fr > s.slot_length)
    throw ConfigError("timing: beacon plus one frame must fit in slot 0");
  if (nfrs < 1) throw ConfigError("timing.nfrs must be >= 1");
  if (n_channels < 1) throw ConfigError("protocol.n_channels must be >= 1");
  if (switch_cost_frames < 0) throw ConfigError("protocol.switch_cost_frames must be >= 0");
  if (horizon_superframes == 0) throw ConfigError("run.horizon_superframes must be >= 1");
  if (warmup_superframes >= horizon_superframes)
    throw ConfigError("run.warmup_superframes must be below the horizon");
  if (!(box.hi.x > box.lo.x && box.hi.y > box.lo.y && box.hi.z > box.lo.z))
    throw ConfigError("scenario.box must have positive extent");
  if (mobility.min_speed < 0 || mobility.max_speed < mobility.min_speed)
    throw ConfigError("mobility speeds must satisfy 0 <= min <= max");
  if (network) {
    for (std::size_t i = 0; i < network->n(); ++i) {
      const auto& w = network->wbans[i];
      if (w.id != i) throw ConfigError("network: WBAN ids must be 0..N-1 in order");
      std::set<std::size_t> used;
      for (std::size_t k = 0; k < w.k(); ++k) {
        if (w.sensors[k].id.wban != i || w.sensors[k].id.sensor != k)
          throw ConfigError("network: sensor ids inconsistent in WBAN " + std::to_string(i + 1));
        if (!used.insert(w.sensors[k].assigned_slot).second)
          throw ConfigError("network: two sensors share a slot in WBAN " + std::to_string(i + 1));
      }
      if (static_cast<double>(w.slot_count()) * w.slot_length > w.beacon_interval / 2 * (1 + 1e-12))
        throw ConfigError("network: WBAN " + std::to_string(i + 1) +
                          " slots exceed the active period BI/2");
    }
  }
}

double RoundRecord::mean_sinr_db() const {
  return sinr_samples ? sinr_sum_db / static_cast<double>(sinr_samples)
                      : std::numeric_limits<double>::quiet_NaN();
}

MetricsLog& MetricsLog::merge(const MetricsLog& other) {
  // Both sides are already ordered by (round, wban); a linear merge keeps it so.
  const auto mid = static_cast<std::ptrdiff_t>(records.size());
  records.insert(records.end(), other.records.begin(), other.records.end());
  std::inplace_merge(records.begin(), records.begin() + mid, records.end(),
                     [](const RoundRecord& a, const RoundRecord& b) {
                       return std::tie(a.round, a.wban) < std::tie(b.round, b.wban);
                     });
  return *this;
}

RunSummary summarize(const MetricsLog& log) {
  return summarize_rounds(log, log.warmup_rounds, std::numeric_limits<std::size_t>::max());
}

MetricsLog run_simulation(const SimConfig& config, ProtocolKind protocol, std::uint64_t seed) {
  config.validate();
  return Simulator(config, protocol, seed).run();
}

BeaconEstimate measure_beacon_success(const MetricsLog& log) {
  const RunSummary s = summarize(log);
  BeaconEstimate e;
  e.attempts = s.beacons_sent;
  e.probability = s.beacon_success;
  if (e.attempts > 0)
    e.ci_half_width =
        1.96 * std::sqrt(e.probability * (1 - e.probability) / static_cast<double>(e.attempts));
  e.insufficient = e.attempts < kMinBeaconAttempts;
  return e;
}

AnalyticParams analytic_params(const SimConfig& c, std::size_t n_wbans) {
  AnalyticParams p;
  p.n_wbans = n_wbans;
  p.k_sensors = c.scenario.k_sensors;
  p.bi = c.scenario.beacon_interval;
  p.ts = c.scenario.slot_length;
  p.t_fr = c.t_fr;
  p.t_b = c.t_b;
  p.sifs = c.sifs;
  p.nfrs.assign(p.k_sensors, c.nfrs);
  return p;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNWbans: return "n_wbans";
    case SweepAxis::kTheta: return "theta";
    case SweepAxis::kTime: return "time";
  }
  return "?";
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "n_wbans") return SweepAxis::kNWbans;
  if (name == "theta") return SweepAxis::kTheta;
  if (name == "time") return SweepAxis::kTime;
  throw ArgumentError("unknown sweep axis '" + std::string(name) +
                      "' (expected n_wbans, theta or time)");
}

std::vector<SweepPoint> sweep(const SimConfig& base, SweepAxis axis,
                              const std::vector<double>& values,
                              const std::vector<ProtocolKind>& protocols,
                              const std::vector<std::uint64_t>& seeds, std::size_t workers) {
  std::vector<SweepPoint> points;
  if (protocols.empty() || values.empty()) return points;

  // One simulation per (value, protocol, seed); time sweeps share one run
  // per (protocol, seed) across all values.
  const bool time_axis = axis == SweepAxis::kTime;
  const std::size_t value_runs = time_axis ? 1 : values.size();
  struct Task {
    std::size_t value_idx, proto_idx, seed_idx;
  };
  std::vector<Task> tasks;
  for (std::size_t v = 0; v < value_runs; ++v)
    for (std::size_t p = 0; p < protocols.size(); ++p)
      for (std::size_t s = 0; s < seeds.size(); ++s) tasks.push_back({v, p, s});

  // results[task][value] summaries
  std::vector<std::vector<RunSummary>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const Task& t = tasks[i];
        SimConfig cfg = base;
        if (axis == SweepAxis::kNWbans) {
          if (cfg.network) throw ConfigError("n_wbans sweep requires a scattered scenario");
          cfg.scenario.n_wbans = static_cast<std::size_t>(values[t.value_idx]);
        } else if (axis == SweepAxis::kTheta) {
          cfg.theta_db = values[t.value_idx];
        }
        const MetricsLog log = run_simulation(cfg, protocols[t.proto_idx], seeds[t.seed_idx]);
        if (time_axis) {
          for (double v : values) {
            const auto r = static_cast<std::size_t>(v);
            results[i].push_back(summarize_rounds(log, r, r));
          }
        } else {
          results[i].push_back(summarize(log));
        }
      } catch (const ConfigError&) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      } catch (const std::exception& e) {
        // Keep the first failure and say which run produced it.
        const Task& t = tasks[i];
        std::string where = std::string(to_string(axis)) + "=" +
                            (time_axis ? std::string("*") : std::to_string(values[t.value_idx])) +
                            " protocol=" + std::string(to_string(protocols[t.proto_idx])) +
                            " seed=" + std::to_string(seeds[t.seed_idx]);
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::make_exception_ptr(Error(where + ": " + e.what()));
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(workers, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t v = 0; v < values.size(); ++v) {
    for (std::size_t p = 0; p < protocols.size(); ++p) {
      SweepPoint pt;
      pt.axis_value = values[v];
      pt.protocol = protocols[p];
      pt.seeds = seeds.size();
      for (std::size_t s = 0; s < seeds.size(); ++s) {
        const std::size_t task = ((time_axis ? 0 : v) * protocols.size() + p) * seeds.size() + s;
        pt.per_seed.push_back(results[task][time_axis ? v : 0]);
      }
      std::vector<double> sinr, energy, fdr, beacon;
      for (const auto& r : pt.per_seed) {
        sinr.push_back(r.mean_sinr_db);
        energy.push_back(r.energy_mws_per_wban);
        fdr.push_back(r.fdr);
        beacon.push_back(r.beacon_success);
      }
      pt.sinr_mean = mean_of(sinr);
      pt.sinr_std = sample_std(sinr, pt.sinr_mean);
      pt.energy_mean = mean_of(energy);
      pt.energy_std = sample_std(energy, pt.energy_mean);
      pt.fdr_mean = mean_of(fdr);
      pt.fdr_std = sample_std(fdr, pt.fdr_mean);
      pt.beacon_mean = mean_of(beacon);
      pt.beacon_std = sample_std(beacon, pt.beacon_mean);
      points.push_back(std::move(pt));
    }
  }
  return points;
}

}  // namespace wban
