#include "dsh/harness.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "dsh/oracle.hpp"
#include "dsh/udshp.hpp"
#include "dsh/wdshp.hpp"

namespace dsh {

namespace {

struct Token {
  std::int64_t value;
  std::size_t line;
};

std::int64_t parse_int(std::string_view text, std::size_t line, const std::string& file) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw FormatError(file + ":" + std::to_string(line) + ": expected an integer, got '" + std::string(text) + "'", line);
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<Token> read_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::vector<Token> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    for (std::string_view tok : split(line)) out.push_back({parse_int(tok, lineno, path), lineno});
  }
  return out;
}

// Dense ids in order of first appearance over accepted edges.
class Remapper {
 public:
  VertexId operator()(std::int64_t raw) {
    auto [it, inserted] = ids_.try_emplace(raw, static_cast<VertexId>(ids_.size()));
    return it->second;
  }
  std::size_t size() const { return ids_.size(); }

 private:
  std::unordered_map<std::int64_t, VertexId> ids_;
};

// Returns false when the raw simplex must be rejected; counts the reason.
bool accept(const std::vector<std::int64_t>& raw, std::optional<std::size_t> rank_limit, LoadReport& report) {
  std::vector<std::int64_t> sorted = raw;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    ++report.rejected_duplicate_vertex;
    return false;
  }
  if (rank_limit && raw.size() > *rank_limit) {
    ++report.rejected_rank;
    return false;
  }
  return true;
}

LoadedStream finish(std::vector<TemporalEvent> events, LoadReport report, std::size_t n) {
  std::stable_sort(events.begin(), events.end(),
                   [](const TemporalEvent& a, const TemporalEvent& b) { return a.time < b.time; });
  report.n = n;
  report.m = events.size();
  report.rank = 0;
  for (const auto& e : events) report.rank = std::max(report.rank, e.edge.size());
  return {std::move(events), report};
}

}  // namespace

LoadedStream load_benson(const std::string& nverts_path, const std::string& simplices_path,
                         const std::string& times_path, std::optional<std::size_t> rank_limit) {
  const std::vector<Token> sizes = read_tokens(nverts_path);
  const std::vector<Token> ids = read_tokens(simplices_path);
  const std::vector<Token> times = read_tokens(times_path);
  if (times.size() != sizes.size()) {
    const std::size_t k = std::min(times.size(), sizes.size());
    const bool times_short = times.size() < sizes.size();
    const std::size_t line = times_short ? (k < sizes.size() ? sizes[k].line : 0) : times[k].line;
    throw FormatError((times_short ? times_path : nverts_path) + ": " + std::to_string(times.size()) + " timestamps for " +
                          std::to_string(sizes.size()) + " simplices (first unmatched entry at line " +
                          std::to_string(line) + ")",
                      line);
  }

  LoadReport report;
  Remapper remap;
  std::vector<TemporalEvent> events;
  events.reserve(sizes.size());
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const std::int64_t s = sizes[k].value;
    if (s < 1) throw FormatError(nverts_path + ":" + std::to_string(sizes[k].line) + ": simplex size must be positive", sizes[k].line);
    if (cursor + static_cast<std::size_t>(s) > ids.size()) {
      throw FormatError(simplices_path + ": ends after " + std::to_string(ids.size()) + " ids, but " + nverts_path +
                            " line " + std::to_string(sizes[k].line) + " needs " + std::to_string(s) + " more",
                        sizes[k].line);
    }
    std::vector<std::int64_t> raw;
    raw.reserve(static_cast<std::size_t>(s));
    for (std::int64_t i = 0; i < s; ++i) raw.push_back(ids[cursor++].value);
    if (!accept(raw, rank_limit, report)) continue;
    std::vector<VertexId> mapped;
    mapped.reserve(raw.size());
    for (std::int64_t v : raw) mapped.push_back(remap(v));
    events.push_back({times[k].value, Hyperedge(std::move(mapped)), 1});
  }
  if (cursor != ids.size()) {
    throw FormatError(simplices_path + ":" + std::to_string(ids[cursor].line) + ": " +
                          std::to_string(ids.size() - cursor) + " ids left over after the last simplex",
                      ids[cursor].line);
  }
  return finish(std::move(events), report, remap.size());
}

LoadedStream load_benson_prefix(const std::string& prefix, std::optional<std::size_t> rank_limit) {
  return load_benson(prefix + "-nverts.txt", prefix + "-simplices.txt", prefix + "-times.txt", rank_limit);
}

LoadedStream load_events(std::istream& in, std::optional<std::size_t> rank_limit) {
  LoadReport report;
  Remapper remap;
  std::vector<TemporalEvent> events;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto tokens = split(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 3) throw FormatError("line " + std::to_string(lineno) + ": expected 't w v1 ... vk'", lineno);
    const std::int64_t t = parse_int(tokens[0], lineno, "events");
    const std::int64_t w = parse_int(tokens[1], lineno, "events");
    if (w < 1) throw FormatError("line " + std::to_string(lineno) + ": weight must be positive", lineno);
    std::vector<std::int64_t> raw;
    for (std::size_t i = 2; i < tokens.size(); ++i) raw.push_back(parse_int(tokens[i], lineno, "events"));
    if (!accept(raw, rank_limit, report)) continue;
    std::vector<VertexId> mapped;
    for (std::int64_t v : raw) mapped.push_back(remap(v));
    events.push_back({t, Hyperedge(std::move(mapped)), w});
  }
  return finish(std::move(events), report, remap.size());
}

LoadedStream load_events_file(const std::string& path, std::optional<std::size_t> rank_limit) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return load_events(in, rank_limit);
}

WeightSpec parse_weight_spec(const std::string& text) {
  if (text == "unit") return {};
  const auto bad = [&] { return ConfigError("weights must be 'unit' or 'uniform:LO:HI:SEED', got '" + text + "'"); };
  if (text.rfind("uniform:", 0) != 0) throw bad();
  std::vector<std::string> parts;
  std::stringstream ss(text.substr(8));
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw bad();
  WeightSpec spec;
  spec.uniform = true;
  try {
    spec.lo = parse_int(parts[0], 0, "weights");
    spec.hi = parse_int(parts[1], 0, "weights");
    std::int64_t seed = parse_int(parts[2], 0, "weights");
    spec.seed = static_cast<std::uint64_t>(seed);
  } catch (const FormatError&) {
    throw bad();
  }
  return spec;
}

std::vector<TemporalEvent> assign_weights(std::vector<TemporalEvent> events, const WeightSpec& spec) {
  if (!spec.uniform) {
    for (auto& e : events) e.weight = 1;
    return events;
  }
  if (spec.lo < 1 || spec.lo > spec.hi) throw UsageError("uniform weights need 1 <= lo <= hi");
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<Weight> dist(spec.lo, spec.hi);
  for (auto& e : events) e.weight = dist(rng);
  return events;
}

Algo parse_algo(const std::string& name) {
  if (name == "udshp") return Algo::udshp;
  if (name == "wdshp") return Algo::wdshp;
  if (name == "exact") return Algo::exact;
  if (name == "greedy") return Algo::greedy;
  throw ConfigError("unknown algorithm '" + name + "'");
}

std::string to_string(Algo algo) {
  switch (algo) {
    case Algo::udshp: return "udshp";
    case Algo::wdshp: return "wdshp";
    case Algo::exact: return "exact";
    case Algo::greedy: return "greedy";
  }
  return "?";
}

namespace {

struct Op {
  enum Kind { insert, erase, report } kind;
  std::size_t event = 0;  // insert/erase: event index; report: unused
  std::int64_t time = 0;  // report time
};

// The update schedule depends only on the events and config, so it is built
// once and replayed; the first pass also yields the live-edge bound.
std::vector<Op> build_schedule(const std::vector<TemporalEvent>& events, const RunConfig& cfg, std::size_t& max_live) {
  std::vector<Op> ops;
  max_live = 0;
  if (events.empty()) return ops;
  const std::int64_t origin = events.front().time;
  const std::int64_t step = cfg.report_interval;
  std::int64_t boundary = origin + step;
  std::size_t pending_updates = 0;

  std::set<std::pair<std::int64_t, std::size_t>> expiry;  // (stamp, event)
  std::unordered_map<std::size_t, std::int64_t> stamp;
  std::map<Hyperedge, std::size_t> live_by_edge;

  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::int64_t t = events[i].time;
    if (boundary <= t) {
      if (pending_updates > 0) ops.push_back({Op::report, 0, boundary});
      pending_updates = 0;
      boundary = origin + ((t - origin) / step + 1) * step;
    }
    if (cfg.mode == StreamMode::window) {
      while (!expiry.empty() && expiry.begin()->first <= t - cfg.window) {
        const std::size_t old = expiry.begin()->second;
        expiry.erase(expiry.begin());
        stamp.erase(old);
        if (cfg.dedupe_edges) live_by_edge.erase(events[old].edge);
        ops.push_back({Op::erase, old, 0});
        ++pending_updates;
      }
    }
    if (cfg.dedupe_edges) {
      auto it = live_by_edge.find(events[i].edge);
      if (it != live_by_edge.end()) {
        const std::size_t kept = it->second;
        expiry.erase({stamp[kept], kept});
        stamp[kept] = t;
        expiry.insert({t, kept});
        continue;
      }
      live_by_edge.emplace(events[i].edge, i);
    }
    expiry.insert({t, i});
    stamp[i] = t;
    ops.push_back({Op::insert, i, 0});
    ++pending_updates;
    max_live = std::max(max_live, stamp.size());
  }
  if (pending_updates > 0) ops.push_back({Op::report, 0, boundary});
  return ops;
}

struct Answer {
  std::optional<double> density;
  std::vector<VertexId> subset;
};

class Engine {
 public:
  virtual ~Engine() = default;
  virtual void insert(std::size_t id, const TemporalEvent& e) = 0;
  virtual void erase(std::size_t id) = 0;
  virtual Answer query(const WeightedHypergraph& live) = 0;
};

class UdshpEngine final : public Engine {
 public:
  explicit UdshpEngine(UdshpConfig cfg) : impl_(cfg) {}
  void insert(std::size_t id, const TemporalEvent& e) override {
    auto& hs = handles_[id];
    for (Weight k = 0; k < e.weight; ++k) hs.push_back(impl_.insert(e.edge));
  }
  void erase(std::size_t id) override {
    auto it = handles_.find(id);
    for (EdgeHandle h : it->second) impl_.erase(h);
    handles_.erase(it);
  }
  Answer query(const WeightedHypergraph&) override {
    if (impl_.empty()) return {0.0, {}};
    return {impl_.max_density(), impl_.densest_subset()};
  }

 private:
  Udshp impl_;
  std::unordered_map<std::size_t, std::vector<EdgeHandle>> handles_;
};

class WdshpEngine final : public Engine {
 public:
  explicit WdshpEngine(WdshpConfig cfg) : impl_(cfg) {}
  void insert(std::size_t id, const TemporalEvent& e) override { handles_[id] = impl_.insert(e.edge, e.weight); }
  void erase(std::size_t id) override {
    impl_.erase(handles_.at(id));
    handles_.erase(id);
  }
  Answer query(const WeightedHypergraph&) override {
    if (impl_.empty()) return {0.0, {}};
    Answer a{impl_.max_density(), {}};
    try {
      a.subset = impl_.densest_subset();
    } catch (const DomainError&) {
    }
    return a;
  }

 private:
  Wdshp impl_;
  std::unordered_map<std::size_t, EdgeHandle> handles_;
};

// Static baselines recompute from the live graph at each report.
class StaticEngine final : public Engine {
 public:
  explicit StaticEngine(bool exact) : exact_(exact) {}
  void insert(std::size_t, const TemporalEvent&) override {}
  void erase(std::size_t) override {}
  Answer query(const WeightedHypergraph& live) override {
    if (live.empty()) return {0.0, {}};
    if (!exact_) {
      const OracleResult r = greedy_peel(live);
      return {r.best_density.to_double(), r.best_set};
    }
    if (live.support().size() > kOracleMaxSupport) return {};
    const OracleResult r = exact_densest_bruteforce(live);
    return {r.best_density.to_double(), r.best_set};
  }

 private:
  bool exact_;
};

double micros_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RunResult run_stream(const std::vector<TemporalEvent>& events, const RunConfig& cfg, const ReportObserver& observer) {
  if (cfg.report_interval <= 0) throw ConfigError("report interval must be positive");
  if (cfg.mode == StreamMode::window && cfg.window <= 0) throw ConfigError("window mode needs a positive window length");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].time < events[i - 1].time) throw UsageError("events must be sorted by time");
  }

  RunResult result;
  std::size_t max_live = 0;
  const std::vector<Op> ops = build_schedule(events, cfg, max_live);
  if (ops.empty()) {
    result.summary = summarize(result.points);
    return result;
  }

  std::size_t n = 0;
  std::size_t rank = 0;
  Weight w_max = 1;
  for (const auto& e : events) {
    n = std::max<std::size_t>(n, e.edge.vertices().back() + 1);
    rank = std::max(rank, e.edge.size());
    w_max = std::max(w_max, e.weight);
  }
  if (cfg.rank) {
    if (*cfg.rank < rank) throw ConfigError("an event exceeds the configured rank");
    rank = *cfg.rank;
  }

  std::unique_ptr<Engine> engine;
  switch (cfg.algo) {
    case Algo::udshp: {
      UdshpConfig uc;
      uc.n = n;
      uc.m_bound = std::max<std::size_t>(max_live, 1) * static_cast<std::size_t>(w_max);
      uc.rank = rank;
      uc.epsilon = cfg.epsilon;
      uc.duplication_override = cfg.duplication;
      uc.subset_mode = cfg.subset_mode;
      engine = std::make_unique<UdshpEngine>(uc);
      break;
    }
    case Algo::wdshp: {
      WdshpConfig wc;
      wc.n = n;
      wc.m_bound = std::max<std::size_t>(max_live, 1);
      wc.rank = rank;
      wc.delta = cfg.delta;
      wc.w_max = w_max;
      wc.c = cfg.sampling_constant;
      wc.rng_seed = cfg.seed;
      wc.duplication_override = cfg.duplication;
      wc.subset_mode = cfg.subset_mode;
      engine = std::make_unique<WdshpEngine>(wc);
      break;
    }
    case Algo::exact: engine = std::make_unique<StaticEngine>(true); break;
    case Algo::greedy: engine = std::make_unique<StaticEngine>(false); break;
  }

  WeightedHypergraph live(n, rank);
  std::unordered_map<std::size_t, EdgeHandle> live_handle;
  std::size_t interval_updates = 0;
  double interval_total = 0;
  double interval_max = 0;

  for (const Op& op : ops) {
    if (op.kind == Op::report) {
      ReportPoint p;
      p.report_time = op.time;
      p.updates = interval_updates;
      p.live_edges = live.edge_count();
      const auto q0 = std::chrono::steady_clock::now();
      Answer a = engine->query(live);
      const double query_us = micros_since(q0);
      p.density_estimate = a.density;
      p.subset = std::move(a.subset);
      if (live.empty()) {
        p.exact_density = 0.0;
      } else if (cfg.algo == Algo::exact) {
        p.exact_density = p.density_estimate;
      } else if (live.support().size() <= std::min(cfg.oracle_limit, kOracleMaxSupport)) {
        p.exact_density = exact_densest_bruteforce(live).best_density.to_double();
      }
      p.relative_error_pct = relative_error_pct(p.density_estimate, p.exact_density);
      if (cfg.timing) {
        p.query_us = query_us;
        if (interval_updates > 0) {
          p.avg_update_us = interval_total / static_cast<double>(interval_updates);
          p.max_update_us = interval_max;
        }
      }
      if (observer) observer(p, live);
      result.points.push_back(std::move(p));
      interval_updates = 0;
      interval_total = interval_max = 0;
      continue;
    }

    const TemporalEvent& e = events[op.event];
    const auto t0 = std::chrono::steady_clock::now();
    if (op.kind == Op::insert) {
      engine->insert(op.event, e);
    } else {
      engine->erase(op.event);
    }
    const double us = micros_since(t0);
    if (op.kind == Op::insert) {
      live_handle.emplace(op.event, live.add(e.edge, e.weight));
    } else {
      live.remove(live_handle.at(op.event));
      live_handle.erase(op.event);
    }
    ++interval_updates;
    interval_total += us;
    interval_max = std::max(interval_max, us);
  }

  result.summary = summarize(result.points);
  result.summary.max_live_edges = max_live;
  return result;
}

std::optional<double> relative_error_pct(std::optional<double> estimate, std::optional<double> exact) {
  if (!estimate || !exact || *exact == 0.0) return std::nullopt;
  return std::abs(*estimate - *exact) / *exact * 100.0;
}

RunSummary summarize(const std::vector<ReportPoint>& points) {
  RunSummary s;
  s.reports = points.size();
  double err_sum = 0;
  std::size_t err_count = 0;
  double time_total = 0;
  bool timed = !points.empty();
  double query_total = 0;
  std::size_t query_count = 0;
  for (const auto& p : points) {
    s.total_updates += p.updates;
    s.max_live_edges = std::max(s.max_live_edges, p.live_edges);
    if (p.relative_error_pct) {
      err_sum += *p.relative_error_pct;
      ++err_count;
      s.max_relative_error_pct = std::max(s.max_relative_error_pct.value_or(0.0), *p.relative_error_pct);
    }
    if (p.updates > 0) {
      if (p.avg_update_us) {
        time_total += *p.avg_update_us * static_cast<double>(p.updates);
      } else {
        timed = false;
      }
    }
    if (p.query_us) {
      query_total += *p.query_us;
      ++query_count;
    }
  }
  if (err_count > 0) s.avg_relative_error_pct = err_sum / static_cast<double>(err_count);
  if (timed && s.total_updates > 0) s.avg_update_us = time_total / static_cast<double>(s.total_updates);
  if (query_count > 0) s.avg_query_us = query_total / static_cast<double>(query_count);
  return s;
}

namespace {

std::string fmt_opt(const std::optional<double>& v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

void write_csv(std::ostream& out, const std::vector<ReportPoint>& points) {
  out << "report_time,density_estimate,exact_density,relative_error_pct,subset_size,updates,avg_update_us,max_update_us\n";
  for (const auto& p : points) {
    out << p.report_time << ',' << fmt_opt(p.density_estimate) << ',' << fmt_opt(p.exact_density) << ','
        << fmt_opt(p.relative_error_pct) << ',' << p.subset.size() << ',' << p.updates << ',' << fmt_opt(p.avg_update_us)
        << ',' << fmt_opt(p.max_update_us) << '\n';
  }
}

std::string summary_json(const RunSummary& s, const RunConfig& cfg, const LoadReport& load) {
  nlohmann::json j;
  j["algo"] = to_string(cfg.algo);
  j["mode"] = cfg.mode == StreamMode::insert ? "insert" : "window";
  if (cfg.mode == StreamMode::window) j["window"] = cfg.window;
  j["report_interval"] = cfg.report_interval;
  if (cfg.algo == Algo::wdshp) {
    j["delta"] = cfg.delta;
  } else if (cfg.algo == Algo::udshp) {
    j["epsilon"] = cfg.epsilon;
  }
  j["seed"] = cfg.seed;
  j["dataset"] = {{"n", load.n},
                  {"m", load.m},
                  {"rank", load.rank},
                  {"rejected_duplicate_vertex", load.rejected_duplicate_vertex},
                  {"rejected_rank", load.rejected_rank}};
  j["reports"] = s.reports;
  j["total_updates"] = s.total_updates;
  j["max_live_edges"] = s.max_live_edges;
  j["avg_relative_error_pct"] = opt_json(s.avg_relative_error_pct);
  j["max_relative_error_pct"] = opt_json(s.max_relative_error_pct);
  j["avg_update_us"] = cfg.timing ? opt_json(s.avg_update_us) : nlohmann::json(nullptr);
  j["avg_query_us"] = cfg.timing ? opt_json(s.avg_query_us) : nlohmann::json(nullptr);
  return j.dump(2) + "\n";
}

}  // namespace dsh
