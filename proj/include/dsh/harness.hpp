#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsh/core.hpp"
#include "dsh/hop.hpp"

namespace dsh {

/// Malformed input file. `line` is 1-based, 0 when not tied to a line.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line = 0) : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct TemporalEvent {
  std::int64_t time = 0;
  Hyperedge edge;
  Weight weight = 1;
};

struct LoadReport {
  std::size_t n = 0;     // distinct vertices over accepted events
  std::size_t m = 0;     // accepted events
  std::size_t rank = 0;  // largest accepted edge
  std::size_t rejected_duplicate_vertex = 0;
  std::size_t rejected_rank = 0;
};

struct LoadedStream {
  std::vector<TemporalEvent> events;  // sorted by time, stable
  LoadReport report;
};

/// Three parallel files: sizes, concatenated vertex ids, timestamps. Vertex
/// ids are remapped densely in order of first appearance. Simplices with a
/// repeated vertex or more than `rank_limit` vertices are dropped and counted.
LoadedStream load_benson(const std::string& nverts_path, const std::string& simplices_path,
                         const std::string& times_path, std::optional<std::size_t> rank_limit = std::nullopt);
/// `prefix` names PREFIX-nverts.txt, PREFIX-simplices.txt, PREFIX-times.txt.
LoadedStream load_benson_prefix(const std::string& prefix, std::optional<std::size_t> rank_limit = std::nullopt);

/// Lines `t w v1 ... vk`; blank lines and `#` comments are skipped.
LoadedStream load_events(std::istream& in, std::optional<std::size_t> rank_limit = std::nullopt);
LoadedStream load_events_file(const std::string& path, std::optional<std::size_t> rank_limit = std::nullopt);

struct WeightSpec {
  bool uniform = false;
  Weight lo = 1;
  Weight hi = 1;
  std::uint64_t seed = 0;
};

/// "unit" or "uniform:LO:HI:SEED". Throws ConfigError.
WeightSpec parse_weight_spec(const std::string& text);

/// Unit weights, or independent uniform integers in [lo, hi] drawn in event
/// order from the spec's seed. Throws UsageError when lo > hi or lo < 1.
std::vector<TemporalEvent> assign_weights(std::vector<TemporalEvent> events, const WeightSpec& spec);

enum class StreamMode { insert, window };
enum class Algo { udshp, wdshp, exact, greedy };

Algo parse_algo(const std::string& name);
std::string to_string(Algo algo);

struct RunConfig {
  StreamMode mode = StreamMode::insert;
  std::int64_t window = 0;
  std::int64_t report_interval = 1;
  Algo algo = Algo::udshp;
  double epsilon = 0.3;
  double delta = 0.5;
  double sampling_constant = 8.0;
  std::uint64_t seed = 0;
  bool dedupe_edges = false;
  bool timing = true;
  std::size_t oracle_limit = 20;
  std::optional<std::size_t> rank;
  std::optional<std::size_t> duplication;
  SubsetMode subset_mode = SubsetMode::best_of_levels;
};

struct ReportPoint {
  std::int64_t report_time = 0;
  std::optional<double> density_estimate;  // empty when the algorithm cannot answer
  std::optional<double> exact_density;
  std::optional<double> relative_error_pct;
  std::vector<VertexId> subset;
  std::size_t updates = 0;
  std::size_t live_edges = 0;
  std::optional<double> avg_update_us;
  std::optional<double> max_update_us;
  std::optional<double> query_us;
};

struct RunSummary {
  std::size_t reports = 0;
  std::size_t total_updates = 0;
  std::optional<double> avg_relative_error_pct;
  std::optional<double> max_relative_error_pct;
  std::optional<double> avg_update_us;
  std::optional<double> avg_query_us;
  std::size_t max_live_edges = 0;
};

struct RunResult {
  std::vector<ReportPoint> points;
  RunSummary summary;
};

/// Called at every report with the point and the live weighted graph.
using ReportObserver = std::function<void(const ReportPoint&, const WeightedHypergraph&)>;

/// Replays `events` (sorted by time) through the configured algorithm.
/// Reports fall on first_time + k * report_interval for intervals that saw
/// updates, plus one covering the final event. In window mode, events with
/// time <= t - window are deleted before each arrival at time t.
RunResult run_stream(const std::vector<TemporalEvent>& events, const RunConfig& config,
                     const ReportObserver& observer = {});

/// |estimate - exact| / exact * 100; empty when exact is missing or zero.
std::optional<double> relative_error_pct(std::optional<double> estimate, std::optional<double> exact);

/// Error statistics over points with exact values; update time as total time
/// over total updates. max_live_edges is the largest live count reported.
RunSummary summarize(const std::vector<ReportPoint>& points);

void write_csv(std::ostream& out, const std::vector<ReportPoint>& points);
std::string summary_json(const RunSummary& summary, const RunConfig& config, const LoadReport& load);

}  // namespace dsh
