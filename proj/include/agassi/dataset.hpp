#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "agassi/evolution.hpp"
#include "agassi/hamiltonian.hpp"
#include "agassi/phase.hpp"
#include "json.hpp"

namespace agassi {

/// Connected correlator C_ab(i,k); sites are 1-based.
struct Observable {
  int i = 1;
  int k = 2;
  Axis alpha = Axis::Z;
  Axis beta = Axis::Z;
};

/// "z(1,2)" style name; same-axis only prints one letter, otherwise "xz(1,4)".
std::string to_string(const Observable& o);
Observable observable_from_string(const std::string& text);

enum class EvolutionMode { Exact, Trotter };

struct SeriesConfig {
  Observable observable;
  std::string state{kDefaultState};
  EvolutionMode mode = EvolutionMode::Exact;
  int n_trotter = 6;  ///< used in Trotter mode only
  int count = 100;
  double dt = 0.1;
  double epsilon = 1.0;
  int j = 2;

  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
  /// "exact" or "trotter:<n>".
  std::string mode_string() const;
  void set_mode(const std::string& text);
  std::vector<double> times() const { return time_grid(count, dt); }
};

void to_json(nlohmann::json& out, const SeriesConfig& cfg);
void from_json(const nlohmann::json& in, SeriesConfig& cfg);

/// 64-bit FNV-1a of a string, printed as 16 hex digits by hash_hex.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

/// Hash of the canonical JSON form of the feature-generating config.
std::string config_hash(const SeriesConfig& cfg);

/// Correlator sampled on cfg.times() after evolving cfg.state under H at the
/// given control parameters.
std::vector<double> generate_series(const ScaledParams& point,
                                    const SeriesConfig& cfg);
/// Same, reusing precomputed Hamiltonian components (basis.j() must equal
/// cfg.j).
std::vector<double> generate_series(const ScaledParams& point,
                                    const SeriesConfig& cfg,
                                    const HamiltonianBasis& basis);

struct DatasetRow {
  ScaledParams point;
  PhaseLabel label;
  std::vector<double> features;
};

struct Dataset {
  SeriesConfig config;
  std::uint64_t seed = 0;
  /// Extra provenance lines (key, value) written after the fixed ones.
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<DatasetRow> rows;

  std::size_t size() const { return rows.size(); }
  std::size_t feature_count() const {
    return rows.empty() ? 0 : rows.front().features.size();
  }
};

/// Called after each finished point with (done, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// One row per mesh point in mesh order. Points are spread over `threads`
/// workers (0 = hardware concurrency); the result does not depend on the
/// thread count. A failing point aborts the build with a message naming
/// the point and the number of rows completed.
Dataset build_dataset(std::span<const PhasePoint> mesh, const SeriesConfig& cfg,
                      unsigned threads = 0, const ProgressFn& progress = {});

/// CSV with "#" provenance lines, header chi,sigma,lambda,label,boundary,
/// c_001.. and %.17g numbers.
void write_dataset_csv(std::ostream& out, const Dataset& ds);
void write_dataset_csv(const std::string& path, const Dataset& ds);
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::string& path);

struct SplitSpec {
  double train = 0.9;
  double val = 0.0;
  double test = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Row indices of each part. Sizes: test = floor(test * n),
/// val = floor(val * n), train takes the rest.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

/// Seeded Fisher-Yates shuffle of 0..n-1, then contiguous train/val/test
/// slices. Throws if a part with nonzero fraction ends up empty.
Split split_indices(std::size_t n, const SplitSpec& spec);

nlohmann::json split_manifest(const Split& split, const SplitSpec& spec,
                              std::size_t n_rows);
Split split_from_manifest(const nlohmann::json& manifest);

/// Rows gathered into a dense row-major feature matrix.
struct LabeledSet {
  std::size_t n_features = 0;
  std::vector<double> x;
  std::vector<PhaseLabel> labels;
  std::vector<ScaledParams> points;
  bool standardized = false;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t r) const {
    return {x.data() + r * n_features, n_features};
  }
};

LabeledSet gather(const Dataset& ds, std::span<const std::size_t> indices);
LabeledSet gather(const Dataset& ds);

/// Per-feature z-scoring with statistics from training rows only. Columns
/// whose standard deviation is at most kMinScale pass through unchanged.
class Standardizer {
 public:
  static constexpr double kMinScale = 1e-12;

  Standardizer() = default;
  static Standardizer fit(const LabeledSet& train);

  bool fitted() const { return !mean_.empty(); }
  std::size_t n_features() const { return mean_.size(); }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& scale() const { return scale_; }

  /// Throws if `set` is already standardized or has a different width.
  void apply(LabeledSet& set) const;
  /// Transforms one raw feature vector in place (no guard).
  void apply_row(std::span<double> features) const;

  nlohmann::json to_json() const;
  static Standardizer from_json(const nlohmann::json& j);

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;  ///< 1 for passthrough columns
};

}  // namespace agassi
