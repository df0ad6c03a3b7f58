#include "agassi/dataset.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "agassi/grouping.hpp"

namespace agassi {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw std::runtime_error("dataset line " + std::to_string(line_no) +
                             ": bad number '" + s + "'");
  }
  return v;
}

constexpr const char* kMagic = "agassi-dataset 1";

}  // namespace

std::string to_string(const Observable& o) {
  std::string axes;
  axes += to_char(o.alpha);
  if (o.beta != o.alpha) axes += to_char(o.beta);
  return axes + "(" + std::to_string(o.i) + "," + std::to_string(o.k) + ")";
}

Observable observable_from_string(const std::string& text) {
  const auto open = text.find('(');
  const auto comma = text.find(',', open);
  const auto close = text.find(')', comma);
  if (open == std::string::npos || comma == std::string::npos ||
      close == std::string::npos || close + 1 != text.size() || open < 1 ||
      open > 2) {
    throw std::invalid_argument("observable '" + text +
                                "': expected e.g. z(1,2) or xz(1,4)");
  }
  Observable o;
  o.alpha = axis_from_char(text[0]);
  o.beta = open == 2 ? axis_from_char(text[1]) : o.alpha;
  try {
    o.i = std::stoi(text.substr(open + 1, comma - open - 1));
    o.k = std::stoi(text.substr(comma + 1, close - comma - 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("observable '" + text + "': bad site index");
  }
  return o;
}

void SeriesConfig::validate() const {
  if (j != 1 && j != 2) throw std::invalid_argument("SeriesConfig: j must be 1 or 2");
  const int n = 4 * j;
  if (static_cast<int>(state.size()) != n) {
    throw std::invalid_argument("SeriesConfig: state '" + state + "' needs " +
                                std::to_string(n) + " sites");
  }
  const auto& o = observable;
  if (o.i < 1 || o.i > n || o.k < 1 || o.k > n || o.i == o.k) {
    throw std::invalid_argument("SeriesConfig: observable sites must be distinct in 1.." +
                                std::to_string(n));
  }
  if (count < 1) throw std::invalid_argument("SeriesConfig: count must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("SeriesConfig: dt must be positive");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("SeriesConfig: epsilon must be positive");
  if (mode == EvolutionMode::Trotter && n_trotter < 1) {
    throw std::invalid_argument("SeriesConfig: n_trotter must be >= 1");
  }
}

std::string SeriesConfig::mode_string() const {
  return mode == EvolutionMode::Exact ? "exact"
                                      : "trotter:" + std::to_string(n_trotter);
}

void SeriesConfig::set_mode(const std::string& text) {
  if (text == "exact") {
    mode = EvolutionMode::Exact;
    return;
  }
  if (text.rfind("trotter:", 0) == 0) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(text.substr(8), &used);
      if (used == text.size() - 8 && n >= 1) {
        mode = EvolutionMode::Trotter;
        n_trotter = n;
        return;
      }
    } catch (const std::exception&) {
    }
  }
  throw std::invalid_argument("mode '" + text + "': expected exact or trotter:<n>");
}

void to_json(nlohmann::json& out, const SeriesConfig& cfg) {
  out = nlohmann::json{{"observable", to_string(cfg.observable)},
                       {"state", cfg.state},
                       {"mode", cfg.mode_string()},
                       {"count", cfg.count},
                       {"dt", cfg.dt},
                       {"epsilon", cfg.epsilon},
                       {"j", cfg.j}};
}

void from_json(const nlohmann::json& in, SeriesConfig& cfg) {
  SeriesConfig c;
  if (in.contains("observable")) {
    c.observable = observable_from_string(in.at("observable").get<std::string>());
  }
  if (in.contains("state")) c.state = in.at("state").get<std::string>();
  if (in.contains("mode")) c.set_mode(in.at("mode").get<std::string>());
  if (in.contains("count")) c.count = in.at("count").get<int>();
  if (in.contains("dt")) c.dt = in.at("dt").get<double>();
  if (in.contains("epsilon")) c.epsilon = in.at("epsilon").get<double>();
  if (in.contains("j")) c.j = in.at("j").get<int>();
  c.validate();
  cfg = c;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const SeriesConfig& cfg) {
  // nlohmann::json objects are key-sorted, so dump() is canonical.
  return hash_hex(fnv1a64(nlohmann::json(cfg).dump()));
}

std::vector<double> generate_series(const ScaledParams& point,
                                    const SeriesConfig& cfg) {
  return generate_series(point, cfg, HamiltonianBasis(cfg.j));
}

std::vector<double> generate_series(const ScaledParams& point,
                                    const SeriesConfig& cfg,
                                    const HamiltonianBasis& basis) {
  cfg.validate();
  if (basis.j() != cfg.j) {
    throw std::invalid_argument("generate_series: basis built for another j");
  }
  try {
    const PauliSum h = basis.at(scale_params(point, cfg.epsilon, cfg.j));
    const StateVector psi0 = basis_state(cfg.state);
    const auto times = cfg.times();
    std::vector<StateVector> states;
    if (cfg.mode == EvolutionMode::Exact) {
      states = ExactPropagator(h).evolve(psi0, times);
    } else {
      const auto groups = partition_commuting(h);
      states = TrotterPropagator(h.n_qubits(), groups)
                   .evolve(psi0, times, cfg.n_trotter);
    }
    const auto& o = cfg.observable;
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& psi : states) {
      out.push_back(correlation(psi, o.i, o.k, o.alpha, o.beta));
    }
    return out;
  } catch (const std::exception& e) {
    throw std::runtime_error("series at (chi, Sigma, Lambda) = (" +
                             fmt17(point.chi) + ", " + fmt17(point.sigma) + ", " +
                             fmt17(point.lambda) + "): " + e.what());
  }
}

Dataset build_dataset(std::span<const PhasePoint> mesh, const SeriesConfig& cfg,
                      unsigned threads, const ProgressFn& progress) {
  cfg.validate();
  Dataset ds;
  ds.config = cfg;
  ds.rows.resize(mesh.size());
  const HamiltonianBasis basis(cfg.j);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(1, mesh.size())));

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::string failure;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= mesh.size()) return;
      try {
        auto& row = ds.rows[i];
        row.point = mesh[i].params;
        row.label = mesh[i].label;
        row.features = generate_series(mesh[i].params, cfg, basis);
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (!failed.exchange(true)) {
          failure = "point " + std::to_string(i) + ": " + e.what();
        }
        return;
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(mu);
        progress(d, mesh.size());
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed) {
    throw std::runtime_error("build_dataset aborted after " +
                             std::to_string(done.load()) + " of " +
                             std::to_string(mesh.size()) + " points; " + failure);
  }
  return ds;
}

void write_dataset_csv(std::ostream& out, const Dataset& ds) {
  const std::size_t nf = ds.feature_count();
  out << "# " << kMagic << '\n';
  out << "# config " << nlohmann::json(ds.config).dump() << '\n';
  out << "# config_hash " << config_hash(ds.config) << '\n';
  out << "# seed " << ds.seed << '\n';
  out << "# rows " << ds.rows.size() << '\n';
  for (const auto& [k, v] : ds.notes) out << "# " << k << ' ' << v << '\n';
  out << "chi,sigma,lambda,label,boundary";
  for (std::size_t c = 1; c <= nf; ++c) {
    char buf[16];
    std::snprintf(buf, sizeof buf, ",c_%03zu", c);
    out << buf;
  }
  out << '\n';
  for (const auto& r : ds.rows) {
    if (r.features.size() != nf) {
      throw std::logic_error("write_dataset_csv: ragged feature rows");
    }
    out << fmt17(r.point.chi) << ',' << fmt17(r.point.sigma) << ','
        << fmt17(r.point.lambda) << ',' << to_string(r.label.primary) << ','
        << encode_boundary(r.label.boundary);
    for (const double v : r.features) out << ',' << fmt17(v);
    out << '\n';
  }
}

void write_dataset_csv(const std::string& path, const Dataset& ds) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  write_dataset_csv(f, ds);
  if (!f) throw std::runtime_error("write failed: " + path);
}

Dataset read_dataset_csv(std::istream& in) {
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  bool have_magic = false;
  bool have_config = false;
  std::size_t n_features = 0;
  bool have_header = false;
  long long declared_rows = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.size() > 2 ? line.substr(2) : "";
      const auto sp = body.find(' ');
      const std::string key = body.substr(0, sp);
      const std::string value = sp == std::string::npos ? "" : body.substr(sp + 1);
      if (body == kMagic) {
        have_magic = true;
      } else if (key == "config") {
        ds.config = nlohmann::json::parse(value).get<SeriesConfig>();
        have_config = true;
      } else if (key == "seed") {
        ds.seed = std::stoull(value);
      } else if (key == "rows") {
        declared_rows = std::stoll(value);
      } else if (key != "config_hash") {
        ds.notes.emplace_back(key, value);
      }
      continue;
    }
    const auto cells = split_csv(line);
    if (!have_header) {
      if (cells.size() < 5 || cells[0] != "chi" || cells[3] != "label" ||
          cells[4] != "boundary") {
        throw std::runtime_error("dataset line " + std::to_string(line_no) +
                                 ": unexpected header");
      }
      n_features = cells.size() - 5;
      have_header = true;
      continue;
    }
    if (cells.size() != n_features + 5) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) +
                               ": expected " + std::to_string(n_features + 5) +
                               " cells, got " + std::to_string(cells.size()));
    }
    DatasetRow r;
    r.point = {parse_double(cells[0], line_no), parse_double(cells[1], line_no),
               parse_double(cells[2], line_no)};
    r.label.primary = phase_from_string(cells[3]);
    r.label.boundary = decode_boundary(cells[4]);
    r.features.reserve(n_features);
    for (std::size_t c = 0; c < n_features; ++c) {
      r.features.push_back(parse_double(cells[5 + c], line_no));
    }
    ds.rows.push_back(std::move(r));
  }
  if (!have_magic || !have_config || !have_header) {
    throw std::runtime_error("not an agassi dataset (missing provenance or header)");
  }
  if (declared_rows >= 0 && static_cast<std::size_t>(declared_rows) != ds.rows.size()) {
    throw std::runtime_error("dataset truncated: header declares " +
                             std::to_string(declared_rows) + " rows, found " +
                             std::to_string(ds.rows.size()));
  }
  return ds;
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  try {
    return read_dataset_csv(f);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void SplitSpec::validate() const {
  for (const double f : {train, val, test}) {
    if (!(f >= 0.0) || f > 1.0) {
      throw std::invalid_argument("split fractions must lie in [0, 1]");
    }
  }
  if (std::abs(train + val + test - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must sum to 1");
  }
}

Split split_indices(std::size_t n, const SplitSpec& spec) {
  spec.validate();
  const auto n_test = static_cast<std::size_t>(std::floor(spec.test * n));
  const auto n_val = static_cast<std::size_t>(std::floor(spec.val * n));
  const std::size_t n_train = n - n_test - n_val;
  if ((spec.train > 0 && n_train == 0) || (spec.val > 0 && n_val == 0) ||
      (spec.test > 0 && n_test == 0)) {
    throw std::invalid_argument("split of " + std::to_string(n) +
                                " rows leaves a requested part empty");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  // Explicit Fisher-Yates: std::shuffle's draw sequence is unspecified.
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t r = static_cast<std::size_t>(rng() % i);
    std::swap(perm[i - 1], perm[r]);
  }
  Split s;
  s.train.assign(perm.begin(), perm.begin() + n_train);
  s.val.assign(perm.begin() + n_train, perm.begin() + n_train + n_val);
  s.test.assign(perm.begin() + n_train + n_val, perm.end());
  return s;
}

nlohmann::json split_manifest(const Split& split, const SplitSpec& spec,
                              std::size_t n_rows) {
  return {{"seed", spec.seed},
          {"fractions", {spec.train, spec.val, spec.test}},
          {"rows", n_rows},
          {"train", split.train},
          {"val", split.val},
          {"test", split.test}};
}

Split split_from_manifest(const nlohmann::json& m) {
  Split s;
  s.train = m.at("train").get<std::vector<std::size_t>>();
  s.val = m.at("val").get<std::vector<std::size_t>>();
  s.test = m.at("test").get<std::vector<std::size_t>>();
  const auto n = m.at("rows").get<std::size_t>();
  std::vector<char> seen(n, 0);
  for (const auto* part : {&s.train, &s.val, &s.test}) {
    for (const auto i : *part) {
      if (i >= n || seen[i]) throw std::runtime_error("split manifest is not a partition");
      seen[i] = 1;
    }
  }
  if (s.train.size() + s.val.size() + s.test.size() != n) {
    throw std::runtime_error("split manifest does not cover every row");
  }
  return s;
}

LabeledSet gather(const Dataset& ds, std::span<const std::size_t> indices) {
  LabeledSet out;
  out.n_features = ds.feature_count();
  out.x.reserve(indices.size() * out.n_features);
  for (const auto i : indices) {
    const auto& r = ds.rows.at(i);
    out.x.insert(out.x.end(), r.features.begin(), r.features.end());
    out.labels.push_back(r.label);
    out.points.push_back(r.point);
  }
  return out;
}

LabeledSet gather(const Dataset& ds) {
  std::vector<std::size_t> all(ds.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return gather(ds, all);
}

Standardizer Standardizer::fit(const LabeledSet& train) {
  if (train.size() == 0 || train.n_features == 0) {
    throw std::invalid_argument("Standardizer::fit: empty training set");
  }
  if (train.standardized) {
    throw std::logic_error("Standardizer::fit: training set already standardized");
  }
  const std::size_t nf = train.n_features;
  const double n = static_cast<double>(train.size());
  Standardizer s;
  s.mean_.assign(nf, 0.0);
  s.scale_.assign(nf, 1.0);
  for (std::size_t r = 0; r < train.size(); ++r) {
    const auto row = train.row(r);
    for (std::size_t c = 0; c < nf; ++c) s.mean_[c] += row[c];
  }
  for (auto& m : s.mean_) m /= n;
  std::vector<double> var(nf, 0.0);
  for (std::size_t r = 0; r < train.size(); ++r) {
    const auto row = train.row(r);
    for (std::size_t c = 0; c < nf; ++c) {
      const double d = row[c] - s.mean_[c];
      var[c] += d * d;
    }
  }
  for (std::size_t c = 0; c < nf; ++c) {
    const double sd = std::sqrt(var[c] / n);
    if (sd > kMinScale) {
      s.scale_[c] = sd;
    } else {
      s.mean_[c] = 0.0;  // passthrough
    }
  }
  return s;
}

void Standardizer::apply_row(std::span<double> f) const {
  if (f.size() != mean_.size()) {
    throw std::invalid_argument("Standardizer: feature width " +
                                std::to_string(f.size()) + ", expected " +
                                std::to_string(mean_.size()));
  }
  for (std::size_t c = 0; c < f.size(); ++c) f[c] = (f[c] - mean_[c]) / scale_[c];
}

void Standardizer::apply(LabeledSet& set) const {
  if (!fitted()) throw std::logic_error("Standardizer::apply: not fitted");
  if (set.standardized) {
    throw std::logic_error("Standardizer::apply: set is already standardized");
  }
  if (set.n_features != mean_.size()) {
    throw std::invalid_argument("Standardizer: feature width mismatch");
  }
  for (std::size_t r = 0; r < set.size(); ++r) {
    apply_row({set.x.data() + r * set.n_features, set.n_features});
  }
  set.standardized = true;
}

nlohmann::json Standardizer::to_json() const {
  return {{"mean", mean_}, {"scale", scale_}};
}

Standardizer Standardizer::from_json(const nlohmann::json& j) {
  Standardizer s;
  s.mean_ = j.at("mean").get<std::vector<double>>();
  s.scale_ = j.at("scale").get<std::vector<double>>();
  if (s.mean_.size() != s.scale_.size()) {
    throw std::runtime_error("scaler: mean/scale length mismatch");
  }
  for (const double v : s.scale_) {
    if (!(v > 0.0)) throw std::runtime_error("scaler: non-positive scale");
  }
  return s;
}

}  // namespace agassi
