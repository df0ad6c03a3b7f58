#include "agassi/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace agassi {

namespace {

constexpr const char* kModelFormat = "agassi-model";
constexpr int kModelVersion = 1;
constexpr int kPredictChunk = 512;

int argmax(const float* row, int n) {
  return static_cast<int>(std::max_element(row, row + n) - row);
}

template <typename It>
int argmax_d(It begin, It end) {
  return static_cast<int>(std::max_element(begin, end) - begin);
}

std::vector<float> to_float(const LabeledSet& set, const Standardizer* scaler) {
  std::vector<float> out(set.x.size());
  const std::size_t nf = set.n_features;
  std::vector<double> row(nf);
  for (std::size_t r = 0; r < set.size(); ++r) {
    const auto src = set.row(r);
    std::copy(src.begin(), src.end(), row.begin());
    if (scaler) scaler->apply_row(row);
    std::transform(row.begin(), row.end(), out.begin() + r * nf,
                   [](double v) { return static_cast<float>(v); });
  }
  return out;
}

std::vector<int> label_indices(const LabeledSet& set) {
  std::vector<int> y(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) y[i] = static_cast<int>(set.labels[i].primary);
  return y;
}

double plain_accuracy(const nn::Network<float>& net, const std::vector<float>& x,
                      const std::vector<int>& y, int nf) {
  const int n = static_cast<int>(y.size());
  std::size_t hits = 0;
  nn::Network<float>::Pass pass;
  for (int start = 0; start < n; start += kPredictChunk) {
    const int b = std::min(kPredictChunk, n - start);
    const float* logits = net.forward(pass, x.data() + static_cast<std::size_t>(start) * nf,
                                      b, false, nullptr);
    for (int i = 0; i < b; ++i) {
      hits += argmax(logits + static_cast<std::size_t>(i) * kPhaseCount, kPhaseCount) == y[start + i];
    }
  }
  return static_cast<double>(hits) / n;
}

}  // namespace

std::string to_string(ModelKind k) { return k == ModelKind::Mlp ? "mlp" : "cnn"; }

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "mlp") return ModelKind::Mlp;
  if (s == "cnn") return ModelKind::Cnn;
  throw std::invalid_argument("model kind '" + s + "': expected mlp or cnn");
}

TrainConfig TrainConfig::defaults(ModelKind kind) {
  TrainConfig c;
  c.kind = kind;
  if (kind == ModelKind::Cnn) {
    c.epochs = 200;
    c.batch_size = 64;
    c.adam_epsilon = 1e-7;
    c.l2 = 0.0;
    c.n_iter_no_change = 0;
  }
  return c;
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("TrainConfig: " + m); };
  if (epochs < 1) fail("epochs must be >= 1");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) fail("betas must lie in [0, 1)");
  if (!(adam_epsilon > 0.0)) fail("adam_epsilon must be positive");
  if (l2 < 0.0) fail("l2 must be >= 0");
  if (hidden_units < 1) fail("hidden_units must be >= 1");
  if (!(spatial_dropout >= 0.0 && spatial_dropout < 1.0) || !(dropout >= 0.0 && dropout < 1.0)) {
    fail("dropout rates must lie in [0, 1)");
  }
  if (n_iter_no_change < 0) fail("n_iter_no_change must be >= 0");
}

void to_json(nlohmann::json& out, const TrainConfig& c) {
  out = {{"kind", to_string(c.kind)},
         {"epochs", c.epochs},
         {"batch_size", c.batch_size},
         {"learning_rate", c.learning_rate},
         {"beta1", c.beta1},
         {"beta2", c.beta2},
         {"adam_epsilon", c.adam_epsilon},
         {"l2", c.l2},
         {"hidden_units", c.hidden_units},
         {"leaky_slope", c.leaky_slope},
         {"spatial_dropout", c.spatial_dropout},
         {"dropout", c.dropout},
         {"tol", c.tol},
         {"n_iter_no_change", c.n_iter_no_change},
         {"standardize", c.standardize},
         {"seed", c.seed}};
}

void from_json(const nlohmann::json& in, TrainConfig& c) {
  TrainConfig t = TrainConfig::defaults(
      in.contains("kind") ? model_kind_from_string(in.at("kind").get<std::string>())
                          : ModelKind::Mlp);
  auto opt = [&](const char* key, auto& field) {
    if (in.contains(key)) in.at(key).get_to(field);
  };
  opt("epochs", t.epochs);
  opt("batch_size", t.batch_size);
  opt("learning_rate", t.learning_rate);
  opt("beta1", t.beta1);
  opt("beta2", t.beta2);
  opt("adam_epsilon", t.adam_epsilon);
  opt("l2", t.l2);
  opt("hidden_units", t.hidden_units);
  opt("leaky_slope", t.leaky_slope);
  opt("spatial_dropout", t.spatial_dropout);
  opt("dropout", t.dropout);
  opt("tol", t.tol);
  opt("n_iter_no_change", t.n_iter_no_change);
  opt("standardize", t.standardize);
  opt("seed", t.seed);
  t.validate();
  c = t;
}

void write_history_csv(std::ostream& out, const History& h) {
  out << "epoch,train_acc,val_acc\n";
  char buf[96];
  for (const auto& e : h.epochs) {
    if (e.val_accuracy >= 0.0) {
      std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f\n", e.epoch, e.train_accuracy, e.val_accuracy);
    } else {
      std::snprintf(buf, sizeof buf, "%d,%.6f,\n", e.epoch, e.train_accuracy);
    }
    out << buf;
  }
}

bool prediction_correct(Phase predicted, const PhaseLabel& truth) {
  if (truth.primary == Phase::ClosedValley) return predicted == Phase::ClosedValley;
  if (predicted == truth.primary) return true;
  return truth.on_boundary() && truth.boundary_contains(predicted);
}

std::vector<double> Classifier::predict_proba(const LabeledSet& set) const {
  const int nf = static_cast<int>(set.n_features);
  if (nf != net.input_dims().size()) {
    throw std::invalid_argument("model expects " + std::to_string(net.input_dims().size()) +
                                " features, set has " + std::to_string(nf));
  }
  const bool scale = config.standardize && !set.standardized;
  if (scale && !scaler.fitted()) throw std::logic_error("model has no fitted scaler");
  const auto x = to_float(set, scale ? &scaler : nullptr);
  const int n = static_cast<int>(set.size());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) * kPhaseCount);
  for (int start = 0; start < n; start += kPredictChunk) {
    const int b = std::min(kPredictChunk, n - start);
    const auto p = net.predict_proba(x.data() + static_cast<std::size_t>(start) * nf, b);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::array<double, kPhaseCount> Classifier::predict_proba(std::span<const double> raw) const {
  LabeledSet one;
  one.n_features = raw.size();
  one.x.assign(raw.begin(), raw.end());
  one.labels.resize(1);
  one.points.resize(1);
  const auto p = predict_proba(one);
  std::array<double, kPhaseCount> out{};
  std::copy(p.begin(), p.end(), out.begin());
  return out;
}

std::vector<Phase> Classifier::predict(const LabeledSet& set) const {
  const auto p = predict_proba(set);
  std::vector<Phase> out(set.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto row = p.begin() + static_cast<std::ptrdiff_t>(i * kPhaseCount);
    out[i] = static_cast<Phase>(argmax_d(row, row + kPhaseCount));
  }
  return out;
}

nlohmann::json Classifier::to_json() const {
  nlohmann::json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelVersion;
  doc["kind"] = to_string(kind);
  doc["architecture"] = net.to_json();
  doc["scaler"] = scaler.fitted() ? scaler.to_json() : nlohmann::json();
  doc["train_config"] = config;
  doc["seed"] = config.seed;
  doc["feature_config"] = feature_config;
  doc["feature_config_hash"] = feature_hash;
  doc["metrics"] = metrics;
  return doc;
}

Classifier Classifier::from_json(const nlohmann::json& doc) {
  if (doc.value("format", "") != kModelFormat) throw std::runtime_error("not an agassi model");
  if (doc.at("version").get<int>() != kModelVersion) {
    throw std::runtime_error("unsupported model version");
  }
  Classifier m;
  m.kind = model_kind_from_string(doc.at("kind").get<std::string>());
  m.config = doc.at("train_config").get<TrainConfig>();
  m.net = nn::Network<float>::from_json(doc.at("architecture"));
  if (!doc.at("scaler").is_null()) m.scaler = Standardizer::from_json(doc.at("scaler"));
  m.feature_config = doc.value("feature_config", nlohmann::json());
  m.feature_hash = doc.value("feature_config_hash", "");
  m.metrics = doc.value("metrics", nlohmann::json::object());
  const auto out = m.net.output_dims().size();
  if (out != kPhaseCount) throw std::runtime_error("model must have 5 outputs");
  if (m.scaler.fitted() &&
      static_cast<int>(m.scaler.n_features()) != m.net.input_dims().size()) {
    throw std::runtime_error("scaler width does not match the network input");
  }
  return m;
}

void Classifier::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << to_json().dump() << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

Classifier Classifier::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  try {
    return from_json(nlohmann::json::parse(f));
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

TrainResult train_classifier(const LabeledSet& train, const LabeledSet* val,
                             const TrainConfig& cfg,
                             const nlohmann::json& feature_config,
                             const EpochFn& on_epoch) {
  cfg.validate();
  if (train.size() == 0) throw std::invalid_argument("train_classifier: empty training set");
  if (train.standardized || (val && val->standardized)) {
    throw std::logic_error("train_classifier: pass raw features; scaling is fitted here");
  }
  if (val && val->size() > 0 && val->n_features != train.n_features) {
    throw std::invalid_argument("train_classifier: validation width differs");
  }
  const int nf = static_cast<int>(train.n_features);
  const int n = static_cast<int>(train.size());

  TrainResult res;
  Classifier& model = res.model;
  model.kind = cfg.kind;
  model.config = cfg;
  model.feature_config = feature_config;
  if (!feature_config.is_null()) model.feature_hash = hash_hex(fnv1a64(feature_config.dump()));
  if (cfg.standardize) model.scaler = Standardizer::fit(train);
  const Standardizer* sc = cfg.standardize ? &model.scaler : nullptr;

  if (cfg.kind == ModelKind::Mlp) {
    nn::MlpSpec spec;
    spec.inputs = nf;
    spec.hidden = {cfg.hidden_units};
    spec.classes = kPhaseCount;
    model.net = nn::make_mlp<float>(spec);
  } else {
    nn::CnnSpec spec;
    spec.length = nf;
    spec.classes = kPhaseCount;
    spec.leaky_slope = cfg.leaky_slope;
    spec.spatial_dropout = cfg.spatial_dropout;
    spec.dropout = cfg.dropout;
    model.net = nn::make_cnn<float>(spec);
  }
  nn::Rng rng(cfg.seed);
  nn::glorot_init(model.net, rng, cfg.kind == ModelKind::Mlp);

  const auto x = to_float(train, sc);
  const auto y = label_indices(train);
  std::vector<float> xv;
  std::vector<int> yv;
  const bool have_val = val && val->size() > 0;
  if (have_val) {
    xv = to_float(*val, sc);
    yv = label_indices(*val);
  }

  auto params = model.net.params();
  nn::Adam<float> opt(params, {cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.adam_epsilon});
  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), std::size_t{0});
  const int bs = std::min(cfg.batch_size, n);
  std::vector<float> xb(static_cast<std::size_t>(bs) * nf);
  std::vector<int> yb(static_cast<std::size_t>(bs));
  std::vector<float> grad(static_cast<std::size_t>(bs) * kPhaseCount);
  nn::Network<float>::Pass pass;
  double best_loss = std::numeric_limits<double>::infinity();
  int stale = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    double loss_sum = 0.0;
    std::size_t hits = 0;
    int batch_index = 0;
    for (int start = 0; start < n; start += bs, ++batch_index) {
      const int b = std::min(bs, n - start);
      for (int i = 0; i < b; ++i) {
        const std::size_t r = order[static_cast<std::size_t>(start + i)];
        std::copy_n(x.data() + r * nf, nf, xb.data() + static_cast<std::size_t>(i) * nf);
        yb[static_cast<std::size_t>(i)] = y[r];
      }
      const float* logits = model.net.forward(pass, xb.data(), b, true, &rng);
      double loss = nn::softmax_cross_entropy(logits, yb.data(), b, kPhaseCount, grad.data());
      for (int i = 0; i < b; ++i) {
        hits += argmax(logits + static_cast<std::size_t>(i) * kPhaseCount, kPhaseCount) == yb[i];
      }
      model.net.backward(pass, grad.data());
      if (cfg.l2 > 0.0) {
        double sq = 0.0;
        const float k = static_cast<float>(cfg.l2 / b);
        for (auto* p : params) {
          if (!p->decay) continue;
          for (std::size_t i = 0; i < p->value.size(); ++i) {
            sq += static_cast<double>(p->value[i]) * p->value[i];
            p->grad[i] += k * p->value[i];
          }
        }
        loss += 0.5 * cfg.l2 * sq / b;
      }
      if (!std::isfinite(loss)) {
        throw std::runtime_error("non-finite loss at epoch " + std::to_string(epoch) +
                                 ", batch " + std::to_string(batch_index) +
                                 " (learning rate " + std::to_string(cfg.learning_rate) + ")");
      }
      opt.step();
      loss_sum += loss * b;
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = loss_sum / n;
    rec.train_accuracy = static_cast<double>(hits) / n;
    if (have_val) rec.val_accuracy = plain_accuracy(model.net, xv, yv, nf);
    res.history.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);

    if (cfg.n_iter_no_change > 0) {
      stale = rec.loss > best_loss - cfg.tol ? stale + 1 : 0;
      best_loss = std::min(best_loss, rec.loss);
      if (stale > cfg.n_iter_no_change) {
        res.history.stopped_early = true;
        break;
      }
    }
  }
  model.metrics["epochs_run"] = res.history.epochs.size();
  model.metrics["final_loss"] = res.history.epochs.back().loss;
  model.metrics["final_train_accuracy"] = res.history.epochs.back().train_accuracy;
  if (have_val) model.metrics["final_val_accuracy"] = res.history.epochs.back().val_accuracy;
  return res;
}

Evaluation evaluate_predictions(std::span<const Phase> predicted,
                                std::span<const PhaseLabel> truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("evaluate: prediction and label counts differ");
  }
  Evaluation e;
  e.n = truth.size();
  std::size_t plain = 0;
  for (std::size_t i = 0; i < e.n; ++i) {
    e.correct += prediction_correct(predicted[i], truth[i]);
    plain += predicted[i] == truth[i].primary;
    ++e.confusion[static_cast<int>(truth[i].primary)][static_cast<int>(predicted[i])];
  }
  if (e.n > 0) {
    e.accuracy = static_cast<double>(e.correct) / e.n;
    e.plain_accuracy = static_cast<double>(plain) / e.n;
  }
  return e;
}

Evaluation evaluate(const Classifier& model, const LabeledSet& test) {
  const auto pred = model.predict(test);
  return evaluate_predictions(pred, test.labels);
}

nlohmann::json to_json(const Evaluation& e) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto p : kAllPhases) classes.push_back(std::string(to_string(p)));
  return {{"n", e.n},
          {"correct", e.correct},
          {"accuracy", e.accuracy},
          {"plain_accuracy", e.plain_accuracy},
          {"classes", classes},
          {"confusion", e.confusion}};
}

std::vector<ScaledParams> Trajectory::points() const {
  if (steps < 2 || axis < 0 || axis > 2) throw std::invalid_argument("Trajectory: bad line");
  std::vector<ScaledParams> out;
  for (int k = 0; k < steps; ++k) {
    ScaledParams p = fixed;
    const double v = axis_value({lo, hi, steps}, k);
    (axis == 0 ? p.chi : axis == 1 ? p.sigma : p.lambda) = v;
    out.push_back(p);
  }
  return out;
}

Trajectory panel_trajectory(char panel, int steps) {
  Trajectory t;
  t.panel = panel;
  t.steps = steps;
  switch (panel) {
    case 'a': t.fixed = {0.0, 0.5, 0.5}; t.axis = 0; break;
    case 'b': t.fixed = {0.5, 0.0, 0.5}; t.axis = 1; break;
    case 'c': t.fixed = {0.5, 0.5, 0.0}; t.axis = 2; break;
    case 'd': t.fixed = {1.5, 0.0, 0.5}; t.axis = 1; break;
    case 'e': t.fixed = {1.5, 0.5, 0.0}; t.axis = 2; break;
    case 'f': t.fixed = {0.5, 1.5, 0.0}; t.axis = 2; break;
    default: throw std::invalid_argument(std::string("unknown panel '") + panel + "', expected a-f");
  }
  return t;
}

std::vector<TrajectoryPoint> predict_trajectory(const Classifier& model,
                                                const Trajectory& line,
                                                const SeriesConfig& cfg) {
  const HamiltonianBasis basis(cfg.j);
  std::vector<TrajectoryPoint> out;
  for (const auto& p : line.points()) {
    TrajectoryPoint tp;
    tp.point = p;
    tp.value = line.axis == 0 ? p.chi : line.axis == 1 ? p.sigma : p.lambda;
    tp.label = classify_phase(p.chi, p.sigma, p.lambda);
    const auto series = generate_series(p, cfg, basis);
    tp.probs = model.predict_proba(series);
    out.push_back(tp);
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& line,
                          std::span<const TrajectoryPoint> rows) {
  static constexpr const char* kAxis[] = {"chi", "sigma", "lambda"};
  out << kAxis[line.axis] << "_value,chi,sigma,lambda,label";
  for (const auto p : kAllPhases) out << ",p_" << to_string(p);
  out << ",predicted\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,", r.value, r.point.chi,
                  r.point.sigma, r.point.lambda);
    out << buf << to_string(r.label.primary);
    for (const double v : r.probs) {
      std::snprintf(buf, sizeof buf, ",%.9g", v);
      out << buf;
    }
    out << ',' << to_string(static_cast<Phase>(argmax_d(r.probs.begin(), r.probs.end()))) << '\n';
  }
}

}  // namespace agassi
