#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "agassi/dataset.hpp"
#include "agassi/nn.hpp"
#include "agassi/phase.hpp"
#include "json.hpp"

namespace agassi {

enum class ModelKind { Mlp, Cnn };
std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

/// Optimizer, regularization and stopping settings. defaults(Mlp) mirrors a
/// default-configured perceptron (one hidden layer of 100 rectifiers, Adam
/// 1e-3, batch 200, L2 1e-4, stop after 10 epochs without a 1e-4 loss
/// improvement); defaults(Cnn) is the convolutional stack trained for 200
/// epochs with batch 64.
struct TrainConfig {
  ModelKind kind = ModelKind::Mlp;
  int epochs = 200;
  int batch_size = 200;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double l2 = 1e-4;
  int hidden_units = 100;
  double leaky_slope = 0.3;
  double spatial_dropout = 0.2;
  double dropout = 0.5;
  double tol = 1e-4;
  int n_iter_no_change = 10;  ///< 0 disables loss-plateau stopping
  bool standardize = true;
  std::uint64_t seed = 0;

  static TrainConfig defaults(ModelKind kind);
  void validate() const;
};

void to_json(nlohmann::json& out, const TrainConfig& c);
void from_json(const nlohmann::json& in, TrainConfig& c);

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;
  double train_accuracy = 0.0;  ///< running accuracy over the epoch's batches
  double val_accuracy = -1.0;   ///< -1 without a validation set
};

struct History {
  std::vector<EpochRecord> epochs;
  bool stopped_early = false;
};

/// epoch,train_acc,val_acc (val_acc empty without a validation set).
void write_history_csv(std::ostream& out, const History& h);

/// A prediction scores if it equals the primary label or, off the closed
/// valley, if it belongs to the point's boundary set. Closed-valley points
/// accept ClosedValley only.
bool prediction_correct(Phase predicted, const PhaseLabel& truth);

class Classifier {
 public:
  ModelKind kind = ModelKind::Mlp;
  TrainConfig config;
  nn::Network<float> net;
  Standardizer scaler;  ///< unfitted when config.standardize is off
  nlohmann::json feature_config;
  std::string feature_hash;
  nlohmann::json metrics = nlohmann::json::object();

  /// n x 5 row-major probabilities. Raw sets are scaled on a copy.
  std::vector<double> predict_proba(const LabeledSet& set) const;
  std::array<double, kPhaseCount> predict_proba(std::span<const double> raw) const;
  std::vector<Phase> predict(const LabeledSet& set) const;

  nlohmann::json to_json() const;
  static Classifier from_json(const nlohmann::json& doc);
  void save(const std::string& path) const;
  static Classifier load(const std::string& path);
};

struct TrainResult {
  Classifier model;
  History history;
};

using EpochFn = std::function<void(const EpochRecord&)>;

/// Fits the scaler on `train` (raw features), builds the network for
/// cfg.kind and minimizes softmax cross-entropy with Adam. Deterministic for
/// a fixed seed. Throws on a non-finite loss.
TrainResult train_classifier(const LabeledSet& train, const LabeledSet* val,
                             const TrainConfig& cfg,
                             const nlohmann::json& feature_config = {},
                             const EpochFn& on_epoch = {});

struct Evaluation {
  std::size_t n = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;        ///< boundary-aware rule
  double plain_accuracy = 0.0;  ///< prediction == primary
  /// confusion[true primary][predicted].
  std::array<std::array<std::size_t, kPhaseCount>, kPhaseCount> confusion{};
};

Evaluation evaluate_predictions(std::span<const Phase> predicted,
                                std::span<const PhaseLabel> truth);
Evaluation evaluate(const Classifier& model, const LabeledSet& test);
nlohmann::json to_json(const Evaluation& e);

/// A straight line through the phase diagram with one varying coordinate.
struct Trajectory {
  char panel = 'a';
  ScaledParams fixed;
  int axis = 0;  ///< 0 chi, 1 Sigma, 2 Lambda
  double lo = 0.0;
  double hi = 2.0;
  int steps = 41;

  std::vector<ScaledParams> points() const;
};

/// Lines a..f: (Sigma, Lambda) = (0.5, 0.5) over chi; (chi, Lambda) =
/// (0.5, 0.5) over Sigma; (chi, Sigma) = (0.5, 0.5) over Lambda;
/// (1.5, ., 0.5) over Sigma; (1.5, 0.5, .) over Lambda; (0.5, 1.5, .) over
/// Lambda. All from 0 to 2.
Trajectory panel_trajectory(char panel, int steps = 41);

struct TrajectoryPoint {
  double value = 0.0;
  ScaledParams point;
  PhaseLabel label;
  std::array<double, kPhaseCount> probs{};
};

/// Generates each point's series with `cfg` and classifies it.
std::vector<TrajectoryPoint> predict_trajectory(const Classifier& model,
                                                const Trajectory& line,
                                                const SeriesConfig& cfg);

/// <axis>,chi,sigma,lambda,label,p_Symmetric,...,p_ClosedValley,predicted
void write_trajectory_csv(std::ostream& out, const Trajectory& line,
                          std::span<const TrajectoryPoint> rows);

}  // namespace agassi
