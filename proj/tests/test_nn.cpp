#include <cmath>
#include <functional>
#include <sstream>

#include "doctest.h"

#include "agassi/classifier.hpp"
#include "agassi/nn.hpp"

using namespace agassi;
using namespace agassi::nn;

namespace {

double rel_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::max(std::sqrt(na), std::sqrt(nb));
  return scale == 0 ? std::sqrt(diff) : std::sqrt(diff) / scale;
}

std::vector<double> random_vec(std::size_t n, Rng& rng, double lo = -1, double hi = 1) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

// Central-difference check of every parameter tensor and of dL/dx for the
// loss L = sum_i r_i y_i(x), with stochastic layers replaying one mask.
void check_gradients(Network<double>& net, int batch, std::uint64_t seed) {
  Rng init(seed);
  for (auto* p : net.params()) p->value = random_vec(p->value.size(), init);
  const int nin = net.input_dims().size();
  const int nout = net.output_dims().size();
  auto x = random_vec(static_cast<std::size_t>(batch) * nin, init);
  const auto r = random_vec(static_cast<std::size_t>(batch) * nout, init);

  auto loss = [&](const std::vector<double>& input) {
    Network<double>::Pass pass;
    Rng mask(seed + 1);
    const double* y = net.forward(pass, input.data(), batch, true, &mask);
    double s = 0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r[i] * y[i];
    return s;
  };

  Network<double>::Pass pass;
  Rng mask(seed + 1);
  net.forward(pass, x.data(), batch, true, &mask);
  net.backward(pass, r.data());
  const double h = 1e-6;
  for (auto* p : net.params()) {
    const std::vector<double> analytic = p->grad;
    std::vector<double> numeric(p->value.size());
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double keep = p->value[i];
      p->value[i] = keep + h;
      const double up = loss(x);
      p->value[i] = keep - h;
      const double down = loss(x);
      p->value[i] = keep;
      numeric[i] = (up - down) / (2 * h);
    }
    INFO(p->name);
    CHECK(rel_error(analytic, numeric) < 1e-5);
  }
}

// dL/dx of a parameter-free layer against differences of the same loss.
void check_input_gradient(Layer<double>& layer, int batch, std::uint64_t seed) {
  Rng rng(seed);
  const int nin = layer.in_dims().size();
  const int nout = layer.out_dims().size();
  auto x = random_vec(static_cast<std::size_t>(batch) * nin, rng);
  const auto r = random_vec(static_cast<std::size_t>(batch) * nout, rng);
  auto loss = [&](const std::vector<double>& in) {
    std::vector<double> y(r.size());
    std::vector<double> cache;
    Rng mask(seed + 7);
    layer.forward(in.data(), y.data(), batch, true, &mask, cache);
    double s = 0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r[i] * y[i];
    return s;
  };
  std::vector<double> y(r.size()), dx(x.size()), cache;
  Rng mask(seed + 7);
  layer.forward(x.data(), y.data(), batch, true, &mask, cache);
  layer.backward(x.data(), y.data(), r.data(), dx.data(), batch, cache);
  std::vector<double> numeric(x.size());
  const double h = 1e-6;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = loss(x);
    x[i] = keep - h;
    const double down = loss(x);
    x[i] = keep;
    numeric[i] = (up - down) / (2 * h);
  }
  INFO(layer.type());
  CHECK(rel_error(dx, numeric) < 1e-5);
}

template <typename L, typename... Args>
Network<double> single(Args&&... args) {
  Network<double> n;
  n.add(std::make_unique<L>(std::forward<Args>(args)...));
  return n;
}

}  // namespace

TEST_CASE("canonical CNN matches the published layer table") {
  const auto net = make_cnn<float>(CnnSpec{});
  const auto s = net.summary();
  const std::vector<std::pair<std::string, std::size_t>> want = {
      {"100x32", 128}, {"100x32", 0}, {"34x32", 0}, {"34x32", 0},
      {"34x64", 6208}, {"34x64", 0}, {"12x64", 0}, {"12x64", 0},
      {"12x128", 24704}, {"12x128", 0}, {"4x128", 0}, {"4x128", 0},
      {"4x256", 98560}, {"4x256", 0}, {"2x256", 0}, {"2x256", 0},
      {"512", 0},
      {"512", 262656}, {"512", 0}, {"512", 0},
      {"512", 262656}, {"512", 0}, {"512", 0},
      {"512", 262656}, {"512", 0}, {"512", 0},
      {"512", 262656}, {"512", 0}, {"512", 0},
      {"512", 262656}, {"512", 0}, {"512", 0},
      {"5", 2565}};
  REQUIRE(s.size() == want.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    INFO(i, " ", s[i].type);
    CHECK(to_string(s[i].output) == want[i].first);
    CHECK(s[i].parameters == want[i].second);
  }
  CHECK(net.parameter_count() == 1445445);
  CHECK(s[0].type == "conv1d");
  CHECK(s[2].type == "avg_pool1d");
  CHECK(s[3].type == "spatial_dropout1d");
  CHECK(s[16].type == "flatten");
  CHECK(s[19].type == "dropout");
}

TEST_CASE("default MLP shape") {
  const auto net = make_mlp<float>(MlpSpec{});
  CHECK(net.parameter_count() == 100 * 100 + 100 + 100 * 5 + 5);
  CHECK(net.summary()[1].type == "relu");
  CHECK(net.output_dims().size() == 5);
}

TEST_CASE("pool geometry") {
  for (const auto [in, out] : {std::pair{100, 34}, {34, 12}, {12, 4}, {4, 2}, {3, 1}, {7, 3}}) {
    AvgPool1D<double> p({in, 1}, 3, 3);
    CHECK(p.out_dims().length == out);
  }
  // L = 4: windows {0,1} and {2,3} after one pad element on each side.
  AvgPool1D<double> p({4, 1}, 3, 3);
  const double x[4] = {1, 2, 3, 5};
  double y[2];
  std::vector<double> cache;
  p.forward(x, y, 1, false, nullptr, cache);
  CHECK(y[0] == doctest::Approx(1.5));
  CHECK(y[1] == doctest::Approx(4.0));
}

TEST_CASE("convolution uses same padding") {
  Conv1D<double> c(4, 1, 1, 3);
  c.params()[0]->value = {1, 10, 100};  // taps on x[l-1], x[l], x[l+1]
  c.params()[1]->value = {0.5};
  const double x[4] = {1, 2, 3, 4};
  double y[4];
  std::vector<double> cache;
  c.forward(x, y, 1, false, nullptr, cache);
  CHECK(y[0] == doctest::Approx(0 + 10 + 200 + 0.5));
  CHECK(y[1] == doctest::Approx(1 + 20 + 300 + 0.5));
  CHECK(y[3] == doctest::Approx(3 + 40 + 0 + 0.5));
}

TEST_CASE("parameter gradients match finite differences") {
  SUBCASE("dense") {
    auto n = single<Dense<double>>(8, 5);
    check_gradients(n, 3, 1);
  }
  SUBCASE("conv1d") {
    auto n = single<Conv1D<double>>(8, 2, 3, 3);
    check_gradients(n, 3, 2);
  }
  SUBCASE("conv1d single channel") {
    auto n = single<Conv1D<double>>(8, 1, 4, 3);
    check_gradients(n, 3, 3);
  }
  SUBCASE("tiny cnn with every layer type") {
    CnnSpec s;
    s.length = 8;
    s.filters = {2, 3};
    s.dense_layers = 2;
    s.dense_units = 6;
    auto n = make_cnn<double>(s);
    check_gradients(n, 3, 4);
  }
  SUBCASE("mlp") {
    auto n = make_mlp<double>({8, {6, 4}, 5});
    check_gradients(n, 3, 5);
  }
}

TEST_CASE("input gradients match finite differences") {
  Dense<double> dense(8, 5);
  Rng rng(3);
  for (auto* p : dense.params()) p->value = random_vec(p->value.size(), rng);
  check_input_gradient(dense, 3, 11);
  Conv1D<double> conv(8, 2, 3, 3);
  for (auto* p : conv.params()) p->value = random_vec(p->value.size(), rng);
  check_input_gradient(conv, 3, 12);
  LeakyRelu<double> leaky({8, 1}, 0.3);
  check_input_gradient(leaky, 3, 13);
  AvgPool1D<double> pool8({8, 2}, 3, 3);
  check_input_gradient(pool8, 3, 14);
  AvgPool1D<double> pool7({7, 2}, 3, 3);
  check_input_gradient(pool7, 3, 15);
  Dropout<double> drop({8, 1}, 0.5, false);
  check_input_gradient(drop, 3, 16);
  Dropout<double> sdrop({4, 2}, 0.4, true);
  check_input_gradient(sdrop, 3, 17);
  Flatten<double> flat({4, 2});
  check_input_gradient(flat, 3, 18);
}

TEST_CASE("softmax cross-entropy gradient and stability") {
  Rng rng(9);
  const int rows = 3;
  const int cols = 5;
  auto z = random_vec(rows * cols, rng, -3, 3);
  const int y[rows] = {0, 4, 2};
  std::vector<double> g(z.size());
  softmax_cross_entropy(z.data(), y, rows, cols, g.data());
  std::vector<double> numeric(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double keep = z[i];
    z[i] = keep + 1e-6;
    const double up = softmax_cross_entropy<double>(z.data(), y, rows, cols, nullptr);
    z[i] = keep - 1e-6;
    const double down = softmax_cross_entropy<double>(z.data(), y, rows, cols, nullptr);
    z[i] = keep;
    numeric[i] = (up - down) / 2e-6;
  }
  CHECK(rel_error(g, numeric) < 1e-6);

  std::vector<float> big = {1000, -1000, 0, 999, -999};
  const int label = 1;
  const double l = softmax_cross_entropy<float>(big.data(), &label, 1, 5, nullptr);
  CHECK(std::isfinite(l));
  CHECK(l == doctest::Approx(2000.0).epsilon(1e-3));
  softmax_rows(big.data(), 1, 5);
  double s = 0;
  for (float v : big) s += v;
  CHECK(s == doctest::Approx(1.0));
}

TEST_CASE("zero weights give uniform probabilities") {
  auto net = make_mlp<double>(MlpSpec{});
  Rng rng(1);
  const auto x = random_vec(100 * 4, rng);
  const auto p = net.predict_proba(x.data(), 4);
  for (const double v : p) CHECK(v == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("probabilities are row stochastic") {
  for (int kind = 0; kind < 2; ++kind) {
    auto net = kind == 0 ? make_mlp<double>(MlpSpec{}) : make_cnn<double>(CnnSpec{});
    Rng rng(2);
    glorot_init(net, rng, kind == 0);
    const int n = kind == 0 ? 1000 : 200;
    const auto x = random_vec(static_cast<std::size_t>(n) * 100, rng, -3, 3);
    const auto p = net.predict_proba(x.data(), n);
    for (int r = 0; r < n; ++r) {
      double s = 0;
      for (int c = 0; c < 5; ++c) {
        s += p[r * 5 + c];
        CHECK(p[r * 5 + c] >= 0.0);
      }
      CHECK(std::abs(s - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("inference ignores dropout and is repeatable") {
  auto net = make_cnn<float>(CnnSpec{});
  Rng rng(4);
  glorot_init(net, rng, false);
  std::vector<float> x(100 * 3);
  for (auto& v : x) v = static_cast<float>(rng.uniform(-1, 1));
  CHECK(net.predict_proba(x.data(), 3) == net.predict_proba(x.data(), 3));
}

TEST_CASE("network json round trip") {
  auto net = make_cnn<float>(CnnSpec{});
  Rng rng(5);
  glorot_init(net, rng, false);
  const auto back = Network<float>::from_json(nlohmann::json::parse(net.to_json().dump()));
  CHECK(back.parameter_count() == 1445445);
  const auto a = net.params();
  const auto b = back.params();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i]->value == b[i]->value);
  auto j = net.to_json();
  j["layers"][0]["weights"].erase(0);
  CHECK_THROWS(Network<float>::from_json(j));
}

TEST_CASE("adam step follows the bias-corrected update") {
  ParamTensor<double> p;
  p.value = {1.0};
  p.grad = {0.5};
  Adam<double> opt({&p}, {0.1, 0.9, 0.999, 1e-7});
  opt.step();
  // First step: the move is lr * g / (|g| + eps / sqrt(1 - beta2)).
  CHECK(p.value[0] == doctest::Approx(1.0 - 0.1 * 0.5 / (0.5 + 1e-7 / std::sqrt(1 - 0.999))).epsilon(1e-12));
}

TEST_CASE("evaluation rule") {
  PhaseLabel inside{Phase::HF, {}};
  PhaseLabel edge{Phase::Symmetric, {Phase::Symmetric, Phase::HF}};
  PhaseLabel valley{Phase::ClosedValley, {Phase::HF, Phase::BCS, Phase::ClosedValley}};
  CHECK(prediction_correct(Phase::HF, inside));
  CHECK_FALSE(prediction_correct(Phase::BCS, inside));
  CHECK(prediction_correct(Phase::Symmetric, edge));
  CHECK(prediction_correct(Phase::HF, edge));
  CHECK_FALSE(prediction_correct(Phase::BCS, edge));
  CHECK(prediction_correct(Phase::ClosedValley, valley));
  CHECK_FALSE(prediction_correct(Phase::HF, valley));

  const std::vector<PhaseLabel> truth = {inside, edge, valley, inside};
  const std::vector<Phase> perfect = {Phase::HF, Phase::Symmetric, Phase::ClosedValley, Phase::HF};
  CHECK(evaluate_predictions(perfect, truth).accuracy == 1.0);
  const std::vector<Phase> mixed = {Phase::HF, Phase::HF, Phase::HF, Phase::BCS};
  const auto e = evaluate_predictions(mixed, truth);
  CHECK(e.correct == 2);
  CHECK(e.accuracy == 0.5);
  CHECK(e.plain_accuracy == 0.25);
  CHECK(e.confusion[1][2] == 1);
  CHECK(e.confusion[4][1] == 1);
}

namespace {

// Separable toy data: the class sets which block of the series is lifted.
LabeledSet toy_set(int rows, std::uint64_t seed) {
  LabeledSet s;
  s.n_features = 100;
  Rng rng(seed);
  for (int r = 0; r < rows; ++r) {
    const int c = r % 5;
    for (int f = 0; f < 100; ++f) {
      s.x.push_back(0.3 * rng.uniform(-1, 1) + (f / 20 == c ? 1.0 : 0.0));
    }
    s.labels.push_back({static_cast<Phase>(c), {}});
    s.points.push_back({});
  }
  return s;
}

}  // namespace

TEST_CASE("MLP over-fits a small set and is deterministic") {
  const auto train = toy_set(50, 1);
  auto cfg = TrainConfig::defaults(ModelKind::Mlp);
  cfg.epochs = 500;
  cfg.n_iter_no_change = 0;
  cfg.seed = 3;
  const auto a = train_classifier(train, nullptr, cfg);
  CHECK(a.history.epochs.back().train_accuracy == 1.0);
  CHECK(evaluate(a.model, train).accuracy == 1.0);
  const auto b = train_classifier(train, nullptr, cfg);
  CHECK(a.model.net.params()[0]->value == b.model.net.params()[0]->value);
}

TEST_CASE("CNN over-fits a small set without dropout") {
  const auto train = toy_set(50, 2);
  auto cfg = TrainConfig::defaults(ModelKind::Cnn);
  cfg.epochs = 40;
  cfg.dropout = 0;
  cfg.spatial_dropout = 0;
  cfg.seed = 1;
  const auto r = train_classifier(train, &train, cfg);
  CHECK(r.history.epochs.back().train_accuracy == 1.0);
  CHECK(r.history.epochs.back().val_accuracy == 1.0);
}

TEST_CASE("MLP stops once the loss plateaus") {
  const auto train = toy_set(50, 4);
  auto cfg = TrainConfig::defaults(ModelKind::Mlp);
  cfg.tol = 10.0;  // nothing counts as an improvement
  const auto r = train_classifier(train, nullptr, cfg);
  CHECK(r.history.stopped_early);
  CHECK(r.history.epochs.size() == 12);
}

TEST_CASE("classifier json round trip and guards") {
  auto train = toy_set(40, 5);
  auto cfg = TrainConfig::defaults(ModelKind::Mlp);
  cfg.epochs = 5;
  SeriesConfig sc;
  const auto r = train_classifier(train, nullptr, cfg, nlohmann::json(sc));
  CHECK(r.model.feature_hash == config_hash(sc));
  const auto back = Classifier::from_json(nlohmann::json::parse(r.model.to_json().dump()));
  CHECK(back.predict_proba(train) == r.model.predict_proba(train));
  CHECK(back.config.epochs == 5);
  CHECK(back.scaler.mean() == r.model.scaler.mean());

  // Pre-scaled input gives the same answer as raw input scaled inside.
  LabeledSet scaled = train;
  r.model.scaler.apply(scaled);
  CHECK(r.model.predict(scaled) == r.model.predict(train));
  CHECK_THROWS(train_classifier(scaled, nullptr, cfg));

  LabeledSet narrow;
  narrow.n_features = 10;
  narrow.x.assign(10, 0.0);
  narrow.labels.resize(1);
  narrow.points.resize(1);
  CHECK_THROWS(r.model.predict(narrow));

  std::ostringstream hist;
  write_history_csv(hist, r.history);
  CHECK(hist.str().rfind("epoch,train_acc,val_acc\n1,", 0) == 0);
}

TEST_CASE("trajectories") {
  const auto d = panel_trajectory('d');
  const auto pts = d.points();
  REQUIRE(pts.size() == 41);
  CHECK(pts.front().sigma == 0.0);
  CHECK(pts.back().sigma == 2.0);
  CHECK(pts[30].sigma == doctest::Approx(1.5));
  CHECK(pts[30].chi == 1.5);
  CHECK(pts[30].lambda == 0.5);
  CHECK(classify_phase(pts[30].chi, pts[30].sigma, pts[30].lambda).primary == Phase::ClosedValley);
  CHECK(panel_trajectory('a').axis == 0);
  CHECK(panel_trajectory('f').fixed.sigma == 1.5);
  CHECK_THROWS(panel_trajectory('g'));
}
