#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

namespace agassi::nn {

/// Reproducible generator; uniform() uses the top 53 bits so draws do not
/// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Integer in [0, n).
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }

 private:
  std::mt19937_64 eng_;
};

/// Per-sample activation shape, stored length-major (l * channels + c).
/// Flat vectors use length 1.
struct Dims {
  int length = 1;
  int channels = 1;
  int size() const { return length * channels; }
  bool operator==(const Dims&) const = default;
};

std::string to_string(const Dims& d);

template <typename T>
struct ParamTensor {
  std::string name;
  std::vector<T> value;
  std::vector<T> grad;
  bool decay = false;  ///< weights take L2 decay, biases do not
};

template <typename T>
class Layer {
 public:
  virtual ~Layer() = default;
  virtual std::string type() const = 0;
  virtual Dims in_dims() const = 0;
  virtual Dims out_dims() const = 0;

  /// y = f(x) for `batch` samples. `cache` holds whatever backward needs.
  /// Stochastic layers draw from `rng` only when training.
  virtual void forward(const T* x, T* y, int batch, bool training, Rng* rng,
                       std::vector<T>& cache) const = 0;
  /// Overwrites parameter gradients and writes dL/dx when dx is non-null.
  virtual void backward(const T* x, const T* y, const T* dy, T* dx, int batch,
                        const std::vector<T>& cache) = 0;

  virtual std::vector<ParamTensor<T>*> params() { return {}; }
  virtual std::vector<const ParamTensor<T>*> params() const { return {}; }
  /// Type and geometry, without weights.
  virtual nlohmann::json descriptor() const = 0;

  std::size_t parameter_count() const;
};

/// Y = X W + b with W stored in x out row-major order.
template <typename T>
class Dense final : public Layer<T> {
 public:
  Dense(int in, int out);
  std::string type() const override { return "dense"; }
  Dims in_dims() const override { return {1, in_}; }
  Dims out_dims() const override { return {1, out_}; }
  void forward(const T* x, T* y, int batch, bool training, Rng* rng,
               std::vector<T>& cache) const override;
  void backward(const T* x, const T* y, const T* dy, T* dx, int batch,
                const std::vector<T>& cache) override;
  std::vector<ParamTensor<T>*> params() override { return {&w_, &b_}; }
  std::vector<const ParamTensor<T>*> params() const override { return {&w_, &b_}; }
  nlohmann::json descriptor() const override;

 private:
  int in_, out_;
  ParamTensor<T> w_, b_;
};

/// Stride-1 convolution with "same" zero padding. Kernel stored as
/// [k][c_in][c_out].
template <typename T>
class Conv1D final : public Layer<T> {
 public:
  Conv1D(int length, int c_in, int c_out, int kernel);
  std::string type() const override { return "conv1d"; }
  Dims in_dims() const override { return {len_, cin_}; }
  Dims out_dims() const override { return {len_, cout_}; }
  void forward(const T* x, T* y, int batch, bool training, Rng* rng,
               std::vector<T>& cache) const override;
  void backward(const T* x, const T* y, const T* dy, T* dx, int batch,
                const std::vector<T>& cache) override;
  std::vector<ParamTensor<T>*> params() override { return {&w_, &b_}; }
  std::vector<const ParamTensor<T>*> params() const override { return {&w_, &b_}; }
  nlohmann::json descriptor() const override;

 private:
  int len_, cin_, cout_, k_;
  ParamTensor<T> w_, b_;
  std::vector<T> dcol_;
};

/// max(x, slope * x); slope 0 is the plain rectifier.
template <typename T>
class LeakyRelu final : public Layer<T> {
 public:
  LeakyRelu(Dims dims, double slope);
  std::string type() const override { return slope_ == T(0) ? "relu" : "leaky_relu"; }
  Dims in_dims() const override { return dims_; }
  Dims out_dims() const override { return dims_; }
  void forward(const T* x, T* y, int batch, bool training, Rng* rng,
               std::vector<T>& cache) const override;
  void backward(const T* x, const T* y, const T* dy, T* dx, int batch,
                const std::vector<T>& cache) override;
  nlohmann::json descriptor() const override;

 private:
  Dims dims_;
  T slope_;
};

/// Average pooling with "same" geometry: ceil(L / stride) windows, the
/// padding split as evenly as possible with the extra element on the
/// right, and every window averaged over its in-range elements only.
template <typename T>
class AvgPool1D final : public Layer<T> {
 public:
  AvgPool1D(Dims in, int size, int stride);
  std::string type() const override { return "avg_pool1d"; }
  Dims in_dims() const override { return in_; }
  Dims out_dims() const override { return {out_len_, in_.channels}; }
  void forward(const T* x, T* y, int batch, bool training, Rng* rng,
               std::vector<T>& cache) const override;
  void backward(const T* x, const T* y, const T* dy, T* dx, int batch,
                const std::vector<T>& cache) override;
  nlohmann::json descriptor() const override;

 private:
  Dims in_;
  int size_, stride_, out_len_, pad_left_;
};

/// Inverted dropout. With `spatial` set a whole channel is dropped for all
/// positions of a sample.
template <typename T>
class Dropout final : public Layer<T> {
 public:
  Dropout(Dims dims, double rate, bool spatial);
  std::string type() const override { return spatial_ ? "spatial_dropout1d" : "dropout"; }
  Dims in_dims() const override { return dims_; }
  Dims out_dims() const override { return dims_; }
  void forward(const T* x, T* y, int batch, bool training, Rng* rng,
               std::vector<T>& cache) const override;
  void backward(const T* x, const T* y, const T* dy, T* dx, int batch,
                const std::vector<T>& cache) override;
  nlohmann::json descriptor() const override;

 private:
  Dims dims_;
  double rate_;
  bool spatial_;
};

template <typename T>
class Flatten final : public Layer<T> {
 public:
  explicit Flatten(Dims in) : in_(in) {}
  std::string type() const override { return "flatten"; }
  Dims in_dims() const override { return in_; }
  Dims out_dims() const override { return {1, in_.size()}; }
  void forward(const T* x, T* y, int batch, bool training, Rng* rng,
               std::vector<T>& cache) const override;
  void backward(const T* x, const T* y, const T* dy, T* dx, int batch,
                const std::vector<T>& cache) override;
  nlohmann::json descriptor() const override;

 private:
  Dims in_;
};

struct LayerSummary {
  std::string type;
  Dims output;
  std::size_t parameters = 0;
};

/// Sequential stack ending in class logits; softmax is applied by the loss
/// and by predict_proba.
template <typename T>
class Network {
 public:
  /// Buffers of one forward/backward pass. Separate passes may run
  /// concurrently on a const network.
  struct Pass {
    int batch = 0;
    const T* input = nullptr;
    std::vector<std::vector<T>> acts;
    std::vector<std::vector<T>> caches;
    std::vector<T> grad_a, grad_b;
  };

  Network() = default;
  Network(Network&&) noexcept = default;
  Network& operator=(Network&&) noexcept = default;

  /// Throws if the layer's input shape differs from the current output.
  void add(std::unique_ptr<Layer<T>> layer);

  std::size_t size() const { return layers_.size(); }
  const Layer<T>& layer(std::size_t i) const { return *layers_[i]; }
  Layer<T>& layer(std::size_t i) { return *layers_[i]; }
  Dims input_dims() const;
  Dims output_dims() const;

  /// Returns the logits (batch x classes). `x` must outlive backward().
  const T* forward(Pass& pass, const T* x, int batch, bool training,
                   Rng* rng) const;
  /// Back-propagates dL/dlogits through every layer.
  void backward(Pass& pass, const T* dlogits);

  /// Row-stochastic class probabilities in inference mode.
  std::vector<T> predict_proba(const T* x, int batch) const;

  std::vector<ParamTensor<T>*> params();
  std::vector<const ParamTensor<T>*> params() const;
  std::size_t parameter_count() const;
  std::vector<LayerSummary> summary() const;

  /// {"layers": [descriptor + weights, ...]}.
  nlohmann::json to_json() const;
  static Network from_json(const nlohmann::json& doc);

 private:
  std::vector<std::unique_ptr<Layer<T>>> layers_;
};

/// Row-wise softmax via log-sum-exp.
template <typename T>
void softmax_rows(T* z, int rows, int cols);

/// Mean cross-entropy of softmax(logits) against integer labels; writes
/// dL/dlogits = (p - onehot) / rows when grad is non-null.
template <typename T>
double softmax_cross_entropy(const T* logits, const int* labels, int rows,
                             int cols, T* grad);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

template <typename T>
class Adam {
 public:
  Adam(const std::vector<ParamTensor<T>*>& params, AdamConfig cfg);
  void step();
  long long steps() const { return t_; }

 private:
  std::vector<ParamTensor<T>*> params_;
  AdamConfig cfg_;
  std::vector<std::vector<T>> m_, v_;
  long long t_ = 0;
};

/// Uniform(-b, b) weights with b = sqrt(6 / (fan_in + fan_out)).
/// `uniform_bias` also draws biases from the same range instead of zero.
template <typename T>
void glorot_init(Network<T>& net, Rng& rng, bool uniform_bias);

/// Copies weights between precisions; layer stacks must match.
template <typename To, typename From>
Network<To> convert(const Network<From>& net);

// Canonical architectures.

struct MlpSpec {
  int inputs = 100;
  std::vector<int> hidden{100};
  int classes = 5;
};

struct CnnSpec {
  int length = 100;
  std::vector<int> filters{32, 64, 128, 256};
  int kernel = 3;
  int pool = 3;
  int dense_layers = 5;
  int dense_units = 512;
  int classes = 5;
  double leaky_slope = 0.3;
  double spatial_dropout = 0.2;
  double dropout = 0.5;
};

template <typename T>
Network<T> make_mlp(const MlpSpec& spec);
template <typename T>
Network<T> make_cnn(const CnnSpec& spec);

}  // namespace agassi::nn
