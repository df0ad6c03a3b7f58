#include "agassi/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agassi/kernels.hpp"

namespace agassi::nn {

namespace {

using kernels::gemm;

template <typename T>
ParamTensor<T> make_param(std::string name, std::size_t n, bool decay) {
  ParamTensor<T> p;
  p.name = std::move(name);
  p.value.assign(n, T(0));
  p.grad.assign(n, T(0));
  p.decay = decay;
  return p;
}

template <typename T>
void column_sums(const T* m, int rows, int cols, T* out) {
  std::fill(out, out + cols, T(0));
  for (int r = 0; r < rows; ++r) {
    const T* row = m + static_cast<std::size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) out[c] += row[c];
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::string to_string(const Dims& d) {
  return d.length == 1 ? std::to_string(d.channels)
                       : std::to_string(d.length) + "x" + std::to_string(d.channels);
}

template <typename T>
std::size_t Layer<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto* p : params()) n += p->value.size();
  return n;
}

// Dense

template <typename T>
Dense<T>::Dense(int in, int out)
    : in_(in),
      out_(out),
      w_(make_param<T>("weights", static_cast<std::size_t>(in) * out, true)),
      b_(make_param<T>("bias", static_cast<std::size_t>(out), false)) {
  require(in > 0 && out > 0, "Dense: sizes must be positive");
}

template <typename T>
void Dense<T>::forward(const T* x, T* y, int batch, bool, Rng*,
                       std::vector<T>&) const {
  gemm<T>(false, false, batch, out_, in_, T(1), x, in_, w_.value.data(), out_,
          T(0), y, out_);
  for (int r = 0; r < batch; ++r) {
    T* row = y + static_cast<std::size_t>(r) * out_;
    for (int c = 0; c < out_; ++c) row[c] += b_.value[c];
  }
}

template <typename T>
void Dense<T>::backward(const T* x, const T*, const T* dy, T* dx, int batch,
                        const std::vector<T>&) {
  gemm<T>(true, false, in_, out_, batch, T(1), x, in_, dy, out_, T(0),
          w_.grad.data(), out_);
  column_sums(dy, batch, out_, b_.grad.data());
  if (dx) {
    gemm<T>(false, true, batch, in_, out_, T(1), dy, out_, w_.value.data(),
            out_, T(0), dx, in_);
  }
}

template <typename T>
nlohmann::json Dense<T>::descriptor() const {
  return {{"type", type()}, {"in", in_}, {"out", out_}};
}

// Conv1D

template <typename T>
Conv1D<T>::Conv1D(int length, int c_in, int c_out, int kernel)
    : len_(length),
      cin_(c_in),
      cout_(c_out),
      k_(kernel),
      w_(make_param<T>("weights", static_cast<std::size_t>(kernel) * c_in * c_out, true)),
      b_(make_param<T>("bias", static_cast<std::size_t>(c_out), false)) {
  require(length > 0 && c_in > 0 && c_out > 0 && kernel > 0 && kernel % 2 == 1,
          "Conv1D: positive sizes and an odd kernel required");
}

template <typename T>
void Conv1D<T>::forward(const T* x, T* y, int batch, bool, Rng*,
                        std::vector<T>& col) const {
  const int width = k_ * cin_;
  const int pad = (k_ - 1) / 2;
  col.assign(static_cast<std::size_t>(batch) * len_ * width, T(0));
  for (int b = 0; b < batch; ++b) {
    const T* xb = x + static_cast<std::size_t>(b) * len_ * cin_;
    for (int l = 0; l < len_; ++l) {
      T* dst = col.data() + (static_cast<std::size_t>(b) * len_ + l) * width;
      for (int kk = 0; kk < k_; ++kk) {
        const int src = l + kk - pad;
        if (src < 0 || src >= len_) continue;
        std::copy_n(xb + static_cast<std::size_t>(src) * cin_, cin_, dst + kk * cin_);
      }
    }
  }
  const int rows = batch * len_;
  gemm<T>(false, false, rows, cout_, width, T(1), col.data(), width,
          w_.value.data(), cout_, T(0), y, cout_);
  for (int r = 0; r < rows; ++r) {
    T* row = y + static_cast<std::size_t>(r) * cout_;
    for (int c = 0; c < cout_; ++c) row[c] += b_.value[c];
  }
}

template <typename T>
void Conv1D<T>::backward(const T*, const T*, const T* dy, T* dx, int batch,
                         const std::vector<T>& col) {
  const int width = k_ * cin_;
  const int pad = (k_ - 1) / 2;
  const int rows = batch * len_;
  gemm<T>(true, false, width, cout_, rows, T(1), col.data(), width, dy, cout_,
          T(0), w_.grad.data(), cout_);
  column_sums(dy, rows, cout_, b_.grad.data());
  if (!dx) return;
  dcol_.resize(static_cast<std::size_t>(rows) * width);
  gemm<T>(false, true, rows, width, cout_, T(1), dy, cout_, w_.value.data(),
          cout_, T(0), dcol_.data(), width);
  std::fill(dx, dx + static_cast<std::size_t>(rows) * cin_, T(0));
  for (int b = 0; b < batch; ++b) {
    T* dxb = dx + static_cast<std::size_t>(b) * len_ * cin_;
    for (int l = 0; l < len_; ++l) {
      const T* src = dcol_.data() + (static_cast<std::size_t>(b) * len_ + l) * width;
      for (int kk = 0; kk < k_; ++kk) {
        const int pos = l + kk - pad;
        if (pos < 0 || pos >= len_) continue;
        T* d = dxb + static_cast<std::size_t>(pos) * cin_;
        for (int c = 0; c < cin_; ++c) d[c] += src[kk * cin_ + c];
      }
    }
  }
}

template <typename T>
nlohmann::json Conv1D<T>::descriptor() const {
  return {{"type", type()},        {"length", len_}, {"in_channels", cin_},
          {"out_channels", cout_}, {"kernel", k_}};
}

// LeakyRelu

template <typename T>
LeakyRelu<T>::LeakyRelu(Dims dims, double slope)
    : dims_(dims), slope_(static_cast<T>(slope)) {
  require(dims.size() > 0, "LeakyRelu: empty shape");
}

template <typename T>
void LeakyRelu<T>::forward(const T* x, T* y, int batch, bool, Rng*,
                           std::vector<T>&) const {
  const std::size_t n = static_cast<std::size_t>(batch) * dims_.size();
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > T(0) ? x[i] : slope_ * x[i];
}

template <typename T>
void LeakyRelu<T>::backward(const T* x, const T*, const T* dy, T* dx,
                            int batch, const std::vector<T>&) {
  if (!dx) return;
  const std::size_t n = static_cast<std::size_t>(batch) * dims_.size();
  for (std::size_t i = 0; i < n; ++i) dx[i] = x[i] > T(0) ? dy[i] : slope_ * dy[i];
}

template <typename T>
nlohmann::json LeakyRelu<T>::descriptor() const {
  return {{"type", type()},
          {"length", dims_.length},
          {"channels", dims_.channels},
          {"slope", static_cast<double>(slope_)}};
}

// AvgPool1D

template <typename T>
AvgPool1D<T>::AvgPool1D(Dims in, int size, int stride)
    : in_(in), size_(size), stride_(stride) {
  require(size > 0 && stride > 0 && in.size() > 0, "AvgPool1D: bad geometry");
  out_len_ = (in.length + stride - 1) / stride;
  const int pad_total = std::max((out_len_ - 1) * stride + size - in.length, 0);
  pad_left_ = pad_total / 2;
}

template <typename T>
void AvgPool1D<T>::forward(const T* x, T* y, int batch, bool, Rng*,
                           std::vector<T>&) const {
  const int ch = in_.channels;
  for (int b = 0; b < batch; ++b) {
    const T* xb = x + static_cast<std::size_t>(b) * in_.size();
    T* yb = y + static_cast<std::size_t>(b) * out_len_ * ch;
    for (int o = 0; o < out_len_; ++o) {
      const int start = o * stride_ - pad_left_;
      const int lo = std::max(start, 0);
      const int hi = std::min(start + size_, in_.length);
      const T inv = T(1) / static_cast<T>(hi - lo);
      T* dst = yb + static_cast<std::size_t>(o) * ch;
      std::fill(dst, dst + ch, T(0));
      for (int l = lo; l < hi; ++l) {
        const T* src = xb + static_cast<std::size_t>(l) * ch;
        for (int c = 0; c < ch; ++c) dst[c] += src[c];
      }
      for (int c = 0; c < ch; ++c) dst[c] *= inv;
    }
  }
}

template <typename T>
void AvgPool1D<T>::backward(const T*, const T*, const T* dy, T* dx, int batch,
                            const std::vector<T>&) {
  if (!dx) return;
  const int ch = in_.channels;
  std::fill(dx, dx + static_cast<std::size_t>(batch) * in_.size(), T(0));
  for (int b = 0; b < batch; ++b) {
    T* dxb = dx + static_cast<std::size_t>(b) * in_.size();
    const T* dyb = dy + static_cast<std::size_t>(b) * out_len_ * ch;
    for (int o = 0; o < out_len_; ++o) {
      const int start = o * stride_ - pad_left_;
      const int lo = std::max(start, 0);
      const int hi = std::min(start + size_, in_.length);
      const T inv = T(1) / static_cast<T>(hi - lo);
      const T* g = dyb + static_cast<std::size_t>(o) * ch;
      for (int l = lo; l < hi; ++l) {
        T* d = dxb + static_cast<std::size_t>(l) * ch;
        for (int c = 0; c < ch; ++c) d[c] += g[c] * inv;
      }
    }
  }
}

template <typename T>
nlohmann::json AvgPool1D<T>::descriptor() const {
  return {{"type", type()},
          {"length", in_.length},
          {"channels", in_.channels},
          {"size", size_},
          {"stride", stride_}};
}

// Dropout

template <typename T>
Dropout<T>::Dropout(Dims dims, double rate, bool spatial)
    : dims_(dims), rate_(rate), spatial_(spatial) {
  require(rate >= 0.0 && rate < 1.0, "Dropout: rate must lie in [0, 1)");
}

template <typename T>
void Dropout<T>::forward(const T* x, T* y, int batch, bool training, Rng* rng,
                         std::vector<T>& mask) const {
  const std::size_t n = static_cast<std::size_t>(batch) * dims_.size();
  if (!training || rate_ == 0.0) {
    mask.clear();
    std::copy_n(x, n, y);
    return;
  }
  if (!rng) throw std::logic_error("Dropout: training pass without a generator");
  const T keep = static_cast<T>(1.0 / (1.0 - rate_));
  mask.resize(n);
  if (spatial_) {
    const int ch = dims_.channels;
    for (int b = 0; b < batch; ++b) {
      T* mb = mask.data() + static_cast<std::size_t>(b) * dims_.size();
      for (int c = 0; c < ch; ++c) {
        const T v = rng->uniform() >= rate_ ? keep : T(0);
        for (int l = 0; l < dims_.length; ++l) mb[static_cast<std::size_t>(l) * ch + c] = v;
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) mask[i] = rng->uniform() >= rate_ ? keep : T(0);
  }
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] * mask[i];
}

template <typename T>
void Dropout<T>::backward(const T*, const T*, const T* dy, T* dx, int batch,
                          const std::vector<T>& mask) {
  if (!dx) return;
  const std::size_t n = static_cast<std::size_t>(batch) * dims_.size();
  if (mask.empty()) {
    std::copy_n(dy, n, dx);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) dx[i] = dy[i] * mask[i];
}

template <typename T>
nlohmann::json Dropout<T>::descriptor() const {
  return {{"type", type()},
          {"length", dims_.length},
          {"channels", dims_.channels},
          {"rate", rate_}};
}

// Flatten

template <typename T>
void Flatten<T>::forward(const T* x, T* y, int batch, bool, Rng*,
                         std::vector<T>&) const {
  std::copy_n(x, static_cast<std::size_t>(batch) * in_.size(), y);
}

template <typename T>
void Flatten<T>::backward(const T*, const T*, const T* dy, T* dx, int batch,
                          const std::vector<T>&) {
  if (dx) std::copy_n(dy, static_cast<std::size_t>(batch) * in_.size(), dx);
}

template <typename T>
nlohmann::json Flatten<T>::descriptor() const {
  return {{"type", type()}, {"length", in_.length}, {"channels", in_.channels}};
}

// Network

template <typename T>
void Network<T>::add(std::unique_ptr<Layer<T>> layer) {
  if (!layers_.empty() && !(layers_.back()->out_dims() == layer->in_dims())) {
    throw std::invalid_argument("Network: " + layer->type() + " expects input " +
                                to_string(layer->in_dims()) + " but previous layer gives " +
                                to_string(layers_.back()->out_dims()));
  }
  layers_.push_back(std::move(layer));
}

template <typename T>
Dims Network<T>::input_dims() const {
  if (layers_.empty()) throw std::logic_error("Network: empty");
  return layers_.front()->in_dims();
}

template <typename T>
Dims Network<T>::output_dims() const {
  if (layers_.empty()) throw std::logic_error("Network: empty");
  return layers_.back()->out_dims();
}

template <typename T>
const T* Network<T>::forward(Pass& pass, const T* x, int batch, bool training,
                             Rng* rng) const {
  if (layers_.empty()) throw std::logic_error("Network: empty");
  if (batch < 1) throw std::invalid_argument("Network: empty batch");
  pass.batch = batch;
  pass.input = x;
  pass.acts.resize(layers_.size());
  pass.caches.resize(layers_.size());
  const T* cur = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    auto& out = pass.acts[i];
    out.resize(static_cast<std::size_t>(batch) * layers_[i]->out_dims().size());
    layers_[i]->forward(cur, out.data(), batch, training, rng, pass.caches[i]);
    cur = out.data();
  }
  return cur;
}

template <typename T>
void Network<T>::backward(Pass& pass, const T* dlogits) {
  if (pass.acts.size() != layers_.size()) {
    throw std::logic_error("Network::backward without a matching forward");
  }
  const int batch = pass.batch;
  const T* dy = dlogits;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const T* x = i == 0 ? pass.input : pass.acts[i - 1].data();
    T* dx = nullptr;
    if (i > 0) {
      pass.grad_b.resize(static_cast<std::size_t>(batch) * layers_[i]->in_dims().size());
      dx = pass.grad_b.data();
    }
    layers_[i]->backward(x, pass.acts[i].data(), dy, dx, batch, pass.caches[i]);
    if (i > 0) {
      std::swap(pass.grad_a, pass.grad_b);
      dy = pass.grad_a.data();
    }
  }
}

template <typename T>
std::vector<T> Network<T>::predict_proba(const T* x, int batch) const {
  Pass pass;
  const T* logits = forward(pass, x, batch, false, nullptr);
  const int k = output_dims().size();
  std::vector<T> p(logits, logits + static_cast<std::size_t>(batch) * k);
  softmax_rows(p.data(), batch, k);
  return p;
}

template <typename T>
std::vector<ParamTensor<T>*> Network<T>::params() {
  std::vector<ParamTensor<T>*> out;
  for (auto& l : layers_) {
    for (auto* p : l->params()) out.push_back(p);
  }
  return out;
}

template <typename T>
std::vector<const ParamTensor<T>*> Network<T>::params() const {
  std::vector<const ParamTensor<T>*> out;
  for (const auto& l : layers_) {
    for (const auto* p : std::as_const(*l).params()) out.push_back(p);
  }
  return out;
}

template <typename T>
std::size_t Network<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l->parameter_count();
  return n;
}

template <typename T>
std::vector<LayerSummary> Network<T>::summary() const {
  std::vector<LayerSummary> out;
  for (const auto& l : layers_) out.push_back({l->type(), l->out_dims(), l->parameter_count()});
  return out;
}

template <typename T>
nlohmann::json Network<T>::to_json() const {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : layers_) {
    nlohmann::json d = l->descriptor();
    for (const auto* p : std::as_const(*l).params()) {
      std::vector<double> v(p->value.begin(), p->value.end());
      d[p->name] = std::move(v);
    }
    layers.push_back(std::move(d));
  }
  return {{"layers", std::move(layers)}};
}

template <typename T>
Network<T> Network<T>::from_json(const nlohmann::json& doc) {
  Network<T> net;
  for (const auto& d : doc.at("layers")) {
    const auto type = d.at("type").get<std::string>();
    const auto dims = [&] {
      return Dims{d.at("length").template get<int>(), d.at("channels").template get<int>()};
    };
    std::unique_ptr<Layer<T>> layer;
    if (type == "dense") {
      layer = std::make_unique<Dense<T>>(d.at("in").get<int>(), d.at("out").get<int>());
    } else if (type == "conv1d") {
      layer = std::make_unique<Conv1D<T>>(d.at("length").get<int>(),
                                          d.at("in_channels").get<int>(),
                                          d.at("out_channels").get<int>(),
                                          d.at("kernel").get<int>());
    } else if (type == "relu" || type == "leaky_relu") {
      layer = std::make_unique<LeakyRelu<T>>(dims(), d.at("slope").get<double>());
    } else if (type == "avg_pool1d") {
      layer = std::make_unique<AvgPool1D<T>>(dims(), d.at("size").get<int>(),
                                             d.at("stride").get<int>());
    } else if (type == "dropout" || type == "spatial_dropout1d") {
      layer = std::make_unique<Dropout<T>>(dims(), d.at("rate").get<double>(),
                                           type == "spatial_dropout1d");
    } else if (type == "flatten") {
      layer = std::make_unique<Flatten<T>>(dims());
    } else {
      throw std::runtime_error("unknown layer type '" + type + "'");
    }
    for (auto* p : layer->params()) {
      const auto v = d.at(p->name).template get<std::vector<double>>();
      if (v.size() != p->value.size()) {
        throw std::runtime_error(type + "." + p->name + ": expected " +
                                 std::to_string(p->value.size()) + " values, got " +
                                 std::to_string(v.size()));
      }
      std::transform(v.begin(), v.end(), p->value.begin(),
                     [](double a) { return static_cast<T>(a); });
    }
    net.add(std::move(layer));
  }
  return net;
}

// Loss and optimizer

template <typename T>
void softmax_rows(T* z, int rows, int cols) {
  for (int r = 0; r < rows; ++r) {
    T* row = z + static_cast<std::size_t>(r) * cols;
    const T m = *std::max_element(row, row + cols);
    double s = 0.0;
    for (int c = 0; c < cols; ++c) s += std::exp(static_cast<double>(row[c] - m));
    const double lse = static_cast<double>(m) + std::log(s);
    for (int c = 0; c < cols; ++c) {
      row[c] = static_cast<T>(std::exp(static_cast<double>(row[c]) - lse));
    }
  }
}

template <typename T>
double softmax_cross_entropy(const T* logits, const int* labels, int rows,
                             int cols, T* grad) {
  double total = 0.0;
  for (int r = 0; r < rows; ++r) {
    const T* z = logits + static_cast<std::size_t>(r) * cols;
    const int y = labels[r];
    if (y < 0 || y >= cols) throw std::invalid_argument("label out of range");
    double m = z[0];
    for (int c = 1; c < cols; ++c) m = std::max(m, static_cast<double>(z[c]));
    double s = 0.0;
    for (int c = 0; c < cols; ++c) s += std::exp(z[c] - m);
    const double lse = m + std::log(s);
    total += lse - z[y];
    if (grad) {
      T* g = grad + static_cast<std::size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) {
        const double p = std::exp(z[c] - lse);
        g[c] = static_cast<T>((p - (c == y ? 1.0 : 0.0)) / rows);
      }
    }
  }
  return total / rows;
}

template <typename T>
Adam<T>::Adam(const std::vector<ParamTensor<T>*>& params, AdamConfig cfg)
    : params_(params), cfg_(cfg) {
  for (const auto* p : params_) {
    m_.emplace_back(p->value.size(), T(0));
    v_.emplace_back(p->value.size(), T(0));
  }
}

template <typename T>
void Adam<T>::step() {
  ++t_;
  const double b1 = cfg_.beta1;
  const double b2 = cfg_.beta2;
  const T lr_t = static_cast<T>(cfg_.learning_rate *
                                std::sqrt(1.0 - std::pow(b2, static_cast<double>(t_))) /
                                (1.0 - std::pow(b1, static_cast<double>(t_))));
  const T eps = static_cast<T>(cfg_.epsilon);
  const T c1 = static_cast<T>(1.0 - b1);
  const T c2 = static_cast<T>(1.0 - b2);
  const T d1 = static_cast<T>(b1);
  const T d2 = static_cast<T>(b2);
  for (std::size_t k = 0; k < params_.size(); ++k) {
    auto& w = params_[k]->value;
    const auto& g = params_[k]->grad;
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = d1 * m[i] + c1 * g[i];
      v[i] = d2 * v[i] + c2 * g[i] * g[i];
      w[i] -= lr_t * m[i] / (std::sqrt(v[i]) + eps);
    }
  }
}

template <typename T>
void glorot_init(Network<T>& net, Rng& rng, bool uniform_bias) {
  for (std::size_t i = 0; i < net.size(); ++i) {
    auto& layer = net.layer(i);
    auto ps = layer.params();
    if (ps.empty()) continue;
    const auto d = layer.descriptor();
    double fan_in = 0;
    double fan_out = 0;
    if (layer.type() == "dense") {
      fan_in = d.at("in").template get<double>();
      fan_out = d.at("out").template get<double>();
    } else {
      const double k = d.at("kernel").template get<double>();
      fan_in = k * d.at("in_channels").template get<double>();
      fan_out = k * d.at("out_channels").template get<double>();
    }
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (auto* p : ps) {
      const bool draw = p->decay || uniform_bias;
      for (auto& v : p->value) v = draw ? static_cast<T>(rng.uniform(-bound, bound)) : T(0);
    }
  }
}

template <typename To, typename From>
Network<To> convert(const Network<From>& net) {
  return Network<To>::from_json(net.to_json());
}

template <typename T>
Network<T> make_mlp(const MlpSpec& spec) {
  Network<T> net;
  int width = spec.inputs;
  for (const int h : spec.hidden) {
    net.add(std::make_unique<Dense<T>>(width, h));
    net.add(std::make_unique<LeakyRelu<T>>(Dims{1, h}, 0.0));
    width = h;
  }
  net.add(std::make_unique<Dense<T>>(width, spec.classes));
  return net;
}

template <typename T>
Network<T> make_cnn(const CnnSpec& s) {
  Network<T> net;
  int len = s.length;
  int ch = 1;
  for (const int f : s.filters) {
    net.add(std::make_unique<Conv1D<T>>(len, ch, f, s.kernel));
    net.add(std::make_unique<LeakyRelu<T>>(Dims{len, f}, s.leaky_slope));
    net.add(std::make_unique<AvgPool1D<T>>(Dims{len, f}, s.pool, s.pool));
    len = net.output_dims().length;
    ch = f;
    net.add(std::make_unique<Dropout<T>>(Dims{len, ch}, s.spatial_dropout, true));
  }
  net.add(std::make_unique<Flatten<T>>(Dims{len, ch}));
  int width = len * ch;
  for (int i = 0; i < s.dense_layers; ++i) {
    net.add(std::make_unique<Dense<T>>(width, s.dense_units));
    net.add(std::make_unique<LeakyRelu<T>>(Dims{1, s.dense_units}, s.leaky_slope));
    net.add(std::make_unique<Dropout<T>>(Dims{1, s.dense_units}, s.dropout, false));
    width = s.dense_units;
  }
  net.add(std::make_unique<Dense<T>>(width, s.classes));
  return net;
}

#define AGASSI_NN_INSTANTIATE(T)                                             \
  template class Layer<T>;                                                   \
  template class Dense<T>;                                                   \
  template class Conv1D<T>;                                                  \
  template class LeakyRelu<T>;                                               \
  template class AvgPool1D<T>;                                               \
  template class Dropout<T>;                                                 \
  template class Flatten<T>;                                                 \
  template class Network<T>;                                                 \
  template class Adam<T>;                                                    \
  template void softmax_rows<T>(T*, int, int);                               \
  template double softmax_cross_entropy<T>(const T*, const int*, int, int, T*); \
  template void glorot_init<T>(Network<T>&, Rng&, bool);                     \
  template Network<T> make_mlp<T>(const MlpSpec&);                           \
  template Network<T> make_cnn<T>(const CnnSpec&);

AGASSI_NN_INSTANTIATE(float)
AGASSI_NN_INSTANTIATE(double)

#undef AGASSI_NN_INSTANTIATE

template Network<float> convert<float, double>(const Network<double>&);
template Network<double> convert<double, float>(const Network<float>&);
template Network<float> convert<float, float>(const Network<float>&);
template Network<double> convert<double, double>(const Network<double>&);

}  // namespace agassi::nn
