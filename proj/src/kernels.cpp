#include "agassi/kernels.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "kernels_avx2.hpp"

namespace agassi::kernels {

namespace {

Backend detect() {
  if (const char* env = std::getenv("AGASSI_KERNELS")) {
    if (std::string(env) == "scalar") return Backend::Scalar;
  }
  return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> slot{detect()};
  return slot;
}

void require_avx2() {
  if (!avx2_supported()) {
    throw std::runtime_error("AVX2/FMA kernels requested on a CPU without them");
  }
}

}  // namespace

std::string_view to_string(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

bool avx2_supported() {
  static const bool ok = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return ok;
}

Backend active_backend() { return backend_slot().load(); }

void set_backend(Backend b) {
  if (b == Backend::Avx2) require_avx2();
  backend_slot().store(b);
}

Rotation make_rotation(std::uint64_t x, std::uint64_t z, int ny,
                       double theta) {
  // exp(-i theta P) = cos - i sin P; the -i and the P phase combine to i^k.
  const int k = (ny + 3 + 2 * (std::popcount(z) & 1)) % 4;
  const double s = std::sin(theta);
  Rotation r;
  r.x = x;
  r.z = z;
  r.c = std::cos(theta);
  r.imag_w = (k & 1) != 0;
  r.w = (k >= 2) ? -s : s;
  return r;
}

void rotate_scalar(const Rotation& r, const double* re, const double* im,
                   double* out_re, double* out_im, std::size_t dim) {
  for (std::size_t b = 0; b < dim; ++b) {
    const std::size_t p = b ^ r.x;
    const double ws = (std::popcount(r.z & p) & 1) ? -r.w : r.w;
    if (r.imag_w) {
      out_re[b] = r.c * re[b] - ws * im[p];
      out_im[b] = r.c * im[b] + ws * re[p];
    } else {
      out_re[b] = r.c * re[b] + ws * re[p];
      out_im[b] = r.c * im[b] + ws * im[p];
    }
  }
}

void rotate_avx2(const Rotation& r, const double* re, const double* im,
                 double* out_re, double* out_im, std::size_t dim) {
  require_avx2();
  if (dim < 4) {
    rotate_scalar(r, re, im, out_re, out_im, dim);
    return;
  }
  detail::rotate_avx2_impl(r, re, im, out_re, out_im, dim);
}

void rotate(const Rotation& r, const double* re, const double* im,
            double* out_re, double* out_im, std::size_t dim) {
  if (active_backend() == Backend::Avx2 && dim >= 4) {
    detail::rotate_avx2_impl(r, re, im, out_re, out_im, dim);
  } else {
    rotate_scalar(r, re, im, out_re, out_im, dim);
  }
}

template <typename T>
void gemm_scalar(bool trans_a, bool trans_b, int m, int n, int k, T alpha,
                 const T* a, int lda, const T* b, int ldb, T beta, T* c,
                 int ldc) {
  for (int i = 0; i < m; ++i) {
    T* crow = c + static_cast<std::ptrdiff_t>(i) * ldc;
    if (beta == T(0)) {
      for (int j = 0; j < n; ++j) crow[j] = T(0);
    } else if (beta != T(1)) {
      for (int j = 0; j < n; ++j) crow[j] *= beta;
    }
    for (int p = 0; p < k; ++p) {
      const T av = alpha * (trans_a ? a[static_cast<std::ptrdiff_t>(p) * lda + i]
                                    : a[static_cast<std::ptrdiff_t>(i) * lda + p]);
      if (av == T(0)) continue;
      if (trans_b) {
        for (int j = 0; j < n; ++j) {
          crow[j] += av * b[static_cast<std::ptrdiff_t>(j) * ldb + p];
        }
      } else {
        const T* brow = b + static_cast<std::ptrdiff_t>(p) * ldb;
        for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
      }
    }
  }
}

namespace {

template <typename T>
std::vector<T>& workspace() {
  thread_local std::vector<T> buf;
  const std::size_t need = detail::gemm_workspace_size<T>();
  if (buf.size() < need) buf.resize(need);
  return buf;
}

}  // namespace

template <typename T>
void gemm_avx2(bool trans_a, bool trans_b, int m, int n, int k, T alpha,
               const T* a, int lda, const T* b, int ldb, T beta, T* c,
               int ldc) {
  require_avx2();
  detail::gemm_avx2_impl(trans_a, trans_b, m, n, k, alpha, a, lda, b, ldb,
                         beta, c, ldc, workspace<T>().data());
}

template <typename T>
void gemm(bool trans_a, bool trans_b, int m, int n, int k, T alpha,
          const T* a, int lda, const T* b, int ldb, T beta, T* c, int ldc) {
  if (m <= 0 || n <= 0) return;
  if (active_backend() == Backend::Avx2) {
    detail::gemm_avx2_impl(trans_a, trans_b, m, n, k, alpha, a, lda, b, ldb,
                           beta, c, ldc, workspace<T>().data());
  } else {
    gemm_scalar(trans_a, trans_b, m, n, k, alpha, a, lda, b, ldb, beta, c,
                ldc);
  }
}

#define AGASSI_GEMM_INSTANTIATE(T)                                            \
  template void gemm<T>(bool, bool, int, int, int, T, const T*, int,         \
                        const T*, int, T, T*, int);                           \
  template void gemm_scalar<T>(bool, bool, int, int, int, T, const T*, int,  \
                               const T*, int, T, T*, int);                    \
  template void gemm_avx2<T>(bool, bool, int, int, int, T, const T*, int,    \
                             const T*, int, T, T*, int);

AGASSI_GEMM_INSTANTIATE(float)
AGASSI_GEMM_INSTANTIATE(double)

#undef AGASSI_GEMM_INSTANTIATE

}  // namespace agassi::kernels
