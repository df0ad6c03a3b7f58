#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace agassi::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend b);

/// True if the CPU supports AVX2 and FMA.
bool avx2_supported();

/// Backend used by the dispatching entry points. Chosen once from CPU
/// features; AGASSI_KERNELS=scalar in the environment forces the scalar path.
Backend active_backend();

/// Overrides the dispatch choice (tests and benchmarks). Requesting Avx2 on
/// a CPU without it throws.
void set_backend(Backend b);

/// One Pauli-string rotation out = exp(-i theta P) in on a state held as
/// separate real and imaginary arrays of length `dim` (a power of two).
///
/// With P = i^ny X^x Z^z, the update is
///   out[b] = cos(theta) in[b] + w * s_b * in[b ^ x]
/// where s_b = (-1)^popcount(z & (b ^ x)) and w is sin(theta) times a power
/// of i fixed by ny and the parity of z. `imag_w` says whether that power is
/// imaginary; `w` carries the real magnitude and sign.
struct Rotation {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  double c = 1.0;
  double w = 0.0;
  bool imag_w = false;
};

/// Fills c, w and imag_w for exp(-i theta P), P = i^ny X^x Z^z.
Rotation make_rotation(std::uint64_t x, std::uint64_t z, int ny, double theta);

void rotate(const Rotation& r, const double* re, const double* im,
            double* out_re, double* out_im, std::size_t dim);
void rotate_scalar(const Rotation& r, const double* re, const double* im,
                   double* out_re, double* out_im, std::size_t dim);
void rotate_avx2(const Rotation& r, const double* re, const double* im,
                 double* out_re, double* out_im, std::size_t dim);

/// Row-major C = alpha * op(A) * op(B) + beta * C, with op(A) of shape MxK
/// and op(B) of shape KxN. op transposes when the flag is set.
template <typename T>
void gemm(bool trans_a, bool trans_b, int m, int n, int k, T alpha,
          const T* a, int lda, const T* b, int ldb, T beta, T* c, int ldc);
template <typename T>
void gemm_scalar(bool trans_a, bool trans_b, int m, int n, int k, T alpha,
                 const T* a, int lda, const T* b, int ldb, T beta, T* c,
                 int ldc);
template <typename T>
void gemm_avx2(bool trans_a, bool trans_b, int m, int n, int k, T alpha,
               const T* a, int lda, const T* b, int ldb, T beta, T* c,
               int ldc);

}  // namespace agassi::kernels
