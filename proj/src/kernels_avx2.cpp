#include "kernels_avx2.hpp"

#include <immintrin.h>

#include <cstdint>
#include <cstring>

namespace agassi::kernels::detail {

namespace {

// Local helpers instead of std:: templates, so no AVX2-compiled copy of a
// shared inline function can be picked by the linker for other callers.
inline int imin(int a, int b) { return a < b ? a : b; }

// Lane l of the result holds lane l ^ XL of the input.
template <int XL>
inline __m256d partner_lanes(__m256d v) {
  constexpr int imm = ((0 ^ XL) << 0) | ((1 ^ XL) << 2) | ((2 ^ XL) << 4) |
                      ((3 ^ XL) << 6);
  return _mm256_permute4x64_pd(v, imm);
}

template <int XL>
void rotate_blocks(const Rotation& r, const double* re, const double* im,
                   double* out_re, double* out_im, std::size_t dim) {
  const std::uint64_t x_hi = r.x & ~std::uint64_t{3};
  const std::uint64_t z_lo = r.z & 3;
  const std::uint64_t z_hi = r.z & ~std::uint64_t{3};

  alignas(32) double lane_sign[4];
  for (int l = 0; l < 4; ++l) {
    const int q = l ^ XL;
    lane_sign[l] = (__builtin_popcountll(z_lo & static_cast<std::uint64_t>(q)) & 1)
                       ? -0.0
                       : 0.0;
  }
  const __m256d lane_mask = _mm256_load_pd(lane_sign);
  const __m256d all_sign = _mm256_set1_pd(-0.0);
  const __m256d c = _mm256_set1_pd(r.c);
  const __m256d w = _mm256_set1_pd(r.w);

  for (std::size_t base = 0; base < dim; base += 4) {
    const std::size_t pbase = base ^ x_hi;
    __m256d mask = lane_mask;
    if (__builtin_popcountll(z_hi & pbase) & 1) mask = _mm256_xor_pd(mask, all_sign);
    const __m256d ws = _mm256_xor_pd(w, mask);

    const __m256d vre = _mm256_loadu_pd(re + base);
    const __m256d vim = _mm256_loadu_pd(im + base);
    const __m256d pre = partner_lanes<XL>(_mm256_loadu_pd(re + pbase));
    const __m256d pim = partner_lanes<XL>(_mm256_loadu_pd(im + pbase));
    const __m256d cre = _mm256_mul_pd(c, vre);
    const __m256d cim = _mm256_mul_pd(c, vim);
    if (r.imag_w) {
      _mm256_storeu_pd(out_re + base, _mm256_fnmadd_pd(ws, pim, cre));
      _mm256_storeu_pd(out_im + base, _mm256_fmadd_pd(ws, pre, cim));
    } else {
      _mm256_storeu_pd(out_re + base, _mm256_fmadd_pd(ws, pre, cre));
      _mm256_storeu_pd(out_im + base, _mm256_fmadd_pd(ws, pim, cim));
    }
  }
}

// ---- GEMM ---------------------------------------------------------------

template <typename T>
struct Simd;

template <>
struct Simd<float> {
  using V = __m256;
  static constexpr int lanes = 8;
  static V zero() { return _mm256_setzero_ps(); }
  static V load(const float* p) { return _mm256_loadu_ps(p); }
  static void store(float* p, V v) { _mm256_storeu_ps(p, v); }
  static V set1(float v) { return _mm256_set1_ps(v); }
  static V fma(V a, V b, V c) { return _mm256_fmadd_ps(a, b, c); }
};

template <>
struct Simd<double> {
  using V = __m256d;
  static constexpr int lanes = 4;
  static V zero() { return _mm256_setzero_pd(); }
  static V load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, V v) { _mm256_storeu_pd(p, v); }
  static V set1(double v) { return _mm256_set1_pd(v); }
  static V fma(V a, V b, V c) { return _mm256_fmadd_pd(a, b, c); }
};

constexpr int kMr = 6;

template <typename T>
constexpr int nr() {
  return 2 * Simd<T>::lanes;
}

template <typename T>
void pack_a(bool trans, const T* a, int lda, int i0, int mc, int p0, int kc,
            T alpha, T* dst) {
  for (int ir = 0; ir < mc; ir += kMr) {
    const int rows = imin(kMr, mc - ir);
    for (int p = 0; p < kc; ++p) {
      for (int i = 0; i < kMr; ++i) {
        T v = T(0);
        if (i < rows) {
          const std::ptrdiff_t row = i0 + ir + i;
          const std::ptrdiff_t col = p0 + p;
          v = alpha * (trans ? a[col * lda + row] : a[row * lda + col]);
        }
        *dst++ = v;
      }
    }
  }
}

template <typename T>
void pack_b(bool trans, const T* b, int ldb, int p0, int kc, int j0, int nc,
            T* dst) {
  constexpr int NR = nr<T>();
  for (int jr = 0; jr < nc; jr += NR) {
    const int cols = imin(NR, nc - jr);
    for (int p = 0; p < kc; ++p) {
      const std::ptrdiff_t row = p0 + p;
      if (!trans && cols == NR) {
        const T* src = b + row * ldb + j0 + jr;
        std::memcpy(dst, src, sizeof(T) * NR);
        dst += NR;
        continue;
      }
      for (int j = 0; j < NR; ++j) {
        T v = T(0);
        if (j < cols) {
          const std::ptrdiff_t col = j0 + jr + j;
          v = trans ? b[col * ldb + row] : b[row * ldb + col];
        }
        *dst++ = v;
      }
    }
  }
}

template <typename T>
void micro_kernel(int kc, const T* ap, const T* bp, T* c, int ldc, T beta,
                  int rows, int cols) {
  using S = Simd<T>;
  using V = typename S::V;
  constexpr int L = S::lanes;
  constexpr int NR = nr<T>();
  V acc[kMr][2];
  for (int i = 0; i < kMr; ++i) acc[i][0] = acc[i][1] = S::zero();
  for (int p = 0; p < kc; ++p) {
    const V b0 = S::load(bp);
    const V b1 = S::load(bp + L);
    for (int i = 0; i < kMr; ++i) {
      const V av = S::set1(ap[i]);
      acc[i][0] = S::fma(av, b0, acc[i][0]);
      acc[i][1] = S::fma(av, b1, acc[i][1]);
    }
    ap += kMr;
    bp += NR;
  }
  if (rows == kMr && cols == NR) {
    const V vb = S::set1(beta);
    for (int i = 0; i < kMr; ++i) {
      T* crow = c + static_cast<std::ptrdiff_t>(i) * ldc;
      if (beta == T(0)) {
        S::store(crow, acc[i][0]);
        S::store(crow + L, acc[i][1]);
      } else {
        S::store(crow, S::fma(vb, S::load(crow), acc[i][0]));
        S::store(crow + L, S::fma(vb, S::load(crow + L), acc[i][1]));
      }
    }
    return;
  }
  alignas(32) T tile[kMr][NR];
  for (int i = 0; i < kMr; ++i) {
    S::store(tile[i], acc[i][0]);
    S::store(tile[i] + L, acc[i][1]);
  }
  for (int i = 0; i < rows; ++i) {
    T* crow = c + static_cast<std::ptrdiff_t>(i) * ldc;
    for (int j = 0; j < cols; ++j) {
      crow[j] = beta == T(0) ? tile[i][j] : beta * crow[j] + tile[i][j];
    }
  }
}

template <typename T>
void gemm_impl(bool trans_a, bool trans_b, int m, int n, int k, T alpha,
               const T* a, int lda, const T* b, int ldb, T beta, T* c,
               int ldc, T* work) {
  constexpr int NR = nr<T>();
  if (m <= 0 || n <= 0) return;
  if (k <= 0 || alpha == T(0)) {
    for (int i = 0; i < m; ++i) {
      T* crow = c + static_cast<std::ptrdiff_t>(i) * ldc;
      for (int j = 0; j < n; ++j) crow[j] = beta == T(0) ? T(0) : beta * crow[j];
    }
    return;
  }
  T* packed_a = work;
  T* packed_b = work + static_cast<std::ptrdiff_t>(kGemmMc + 8) * kGemmKc;
  for (int jc = 0; jc < n; jc += kGemmNc) {
    const int nc = imin(kGemmNc, n - jc);
    for (int pc = 0; pc < k; pc += kGemmKc) {
      const int kc = imin(kGemmKc, k - pc);
      const T beta_eff = pc == 0 ? beta : T(1);
      pack_b(trans_b, b, ldb, pc, kc, jc, nc, packed_b);
      for (int ic = 0; ic < m; ic += kGemmMc) {
        const int mc = imin(kGemmMc, m - ic);
        pack_a(trans_a, a, lda, ic, mc, pc, kc, alpha, packed_a);
        for (int jr = 0; jr < nc; jr += NR) {
          const T* bp = packed_b + static_cast<std::ptrdiff_t>(jr) * kc;
          for (int ir = 0; ir < mc; ir += kMr) {
            const T* ap = packed_a + static_cast<std::ptrdiff_t>(ir) * kc;
            T* cp = c + static_cast<std::ptrdiff_t>(ic + ir) * ldc + jc + jr;
            micro_kernel<T>(kc, ap, bp, cp, ldc, beta_eff,
                            imin(kMr, mc - ir), imin(NR, nc - jr));
          }
        }
      }
    }
  }
}

}  // namespace

void rotate_avx2_impl(const Rotation& r, const double* re, const double* im,
                      double* out_re, double* out_im, std::size_t dim) {
  switch (r.x & 3) {
    case 0: rotate_blocks<0>(r, re, im, out_re, out_im, dim); break;
    case 1: rotate_blocks<1>(r, re, im, out_re, out_im, dim); break;
    case 2: rotate_blocks<2>(r, re, im, out_re, out_im, dim); break;
    default: rotate_blocks<3>(r, re, im, out_re, out_im, dim); break;
  }
}

void gemm_avx2_impl(bool trans_a, bool trans_b, int m, int n, int k,
                    float alpha, const float* a, int lda, const float* b,
                    int ldb, float beta, float* c, int ldc, float* work) {
  gemm_impl<float>(trans_a, trans_b, m, n, k, alpha, a, lda, b, ldb, beta, c,
                   ldc, work);
}

void gemm_avx2_impl(bool trans_a, bool trans_b, int m, int n, int k,
                    double alpha, const double* a, int lda, const double* b,
                    int ldb, double beta, double* c, int ldc, double* work) {
  gemm_impl<double>(trans_a, trans_b, m, n, k, alpha, a, lda, b, ldb, beta, c,
                    ldc, work);
}

}  // namespace agassi::kernels::detail
