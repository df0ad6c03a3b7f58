#pragma once

#include <cstddef>

#include "agassi/kernels.hpp"

// Entry points of the translation unit compiled with -mavx2 -mfma. Callers
// must check avx2_supported() first.
namespace agassi::kernels::detail {

inline constexpr int kGemmMc = 96;
inline constexpr int kGemmKc = 256;
inline constexpr int kGemmNc = 1024;

template <typename T>
constexpr std::size_t gemm_workspace_size() {
  // Packed A block, packed B block, slack for rounding up to full panels.
  return static_cast<std::size_t>(kGemmMc + 8) * kGemmKc +
         static_cast<std::size_t>(kGemmKc) * (kGemmNc + 16);
}

void rotate_avx2_impl(const Rotation& r, const double* re, const double* im,
                      double* out_re, double* out_im, std::size_t dim);

void gemm_avx2_impl(bool trans_a, bool trans_b, int m, int n, int k,
                    float alpha, const float* a, int lda, const float* b,
                    int ldb, float beta, float* c, int ldc, float* work);
void gemm_avx2_impl(bool trans_a, bool trans_b, int m, int n, int k,
                    double alpha, const double* a, int lda, const double* b,
                    int ldb, double beta, double* c, int ldc, double* work);

}  // namespace agassi::kernels::detail
