#include <random>
#include <vector>

#include "dense_oracle.hpp"
#include "doctest.h"

#include "agassi/kernels.hpp"

using namespace agassi;
namespace k = agassi::kernels;

namespace {

struct SoA {
  std::vector<double> re, im;
};

SoA random_state(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> d;
  SoA s{std::vector<double>(dim), std::vector<double>(dim)};
  for (std::size_t i = 0; i < dim; ++i) {
    s.re[i] = d(rng);
    s.im[i] = d(rng);
  }
  return s;
}

template <typename T>
std::vector<T> random_matrix(std::mt19937_64& rng, std::size_t size) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<T> out(size);
  for (auto& v : out) v = static_cast<T>(u(rng));
  return out;
}

}  // namespace

TEST_CASE("scalar rotation equals the dense exponential") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> angle(-2.0, 2.0);
  for (int n = 1; n <= 5; ++n) {
    const std::size_t dim = std::size_t{1} << n;
    std::uniform_int_distribution<std::uint64_t> mask(0, full_mask(n));
    for (int trial = 0; trial < 40; ++trial) {
      const PauliString p(n, mask(rng), mask(rng));
      const double theta = angle(rng);
      const auto r = k::make_rotation(p.x_mask(), p.z_mask(), p.y_count(), theta);
      const auto s = random_state(rng, dim);
      SoA out{std::vector<double>(dim), std::vector<double>(dim)};
      k::rotate_scalar(r, s.re.data(), s.im.data(), out.re.data(),
                       out.im.data(), dim);
      oracle::Vec v(dim);
      for (std::size_t i = 0; i < dim; ++i) v(i) = Complex(s.re[i], s.im[i]);
      const oracle::Mat u =
          oracle::expm(Complex(0, -theta) * oracle::dense(p));
      const oracle::Vec expected = u * v;
      double err = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        err = std::max(err, std::abs(expected(i) - Complex(out.re[i], out.im[i])));
      }
      CHECK(err < 1e-12);
    }
  }
}

TEST_CASE("AVX2 rotation matches scalar bit for bit") {
  if (!k::avx2_supported()) return;
  std::mt19937_64 rng(2);
  for (int n = 2; n <= 9; ++n) {
    const std::size_t dim = std::size_t{1} << n;
    std::uniform_int_distribution<std::uint64_t> mask(0, full_mask(n));
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = mask(rng);
      const auto z = mask(rng);
      const auto r = k::make_rotation(x, z, std::popcount(x & z), 0.1 * trial - 2.0);
      const auto s = random_state(rng, dim);
      SoA a{std::vector<double>(dim), std::vector<double>(dim)};
      SoA b = a;
      k::rotate_scalar(r, s.re.data(), s.im.data(), a.re.data(), a.im.data(), dim);
      k::rotate_avx2(r, s.re.data(), s.im.data(), b.re.data(), b.im.data(), dim);
      double err = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        err = std::max({err, std::abs(a.re[i] - b.re[i]), std::abs(a.im[i] - b.im[i])});
      }
      CHECK(err < 1e-15);
    }
  }
}

TEST_CASE_TEMPLATE("AVX2 GEMM matches scalar GEMM", T, float, double) {
  if (!k::avx2_supported()) return;
  std::mt19937_64 rng(3);
  const int shapes[][3] = {{1, 1, 1},   {5, 7, 3},    {6, 16, 8},
                           {13, 33, 17}, {64, 512, 100}, {97, 130, 300},
                           {7, 1030, 5}, {3, 5, 0}};
  for (const auto& sh : shapes) {
    const int m = sh[0], n = sh[1], kk = sh[2];
    for (int ta = 0; ta < 2; ++ta) {
      for (int tb = 0; tb < 2; ++tb) {
        for (const T beta : {T(0), T(1), T(0.5)}) {
          const int lda = ta ? m : kk;
          const int ldb = tb ? kk : n;
          auto a = random_matrix<T>(rng, static_cast<std::size_t>(m) * kk + 1);
          auto b = random_matrix<T>(rng, static_cast<std::size_t>(kk) * n + 1);
          auto c1 = random_matrix<T>(rng, static_cast<std::size_t>(m) * n);
          auto c2 = c1;
          k::gemm_scalar<T>(ta, tb, m, n, kk, T(0.75), a.data(), lda > 0 ? lda : 1,
                            b.data(), ldb > 0 ? ldb : 1, beta, c1.data(), n);
          k::gemm_avx2<T>(ta, tb, m, n, kk, T(0.75), a.data(), lda > 0 ? lda : 1,
                          b.data(), ldb > 0 ? ldb : 1, beta, c2.data(), n);
          double err = 0.0;
          for (std::size_t i = 0; i < c1.size(); ++i) {
            err = std::max(err, static_cast<double>(std::abs(c1[i] - c2[i])));
          }
          const double tol = std::is_same_v<T, float> ? 1e-4 : 1e-12;
          CHECK(err < tol * std::max(1, kk));
        }
      }
    }
  }
}

TEST_CASE("GEMM ignores NaN in C when beta is zero") {
  const float a[] = {1, 2};
  const float b[] = {3, 4};
  float c[] = {std::numeric_limits<float>::quiet_NaN()};
  k::gemm_scalar<float>(false, false, 1, 1, 2, 1.0f, a, 2, b, 1, 0.0f, c, 1);
  CHECK(c[0] == 11.0f);
  if (k::avx2_supported()) {
    c[0] = std::numeric_limits<float>::quiet_NaN();
    k::gemm_avx2<float>(false, false, 1, 1, 2, 1.0f, a, 2, b, 1, 0.0f, c, 1);
    CHECK(c[0] == 11.0f);
  }
}

TEST_CASE("backend selection") {
  const auto before = k::active_backend();
  k::set_backend(k::Backend::Scalar);
  CHECK(k::active_backend() == k::Backend::Scalar);
  CHECK(k::to_string(k::Backend::Scalar) == "scalar");
  if (k::avx2_supported()) {
    k::set_backend(k::Backend::Avx2);
    CHECK(k::active_backend() == k::Backend::Avx2);
  } else {
    CHECK_THROWS(k::set_backend(k::Backend::Avx2));
  }
  k::set_backend(before);
}
