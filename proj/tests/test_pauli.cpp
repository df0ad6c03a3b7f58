#include <random>

#include "dense_oracle.hpp"
#include "doctest.h"

#include "agassi/jordan_wigner.hpp"
#include "agassi/pauli.hpp"

using namespace agassi;

namespace {

PauliString random_string(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<std::uint64_t> mask(0, full_mask(n));
  std::normal_distribution<double> c;
  return PauliString(n, mask(rng), mask(rng), Complex{c(rng), c(rng)});
}

}  // namespace

TEST_CASE("pauli_mul small products") {
  const auto x = PauliString::from_word("X");
  const auto y = PauliString::from_word("Y");
  const auto z = PauliString::from_word("Z");
  const auto xy = pauli_mul(x, y);
  CHECK(xy.word() == "Z");
  CHECK(xy.coeff() == Complex(0, 1));
  const auto zz = pauli_mul(z, z);
  CHECK(zz.is_identity());
  CHECK(zz.coeff() == Complex(1, 0));

  const auto p = pauli_mul(PauliString::from_word("XZ"),
                           PauliString::from_word("YZ"));
  CHECK(p.word() == "ZI");
  CHECK(p.coeff() == Complex(0, 1));
}

TEST_CASE("pauli_mul matches dense products") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto a = random_string(rng, n);
      const auto b = random_string(rng, n);
      const auto c = pauli_mul(a, b);
      CHECK(c.x_mask() == (a.x_mask() ^ b.x_mask()));
      const double err =
          (oracle::dense(c) - oracle::dense(a) * oracle::dense(b)).norm();
      CHECK(err < 1e-12);
      const auto ba = pauli_mul(b, a);
      const auto ratio = ba.coeff() / c.coeff();
      CHECK(std::abs(std::abs(ratio.real()) - 1.0) < 1e-12);
      CHECK(std::abs(ratio.imag()) < 1e-12);
      CHECK(commute(a, b) == (std::abs(ratio.real() - 1.0) < 1e-12));
    }
  }
}

TEST_CASE("canonical sums match dense sums") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 4; ++n) {
    std::vector<PauliString> terms;
    oracle::Mat expected = oracle::Mat::Zero(1 << n, 1 << n);
    for (int k = 0; k < 40; ++k) {
      terms.push_back(random_string(rng, n));
      expected += oracle::dense(terms.back());
    }
    const PauliSum s(n, terms);
    CHECK((oracle::dense(s) - expected).norm() < 1e-12);
    for (std::size_t i = 1; i < s.size(); ++i) {
      CHECK_FALSE(s.terms()[i - 1].same_operator(s.terms()[i]));
    }
  }
}

TEST_CASE("canonicalization drops cancelled terms") {
  PauliSum s(2, {PauliString::from_word("XY", 0.5),
                 PauliString::from_word("XY", -0.5),
                 PauliString::from_word("ZI", 1e-14)});
  CHECK(s.is_zero());
}

TEST_CASE("PauliString rejects masks beyond the register") {
  CHECK_THROWS_AS(PauliString(2, 0b100, 0), std::invalid_argument);
  CHECK_THROWS_AS(pauli_mul(PauliString::from_word("X"),
                            PauliString::from_word("XX")),
                  std::invalid_argument);
  CHECK_THROWS(PauliString::from_word("XQ"));
}

TEST_CASE("jw_fermion images") {
  const auto last = jw_fermion(8, LadderKind::Creation, 8);
  REQUIRE(last.size() == 2);
  CHECK(last.coefficient("IIIIIIIX") == Complex(0.5, 0));
  CHECK(last.coefficient("IIIIIIIY") == Complex(0, 0.5));

  const auto first = jw_fermion(1, LadderKind::Creation, 8);
  CHECK(first.coefficient("XZZZZZZZ") == Complex(0.5, 0));
  CHECK(first.coefficient("YZZZZZZZ") == Complex(0, 0.5));

  CHECK_THROWS_AS(jw_fermion(0, LadderKind::Creation, 8), std::out_of_range);
  CHECK_THROWS_AS(jw_fermion(9, LadderKind::Annihilation, 8),
                  std::out_of_range);
}

TEST_CASE("creation operator raises down to up") {
  const auto cdag = oracle::dense(jw_fermion(1, LadderKind::Creation, 1));
  CHECK(std::abs(cdag(1, 0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(cdag(0, 1)) < 1e-15);
}

TEST_CASE("anticommutators of fermion images") {
  const int n = 8;
  const auto c3 = jw_fermion(3, LadderKind::Annihilation, n);
  const auto c5d = jw_fermion(5, LadderKind::Creation, n);
  const auto c3d = jw_fermion(3, LadderKind::Creation, n);
  CHECK(anticommutator(c3, c5d).is_zero());
  const auto id = anticommutator(c3, c3d);
  REQUIRE(id.size() == 1);
  CHECK(id.terms()[0].is_identity());
  CHECK(std::abs(id.terms()[0].coeff() - 1.0) < 1e-15);
  // The same through dense matrices.
  const auto d3 = oracle::dense(c3);
  const auto d5 = oracle::dense(c5d);
  CHECK((d3 * d5 + d5 * d3).norm() < 1e-12);
}

TEST_CASE("site indexing") {
  const SiteIndexing idx(2);
  CHECK(idx.site(1, 2) == 1);
  CHECK(idx.site(1, 1) == 2);
  CHECK(idx.site(1, -1) == 3);
  CHECK(idx.site(1, -2) == 4);
  CHECK(idx.site(-1, 2) == 5);
  CHECK(idx.site(-1, -2) == 8);
  for (int j = 1; j <= 4; ++j) {
    const SiteIndexing ix(j);
    for (int site = 1; site <= ix.n_sites(); ++site) {
      const auto [sigma, m] = ix.level_and_m(site);
      CHECK(ix.site(sigma, m) == site);
    }
  }
  CHECK_THROWS(idx.site(1, 0));
  CHECK_THROWS(idx.site(2, 1));
  CHECK_THROWS(SiteIndexing(0));
}
