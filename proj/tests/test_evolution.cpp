#include <cmath>
#include <numeric>
#include <random>

#include "dense_oracle.hpp"
#include "doctest.h"

#include "agassi/evolution.hpp"
#include "agassi/hamiltonian.hpp"

using namespace agassi;

namespace {

PauliSum random_hermitian(std::mt19937_64& rng, int n, int terms) {
  std::uniform_int_distribution<std::uint64_t> mask(0, full_mask(n));
  std::normal_distribution<double> c;
  std::vector<PauliString> out;
  for (int k = 0; k < terms; ++k) {
    const auto x = mask(rng);
    const auto z = mask(rng);
    // i^ny X^x Z^z is Hermitian when ny and the x.z overlap agree; a real
    // coefficient on the canonical string is always Hermitian here.
    out.emplace_back(n, x, z, c(rng));
  }
  PauliSum s(n, out);
  return Complex{0.5} * (s + s.adjoint());
}

oracle::Vec to_vec(const StateVector& s) {
  oracle::Vec v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return v;
}

double distance(const StateVector& a, const StateVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("basis states") {
  const auto down = basis_state("dddddddd");
  CHECK(down[0] == Complex(1, 0));
  CHECK(down.norm() == doctest::Approx(1.0));
  const auto ref = basis_state(kDefaultState);
  CHECK(ref[15] == Complex(1, 0));
  CHECK(expectation(PauliString::from_word("ZIIIIIII"), ref).real() == doctest::Approx(-1.0));
  CHECK(expectation(PauliString::from_word("IIIIIIIZ"), ref).real() == doctest::Approx(1.0));

  const auto xm = basis_state("-");
  CHECK(xm[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(xm[0].real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(expectation(PauliString::from_word("X"), xm).real() == doctest::Approx(-1.0));
  CHECK(expectation(PauliString::from_word("X"), basis_state("+")).real() ==
        doctest::Approx(1.0));
  CHECK_THROWS(basis_state("udq"));
  CHECK_THROWS(basis_state(""));
}

TEST_CASE("dense_matrix agrees with the Kronecker oracle") {
  std::mt19937_64 rng(12);
  for (int n = 1; n <= 4; ++n) {
    const auto h = random_hermitian(rng, n, 10);
    CHECK((dense_matrix(h) - oracle::dense(h)).norm() < 1e-12);
  }
}

TEST_CASE("exact propagation") {
  std::mt19937_64 rng(13);
  for (int n = 2; n <= 4; ++n) {
    const auto h = random_hermitian(rng, n, 12);
    const ExactPropagator u(h);
    std::string spec(static_cast<std::size_t>(n), 'd');
    spec[0] = 'u';
    const auto psi0 = basis_state(spec);
    CHECK(distance(u.evolve(psi0, 0.0), psi0) < 1e-12);
    for (double t : {0.3, 1.7, 4.0}) {
      const auto psi = u.evolve(psi0, t);
      const oracle::Vec expected =
          oracle::expm(Complex(0, -t) * oracle::dense(h)) * to_vec(psi0);
      CHECK((to_vec(psi) - expected).norm() < 1e-8);
      CHECK(std::abs(psi.norm() - 1.0) < 1e-10);
    }
  }
  PauliSum non_hermitian(PauliString::from_word("XY", Complex(0, 1)));
  CHECK_THROWS_AS(ExactPropagator{non_hermitian}, std::invalid_argument);
}

TEST_CASE("sector blocking reproduces full diagonalization") {
  const auto h = build_hamiltonian({1.0, 0.4, 0.7, 0.3, 2});
  const ExactPropagator u(h);
  CHECK(u.sector_blocked());
  const auto psi0 = basis_state("uuududdd");
  const auto full = dense_matrix(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(full);
  const auto ev = u.eigenvalues();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    CHECK(ev[static_cast<std::size_t>(i)] == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-10));
  }
  const double t = 2.5;
  const oracle::Vec expected = oracle::expm(Complex(0, -t) * oracle::dense(h)) * to_vec(psi0);
  CHECK((to_vec(u.evolve(psi0, t)) - expected).norm() < 1e-8);
}

TEST_CASE("exact evolution conserves norm, energy and magnetization") {
  const auto h = build_hamiltonian({1.0, 0.25, 0.25, 0.25, 2});
  const ExactPropagator u(h);
  const auto psi0 = basis_state(kDefaultState);
  const double e0 = expectation(h, psi0).real();
  const double m0 = expectation(total_z(8), psi0).real();
  for (const auto& psi : u.evolve(psi0, time_grid(20, 0.5))) {
    CHECK(std::abs(psi.norm() - 1.0) < 1e-10);
    CHECK(std::abs(expectation(h, psi).real() - e0) < 1e-8);
    CHECK(std::abs(expectation(total_z(8), psi).real() - m0) < 1e-10);
  }
}

TEST_CASE("free evolution keeps basis states") {
  const auto h = build_hamiltonian({1.0, 0, 0, 0, 2});
  const ExactPropagator u(h);
  const auto psi0 = basis_state(kDefaultState);
  for (double t : {0.5, 3.0, 10.0}) {
    CHECK(survival_probability(psi0, u.evolve(psi0, t)) == doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto groups = partition_commuting(h);
  for (int n_t : {1, 3, 7}) {
    CHECK(fidelity(h, groups, psi0, 5.0, n_t) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Trotter with one commuting group is exact") {
  // A Hamiltonian whose strings all commute: Z strings plus one X string
  // family on disjoint sites.
  PauliSum h(4, {PauliString::from_word("ZZII", 0.7), PauliString::from_word("IIXX", -0.4),
                 PauliString::from_word("ZIII", 0.2), PauliString::from_word("IIII", 1.3)});
  const std::vector<TermGroup> one{{0, h}};
  const auto psi0 = basis_state("u+-d");
  CHECK(fidelity(h, one, psi0, 3.0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  const ExactPropagator e(h);
  const TrotterPropagator t(4, one);
  // The constant term must appear as the same global phase in both.
  CHECK(distance(e.evolve(psi0, 3.0), t.evolve(psi0, 3.0, 1)) < 1e-12);
}

TEST_CASE("Trotter refuses invalid groups") {
  PauliSum h(2, {PauliString::from_word("XI"), PauliString::from_word("ZI")});
  const std::vector<TermGroup> bad{{0, h}};
  CHECK_THROWS_AS(TrotterPropagator(2, bad), std::invalid_argument);
  const std::vector<TermGroup> ok{{0, h}};
  CHECK_THROWS(TrotterPropagator(2, partition_commuting(h)).evolve(basis_state("ud"), 1.0, 0));
}

TEST_CASE("Trotter error scales as 1/n_T") {
  const auto h = build_hamiltonian({1.0, 0.25, 0.25, 0.25, 2});
  const auto groups = partition_commuting(h);
  const ExactPropagator exact(h);
  const TrotterPropagator trotter(8, groups);
  const auto psi0 = basis_state(kDefaultState);
  const double t = 2.0;
  const auto target = exact.evolve(psi0, t);
  std::vector<double> lx, ly;
  for (int n_t : {8, 16, 32, 64, 128}) {
    const auto psi = trotter.evolve(psi0, t, n_t);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-10);
    lx.push_back(std::log(n_t));
    ly.push_back(std::log(distance(psi, target)));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  CHECK(sxy / sxx == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("group order reversal matters less as n_T grows") {
  const auto h = build_hamiltonian({1.0, 0.25, 0.25, 0.25, 2});
  auto groups = partition_commuting(h);
  const TrotterPropagator fwd(8, groups);
  std::reverse(groups.begin(), groups.end());
  const TrotterPropagator rev(8, groups);
  const auto psi0 = basis_state(kDefaultState);
  std::vector<double> d;
  for (int n_t : {8, 16, 32, 64, 128}) {
    d.push_back(distance(fwd.evolve(psi0, 1.0, n_t), rev.evolve(psi0, 1.0, n_t)));
  }
  // O(t^2 / n_T): each doubling roughly halves the difference.
  for (std::size_t i = 2; i < d.size(); ++i) {
    CHECK(d[i - 1] / d[i] == doctest::Approx(2.0).epsilon(0.2));
  }
}

TEST_CASE("Trotter evolution conserves magnetization") {
  const auto h = build_hamiltonian({1.0, 0.5, 1.5, 1.5, 2});
  const TrotterPropagator u(8, partition_commuting(h));
  const auto psi0 = basis_state(kDefaultState);
  for (const auto& psi : u.evolve(psi0, time_grid(10, 0.5), 3)) {
    CHECK(std::abs(expectation(total_z(8), psi).real()) < 1e-10);
  }
}

TEST_CASE("correlations") {
  const auto psi0 = basis_state(kDefaultState);
  CHECK(correlation(psi0, 1, 2, Axis::Z, Axis::Z) == doctest::Approx(0.0));
  CHECK(correlation(basis_state("+-ud"), 1, 2, Axis::X, Axis::X) == doctest::Approx(0.0));
  CHECK_THROWS(correlation(psi0, 3, 3, Axis::Z, Axis::Z));
  CHECK_THROWS(correlation(psi0, 0, 3, Axis::Z, Axis::Z));
  CHECK(axis_from_char('y') == Axis::Y);
  CHECK_THROWS(axis_from_char('w'));

  // Bell pair (|du> + |ud>)/sqrt2 has C_zz = -1.
  StateVector bell(2);
  bell[1] = bell[2] = 1.0 / std::sqrt(2.0);
  CHECK(correlation(bell, 1, 2, Axis::Z, Axis::Z) == doctest::Approx(-1.0));
  CHECK(correlation(bell, 1, 2, Axis::X, Axis::X) == doctest::Approx(1.0));
}

TEST_CASE("equivalent correlators of the reference state") {
  const auto h = build_hamiltonian(scale_params({1.5, 2.3, 0.0}));
  const ExactPropagator u(h);
  const auto psi0 = basis_state(kDefaultState);
  const std::pair<int, int> cls[] = {{1, 2}, {1, 3}, {2, 4}, {3, 4},
                                     {5, 6}, {5, 7}, {6, 8}, {7, 8}};
  for (const auto& psi : u.evolve(psi0, time_grid(30, 0.3))) {
    const double ref = correlation(psi, 1, 2, Axis::Z, Axis::Z);
    for (const auto& [i, k] : cls) {
      CHECK(std::abs(correlation(psi, i, k, Axis::Z, Axis::Z) - ref) < 1e-10);
      CHECK(std::abs(correlation(psi, k, i, Axis::Z, Axis::Z) - ref) < 1e-10);
    }
  }
}

TEST_CASE("oscillation amplitude") {
  const std::vector<double> flat(10, 0.3);
  CHECK(oscillation_amplitude(flat) == 0.0);
  std::vector<double> wave;
  for (int k = 0; k < 400; ++k) wave.push_back(0.7 * std::cos(0.05 * k) + 0.1);
  CHECK(oscillation_amplitude(wave) == doctest::Approx(0.7).epsilon(1e-3));
  CHECK_THROWS(oscillation_amplitude(std::vector<double>{}));
  CHECK_THROWS(time_grid(0, 0.1));
  const auto g = time_grid(100, 0.1);
  CHECK(g.front() == doctest::Approx(0.1));
  CHECK(g.back() == doctest::Approx(10.0));
}
