#include <random>

#include "dense_oracle.hpp"
#include "doctest.h"

#include "agassi/grouping.hpp"
#include "agassi/hamiltonian.hpp"

using namespace agassi;

namespace {

LadderSum chains(std::initializer_list<std::pair<const char*, double>> list) {
  LadderSum out;
  for (const auto& [ops, c] : list) out.push_back({ops, Complex{c}});
  return out;
}

ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return ModelParams{1.0, u(rng), u(rng), u(rng), 2};
}

}  // namespace

TEST_CASE("expand_xyz of sigma+ matches dense raising operator") {
  const auto s = expand_xyz(chains({{"+", 1.0}}));
  const auto m = oracle::dense(s);
  CHECK(std::abs(m(1, 0) - 1.0) < 1e-15);
  CHECK(m.cwiseAbs().sum() == doctest::Approx(1.0));
  CHECK_THROWS(expand_xyz(chains({{"+q", 1.0}})));
}

TEST_CASE("collective operators reproduce the printed j = 2 images") {
  const SiteIndexing idx(2);
  const auto j0 = build_collective(Collective::JZero, idx);
  CHECK(j0.size() == 8);
  for (int site = 1; site <= 8; ++site) {
    std::string w(8, 'I');
    w[site - 1] = 'Z';
    CHECK(j0.coefficient(w) == Complex(site <= 4 ? 0.25 : -0.25, 0));
  }

  const auto jp = expand_xyz(chains({{"...+zzz-", -1.0},
                                     {"..+zzz-.", -1.0},
                                     {".+zzz-..", -1.0},
                                     {"+zzz-...", -1.0}}));
  CHECK(build_collective(Collective::JPlus, idx).approx_equal(jp, 1e-14));

  const auto a1 = expand_xyz(chains({{".++.....", 1.0}, {"+zz+....", 1.0}}));
  CHECK(build_collective(Collective::A1Dag, idx).approx_equal(a1, 1e-14));
  const auto am1 = expand_xyz(chains({{".....++.", 1.0}, {"....+zz+", 1.0}}));
  CHECK(build_collective(Collective::AMinus1Dag, idx).approx_equal(am1, 1e-14));

  const auto a0 = expand_xyz(chains({{"+zzzzzz+", 1.0},
                                     {".+zzzz+.", 1.0},
                                     {"..+zz+..", -1.0},
                                     {"...++...", -1.0}}));
  CHECK(build_collective(Collective::A0Dag, idx).approx_equal(a0, 1e-14));
}

TEST_CASE("collective algebra") {
  for (int j = 1; j <= 2; ++j) {
    const SiteIndexing idx(j);
    const auto jp = build_collective(Collective::JPlus, idx);
    const auto jm = build_collective(Collective::JMinus, idx);
    const auto j0 = build_collective(Collective::JZero, idx);
    CHECK(commutator(jp, jm).approx_equal(Complex{2.0} * j0, 1e-13));
    CHECK(jp.adjoint().approx_equal(jm, 0.0));
    for (auto [dag, plain] : {std::pair{Collective::A1Dag, Collective::A1},
                              std::pair{Collective::AMinus1Dag, Collective::AMinus1},
                              std::pair{Collective::A0Dag, Collective::A0}}) {
      CHECK(build_collective(dag, idx).adjoint().approx_equal(
          build_collective(plain, idx), 0.0));
    }
  }
  for (const char* name : {"J+", "J-", "J0", "A1+", "A-1+", "A0+", "A1", "A-1", "A0"}) {
    CHECK(to_string(collective_from_string(name)) == name);
  }
  CHECK_THROWS(collective_from_string("J2"));
}

TEST_CASE("scale_params") {
  const auto zero = scale_params({0, 0, 0});
  CHECK(zero.g == 0.0);
  CHECK(zero.V == 0.0);
  CHECK(zero.h == 0.0);
  const auto p = scale_params({1.5, 0.5, 0.0});
  CHECK(p.V == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.g == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(p.h == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const ScaledParams s{u(rng), u(rng), u(rng)};
    const auto back = unscale_params(scale_params(s));
    worst = std::max({worst, std::abs(back.chi - s.chi),
                      std::abs(back.sigma - s.sigma),
                      std::abs(back.lambda - s.lambda)});
  }
  CHECK(worst < 1e-15);
  CHECK_THROWS(scale_params({1, 1, 1}, 0.0));
}

TEST_CASE("free Hamiltonian is J0") {
  const auto h = build_hamiltonian({1.0, 0.0, 0.0, 0.0, 2});
  CHECK(h.size() == 8);
  for (const auto& t : h.terms()) CHECK(t.is_diagonal());
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::dense(h));
  CHECK(es.eigenvalues()(0) == doctest::Approx(-2.0));
  // The minimum sits on |dddduuuu>, index 15 under the site-1-is-MSB rule.
  CHECK(oracle::dense(h)(15, 15).real() == doctest::Approx(-2.0));
}

TEST_CASE("Hamiltonian is Hermitian and conserves magnetization") {
  const auto h = build_hamiltonian({1.0, 0.25, 0.25, 0.25, 2});
  CHECK(h.is_hermitian());
  CHECK(commutator(h, total_z(8)).is_zero());
  const auto m = oracle::dense(h);
  CHECK((m - m.adjoint()).norm() < 1e-12);
  const auto sz = oracle::dense(total_z(8));
  CHECK((m * sz - sz * m).norm() < 1e-12);
}

TEST_CASE("basis gives the same operator as direct construction") {
  std::mt19937_64 rng(5);
  const HamiltonianBasis basis(2);
  for (int k = 0; k < 5; ++k) {
    const auto p = random_params(rng);
    CHECK(basis.at(p).approx_equal(build_hamiltonian(p), 1e-13));
  }
  CHECK_THROWS(basis.at({1.0, 0, 0, 0, 1}));
}

TEST_CASE("printed families sum to H and have the expected sizes") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 5; ++k) {
    const auto p = random_params(rng);
    const auto fam = hamiltonian_families_j2(p);
    REQUIRE(fam.size() == 6);
    PauliSum sum(8);
    for (const auto& f : fam) sum += f.xyz;
    CHECK(sum.approx_equal(build_hamiltonian(p), 1e-12));
    CHECK(fam[2].xyz.size() == 40);
    CHECK(fam[3].xyz.size() == 40);
    CHECK(fam[4].xyz.size() == 8);
    CHECK(fam[5].xyz.size() == 48);
  }
}

TEST_CASE("H5 expands to eight strings of magnitude (g+V)/8") {
  const ModelParams p{1.0, 0.3, 0.7, 0.0, 2};
  const auto h5 = hamiltonian_families_j2(p)[4].xyz;
  REQUIRE(h5.size() == 8);
  for (const auto& t : h5.terms()) {
    CHECK(std::abs(t.coeff()) == doctest::Approx(1.0 / 8.0));
    CHECK(t.coeff().imag() == 0.0);
  }
  const auto h1 = hamiltonian_families_j2(p)[0].xyz;
  CHECK(h1.size() == 9);
  CHECK(h1.coefficient("IIIIIIII") == Complex(-0.3, 0));
}

TEST_CASE("reference table") {
  const ModelParams p{1.0, 0.4, 0.9, 1.3, 2};
  const auto ref = reference_terms_j2(p);
  CHECK(ref.size() == 136 + 9 + 8);
  int xy = 0;
  for (const auto& t : ref) {
    if (t.family >= 3) ++xy;
  }
  CHECK(xy == kReferenceXYTerms);
  const auto find = [&](int fam, int index) {
    for (const auto& t : ref) {
      if (t.family == fam && t.index == index) return t;
    }
    FAIL("missing entry");
    return ref.front();
  };
  const auto h36 = find(3, 6);
  CHECK(h36.word == "XYYXIIII");
  CHECK(h36.coeff.real() == doctest::Approx(p.g / 8));
  const auto h641 = find(6, 41);
  CHECK(h641.word == "IIXXXXII");
  CHECK(h641.coeff.real() == doctest::Approx(-p.h / 4));
  CHECK_THROWS(reference_terms_j2({1.0, 0, 0, 0, 1}));
}

TEST_CASE("reference table equals the expanded Hamiltonian") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 20; ++k) {
    const auto p = random_params(rng);
    CHECK(reference_hamiltonian_j2(p).max_abs_difference(
              expand_xyz(build_hamiltonian(p))) <= 1e-12);
  }
}

TEST_CASE("partition of the Hamiltonian") {
  const auto diag = build_hamiltonian({1.0, 0, 0, 0, 2});
  CHECK(partition_commuting(diag).size() == 1);

  std::mt19937_64 rng(4);
  for (int k = 0; k < 5; ++k) {
    const auto h = build_hamiltonian(random_params(rng));
    for (auto gran : {GroupGranularity::FlipClass, GroupGranularity::String}) {
      const auto groups = partition_commuting(h, gran);
      CHECK(check_partition(h, groups).empty());
      CHECK(groups.size() <= 9);
    }
    const auto groups = partition_commuting(h);
    CHECK(groups.size() == 8);
    for (const auto& g : groups) {
      CHECK(commutator(g.terms, total_z(8)).is_zero());
    }
  }
}

TEST_CASE("check_partition reports violations") {
  const auto h = build_hamiltonian({1.0, 0.5, 0.5, 0.5, 2});
  auto groups = partition_commuting(h);
  groups.pop_back();
  CHECK_FALSE(check_partition(h, groups).empty());
  std::vector<TermGroup> bad{{0, h}};
  CHECK(check_partition(h, bad).find("non-commuting") != std::string::npos);
}

TEST_CASE("resource estimate") {
  const std::vector<PauliString> one{PauliString::from_word("XY")};
  const auto r = estimate_resources(one, 1);
  CHECK(r.ms_gates == 1);
  CHECK(r.single_qubit_gates == 4);
  CHECK(r.total == 5);
  const std::vector<PauliString> cheap{PauliString::from_word("ZI"),
                                       PauliString::from_word("II")};
  CHECK(estimate_resources(cheap, 3).total == 0);
  const std::vector<PauliString> zz{PauliString::from_word("ZZ")};
  CHECK(estimate_resources(zz, 2).ms_gates == 2);
  CHECK(estimate_resources(zz, 2).single_qubit_gates == 0);
  CHECK_THROWS(estimate_resources(one, 0));
}
