#include "agassi/jordan_wigner.hpp"

#include <stdexcept>
#include <string>

namespace agassi {

SiteIndexing::SiteIndexing(int j) : j_(j) {
  if (j < 1 || 4 * j > kMaxQubits) {
    throw std::invalid_argument("SiteIndexing: j must be in [1, 16]");
  }
}

int SiteIndexing::site(int sigma, int m) const {
  if (sigma != 1 && sigma != -1) {
    throw std::invalid_argument("SiteIndexing: sigma must be +1 or -1");
  }
  if (m == 0 || m > j_ || m < -j_) {
    throw std::invalid_argument("SiteIndexing: m out of range: " +
                                std::to_string(m));
  }
  // m = j..1 -> positions 1..j, m = -1..-j -> positions j+1..2j
  const int pos = m > 0 ? j_ - m + 1 : j_ - m;
  return sigma == 1 ? pos : degeneracy() + pos;
}

std::pair<int, int> SiteIndexing::level_and_m(int site) const {
  if (site < 1 || site > n_sites()) {
    throw std::out_of_range("SiteIndexing: site out of range");
  }
  const int sigma = site <= degeneracy() ? 1 : -1;
  const int pos = sigma == 1 ? site : site - degeneracy();
  const int m = pos <= j_ ? j_ - pos + 1 : j_ - pos;
  return {sigma, m};
}

PauliSum jw_fermion(int site, LadderKind kind, int n_sites) {
  if (n_sites < 1 || n_sites > kMaxQubits) {
    throw std::invalid_argument("jw_fermion: bad register size");
  }
  if (site < 1 || site > n_sites) {
    throw std::out_of_range("jw_fermion: site " + std::to_string(site) +
                            " outside 1.." + std::to_string(n_sites));
  }
  std::uint64_t tail = 0;
  for (int k = site + 1; k <= n_sites; ++k) tail |= site_bit(n_sites, k);
  const auto bit = site_bit(n_sites, site);
  // sigma^+ = (X + iY)/2 raises |down> (empty) to |up> (occupied).
  const Complex y_coeff =
      kind == LadderKind::Creation ? Complex{0.0, 0.5} : Complex{0.0, -0.5};
  return PauliSum(n_sites, {PauliString(n_sites, bit, tail, 0.5),
                            PauliString(n_sites, bit, bit | tail, y_coeff)});
}

Collective collective_from_string(std::string_view name) {
  if (name == "J+") return Collective::JPlus;
  if (name == "J-") return Collective::JMinus;
  if (name == "J0") return Collective::JZero;
  if (name == "A1+") return Collective::A1Dag;
  if (name == "A-1+") return Collective::AMinus1Dag;
  if (name == "A0+") return Collective::A0Dag;
  if (name == "A1") return Collective::A1;
  if (name == "A-1") return Collective::AMinus1;
  if (name == "A0") return Collective::A0;
  throw std::invalid_argument("unknown collective operator: " +
                              std::string(name));
}

std::string_view to_string(Collective kind) {
  switch (kind) {
    case Collective::JPlus: return "J+";
    case Collective::JMinus: return "J-";
    case Collective::JZero: return "J0";
    case Collective::A1Dag: return "A1+";
    case Collective::AMinus1Dag: return "A-1+";
    case Collective::A0Dag: return "A0+";
    case Collective::A1: return "A1";
    case Collective::AMinus1: return "A-1";
    case Collective::A0: return "A0";
  }
  return "?";
}

namespace {

PauliSum cdag(const SiteIndexing& idx, int sigma, int m) {
  return jw_fermion(idx.site(sigma, m), LadderKind::Creation, idx.n_sites());
}

PauliSum c(const SiteIndexing& idx, int sigma, int m) {
  return jw_fermion(idx.site(sigma, m), LadderKind::Annihilation,
                    idx.n_sites());
}

PauliSum j_plus(const SiteIndexing& idx) {
  PauliSum out(idx.n_sites());
  for (int m = -idx.j(); m <= idx.j(); ++m) {
    if (m == 0) continue;
    out += cdag(idx, 1, m) * c(idx, -1, m);
  }
  return out;
}

PauliSum j_zero(const SiteIndexing& idx) {
  PauliSum out(idx.n_sites());
  for (int m = -idx.j(); m <= idx.j(); ++m) {
    if (m == 0) continue;
    out += cdag(idx, 1, m) * c(idx, 1, m);
    out -= cdag(idx, -1, m) * c(idx, -1, m);
  }
  return out * Complex{0.5};
}

// sum_{m>0} c^dag_{sigma,m} c^dag_{sigma,-m}
PauliSum a_sigma_dag(const SiteIndexing& idx, int sigma) {
  PauliSum out(idx.n_sites());
  for (int m = 1; m <= idx.j(); ++m) {
    out += cdag(idx, sigma, m) * cdag(idx, sigma, -m);
  }
  return out;
}

// sum_{m>0} (c^dag_{-1,m} c^dag_{1,-m} - c^dag_{-1,-m} c^dag_{1,m})
PauliSum a_zero_dag(const SiteIndexing& idx) {
  PauliSum out(idx.n_sites());
  for (int m = 1; m <= idx.j(); ++m) {
    out += cdag(idx, -1, m) * cdag(idx, 1, -m);
    out -= cdag(idx, -1, -m) * cdag(idx, 1, m);
  }
  return out;
}

}  // namespace

PauliSum build_collective(Collective kind, const SiteIndexing& idx) {
  switch (kind) {
    case Collective::JPlus: return j_plus(idx);
    case Collective::JMinus: return j_plus(idx).adjoint();
    case Collective::JZero: return j_zero(idx);
    case Collective::A1Dag: return a_sigma_dag(idx, 1);
    case Collective::AMinus1Dag: return a_sigma_dag(idx, -1);
    case Collective::A0Dag: return a_zero_dag(idx);
    case Collective::A1: return a_sigma_dag(idx, 1).adjoint();
    case Collective::AMinus1: return a_sigma_dag(idx, -1).adjoint();
    case Collective::A0: return a_zero_dag(idx).adjoint();
  }
  throw std::invalid_argument("build_collective: unknown kind");
}

}  // namespace agassi
