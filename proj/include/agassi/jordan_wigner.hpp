#pragma once

#include <string_view>

#include "agassi/pauli.hpp"

namespace agassi {

enum class LadderKind { Creation, Annihilation };

/// Maps (level sigma = +-1, magnetic number m) onto linear site indices.
///
/// The upper level (sigma = +1) occupies sites 1..Omega in the order
/// m = j, j-1, ..., 1, -1, ..., -j; the lower level (sigma = -1) occupies
/// sites Omega+1..2*Omega in the same m order. For j = 2 this gives
/// c_{1,2} -> 1, c_{1,-2} -> 4, c_{-1,2} -> 5, c_{-1,-2} -> 8.
class SiteIndexing {
 public:
  explicit SiteIndexing(int j);

  int j() const { return j_; }
  int degeneracy() const { return 2 * j_; }
  int n_sites() const { return 4 * j_; }

  /// 1-based site for level `sigma` and magnetic number `m`.
  int site(int sigma, int m) const;
  /// Inverse of site(): returns {sigma, m}.
  std::pair<int, int> level_and_m(int site) const;

 private:
  int j_;
};

/// Jordan-Wigner image of c_i^dagger / c_i on `n_sites` sites:
/// sigma^{+-}_i followed by a sigma^z string on every site k > i.
PauliSum jw_fermion(int site, LadderKind kind, int n_sites);

enum class Collective {
  JPlus,
  JMinus,
  JZero,
  A1Dag,
  AMinus1Dag,
  A0Dag,
  A1,
  AMinus1,
  A0,
};

Collective collective_from_string(std::string_view name);
std::string_view to_string(Collective kind);

/// Quasi-spin and pair operators of the two-level model, assembled from
/// products of jw_fermion images and canonicalized.
PauliSum build_collective(Collective kind, const SiteIndexing& idx);

}  // namespace agassi
