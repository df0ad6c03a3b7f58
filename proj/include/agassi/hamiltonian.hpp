#pragma once

#include <string>
#include <vector>

#include "agassi/jordan_wigner.hpp"
#include "agassi/pauli.hpp"

namespace agassi {

/// Couplings of the extended two-level pairing model.
struct ModelParams {
  double epsilon = 1.0;  ///< single-particle splitting, sets the energy unit
  double g = 0.0;        ///< pairing strength
  double V = 0.0;        ///< monopole strength
  double h = 0.0;        ///< extended pairing strength
  int j = 2;             ///< half degeneracy, Omega = 2j, N = 4j sites

  int n_sites() const { return 4 * j; }
  void validate() const;
};

/// Dimensionless control parameters (chi, Sigma, Lambda).
struct ScaledParams {
  double chi = 0.0;
  double sigma = 0.0;
  double lambda = 0.0;
};

/// V = eps*chi/(2j-1), g = eps*Sigma/(2j-1), h = eps*Lambda/(2j-1).
ModelParams scale_params(const ScaledParams& s, double epsilon = 1.0,
                         int j = 2);
ScaledParams unscale_params(const ModelParams& p);

/// H = eps J0 - g sum_{s,s'=+-1} A_s^dag A_s' - V/2 [(J+)^2 + (J-)^2]
///     - 2h A0^dag A0, assembled from the Jordan-Wigner images.
PauliSum build_hamiltonian(const ModelParams& p);

/// Precomputed coupling components of H so that H(p) is a cheap linear
/// combination. Used when sweeping many parameter points at fixed j.
class HamiltonianBasis {
 public:
  explicit HamiltonianBasis(int j);

  int j() const { return j_; }
  PauliSum at(const ModelParams& p) const;

 private:
  int j_;
  PauliSum kinetic_;
  PauliSum pairing_;
  PauliSum monopole_;
  PauliSum extended_;
};

/// Operator written with ladder bookkeeping: one character per site, from
/// {'.', 'I', 'x', 'y', 'z', '+', '-'} (case-insensitive for x/y/z).
struct LadderTerm {
  std::string ops;
  Complex coeff = 1.0;
};

using LadderSum = std::vector<LadderTerm>;

/// Adds the Hermitian conjugate of every term ("+ H.c.").
LadderSum with_hermitian_conjugate(const LadderSum& terms);

/// Rewrites sigma^+- into (sigma^x +- i sigma^y)/2 and returns the canonical
/// x/y/z form.
PauliSum expand_xyz(const LadderSum& terms);
/// Canonical x/y/z form of an operator already held as Pauli strings.
PauliSum expand_xyz(const PauliSum& h);

/// One of the six printed blocks H1..H6 of the j = 2 Hamiltonian.
struct TermFamily {
  int index = 0;      ///< 1..6
  LadderSum ladder;   ///< sigma^+- form as printed
  PauliSum xyz;       ///< expand_xyz(ladder)
};

/// H1..H6 for j = 2, written in the same ladder form as the printed blocks.
/// Their sum equals build_hamiltonian(p).
std::vector<TermFamily> hamiltonian_families_j2(const ModelParams& p);

enum class Coupling { G, V, GPlusV, H };

/// One labelled entry H_{family,index} of the reference decomposition.
struct ReferenceTerm {
  int family = 0;
  int index = 0;
  std::string word;  ///< 8-character Pauli word, site 1 first
  Complex coeff;
};

/// Hard-coded x/y decomposition of H3..H6 (136 entries) followed by the
/// diagonal content of H1 (eight sigma^z plus the constant) and H2 (eight
/// sigma^z sigma^z). Requires j = 2.
std::vector<ReferenceTerm> reference_terms_j2(const ModelParams& p);

/// Canonical sum of reference_terms_j2(p).
PauliSum reference_hamiltonian_j2(const ModelParams& p);

/// Number of x/y entries contributed by each of H3..H6 (40, 40, 8, 48).
inline constexpr int kReferenceXYTerms = 136;

}  // namespace agassi
