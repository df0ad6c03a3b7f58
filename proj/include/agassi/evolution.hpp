#pragma once

#include <Eigen/Dense>
#include <span>
#include <string_view>
#include <vector>

#include "agassi/grouping.hpp"
#include "agassi/pauli.hpp"

namespace agassi {

/// Largest register handled by the dense propagators.
inline constexpr int kMaxDenseQubits = 12;

/// Imaginary parts of physical expectation values above this are treated as
/// a bug rather than rounding.
inline constexpr double kImagTolerance = 1e-10;

/// Dense amplitudes over 2^N basis states. Index bit (N - k) is site k, so
/// site 1 is the most significant bit; bit value 1 is |up>.
class StateVector {
 public:
  explicit StateVector(int n_qubits);
  StateVector(int n_qubits, std::vector<Complex> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amp_.size(); }
  const std::vector<Complex>& amplitudes() const { return amp_; }
  std::vector<Complex>& amplitudes() { return amp_; }
  Complex operator[](std::size_t i) const { return amp_[i]; }
  Complex& operator[](std::size_t i) { return amp_[i]; }

  double norm() const;

 private:
  int n_qubits_;
  std::vector<Complex> amp_;
};

/// Product state from one character per site: 'u'/'d' for sigma^z
/// eigenstates (+1/-1), '+'/'-' for sigma^x eigenstates.
StateVector basis_state(std::string_view spec);

/// The default |dddduuuu> reference state.
inline constexpr std::string_view kDefaultState = "dddduuuu";

Complex overlap(const StateVector& a, const StateVector& b);

/// |<a|b>|^2.
double survival_probability(const StateVector& psi0, const StateVector& psi_t);

/// |<a|b>|^2 between two states evolved from the same initial state.
double state_fidelity(const StateVector& a, const StateVector& b);

/// <psi| P |psi> including the coefficient of P.
Complex expectation(const PauliString& p, const StateVector& psi);
Complex expectation(const PauliSum& h, const StateVector& psi);

/// Dense matrix of a Pauli sum in the StateVector basis.
Eigen::MatrixXcd dense_matrix(const PauliSum& h);

enum class Axis { X, Y, Z };
Axis axis_from_char(char c);
char to_char(Axis a);

/// C_ab(i,k) = <s_i^a s_k^b> - <s_i^a><s_k^b> for sites i != k.
double correlation(const StateVector& psi, int i, int k, Axis alpha,
                   Axis beta);

/// (max - min) / 2 of a sampled signal.
double oscillation_amplitude(std::span<const double> series);

/// t_k = k * dt for k = 1..count.
std::vector<double> time_grid(int count, double dt);

/// exp(-i t H) from a Hermitian eigendecomposition. When H conserves the
/// number of up spins the matrix is split into those sectors first.
class ExactPropagator {
 public:
  explicit ExactPropagator(const PauliSum& h);

  int n_qubits() const { return n_qubits_; }
  bool sector_blocked() const { return blocks_.size() > 1; }
  std::vector<double> eigenvalues() const;

  StateVector evolve(const StateVector& psi0, double t) const;
  /// One decomposition of psi0 reused for every time.
  std::vector<StateVector> evolve(const StateVector& psi0,
                                  std::span<const double> times) const;

 private:
  struct Block {
    std::vector<std::size_t> index;
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;
  };
  int n_qubits_;
  std::vector<Block> blocks_;
};

/// First-order product formula (prod_k exp(-i dt H_k))^n_T with dt = t/n_T.
/// Each string of each group is applied as an exact rotation; the identity
/// component becomes a global phase.
class TrotterPropagator {
 public:
  /// Throws if a group has non-commuting members or complex coefficients.
  TrotterPropagator(int n_qubits, std::span<const TermGroup> groups);

  int n_qubits() const { return n_qubits_; }
  std::size_t rotation_count() const { return strings_.size(); }

  StateVector evolve(const StateVector& psi0, double t, int n_trotter) const;
  std::vector<StateVector> evolve(const StateVector& psi0,
                                  std::span<const double> times,
                                  int n_trotter) const;

 private:
  struct Term {
    std::uint64_t x;
    std::uint64_t z;
    int ny;
    double coeff;
  };
  int n_qubits_;
  std::vector<Term> strings_;
  double constant_ = 0.0;
};

/// F(t, n_T) = |<U_T(t) psi0 | U(t) psi0>|^2 on a fresh pair of propagators.
double fidelity(const PauliSum& h, std::span<const TermGroup> groups,
                const StateVector& psi0, double t, int n_trotter);

}  // namespace agassi
