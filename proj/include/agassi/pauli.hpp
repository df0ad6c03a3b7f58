#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace agassi {

using Complex = std::complex<double>;

/// Coefficients with magnitude below this are dropped during canonicalization.
inline constexpr double kDedupTolerance = 1e-12;

/// Largest register the bit-mask representation can hold.
inline constexpr int kMaxQubits = 64;

enum class Pauli : std::uint8_t { I, X, Y, Z };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Bit used for `site` (1-based) in a mask over `n_qubits` sites.
///
/// Site 1 is the most significant bit, which makes a mask line up with
/// amplitude indices of a StateVector: bit value 1 means the site is |up>
/// (occupied), 0 means |down> (empty).
constexpr std::uint64_t site_bit(int n_qubits, int site) {
  return std::uint64_t{1} << (n_qubits - site);
}

constexpr std::uint64_t full_mask(int n_qubits) {
  return n_qubits >= 64 ? ~std::uint64_t{0}
                        : (std::uint64_t{1} << n_qubits) - 1;
}

/// One tensor product of single-site Pauli operators times a complex
/// coefficient, stored in symplectic form. Site k carries sigma^x if only its
/// x bit is set, sigma^z if only its z bit is set and sigma^y if both are.
class PauliString {
 public:
  PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask,
              Complex coeff = 1.0);

  static PauliString identity(int n_qubits, Complex coeff = 1.0);
  static PauliString single(int n_qubits, int site, Pauli p,
                            Complex coeff = 1.0);
  /// Parses a word such as "XZZXIIII"; character k is site k+1.
  static PauliString from_word(std::string_view word, Complex coeff = 1.0);

  int n_qubits() const { return n_qubits_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  Complex coeff() const { return coeff_; }

  Pauli at(int site) const;
  int weight() const;
  /// Number of sigma^y factors.
  int y_count() const;
  /// Number of sigma^x plus sigma^y factors.
  int xy_count() const;
  bool is_identity() const { return x_ == 0 && z_ == 0; }
  bool is_diagonal() const { return x_ == 0; }

  std::string word() const;

  bool commutes_with(const PauliString& other) const;
  bool same_operator(const PauliString& other) const {
    return x_ == other.x_ && z_ == other.z_;
  }

  PauliString with_coeff(Complex c) const {
    return PauliString(n_qubits_, x_, z_, c);
  }

 private:
  int n_qubits_;
  std::uint64_t x_;
  std::uint64_t z_;
  Complex coeff_;
};

/// Product a*b with the accumulated phase folded into the coefficient.
PauliString pauli_mul(const PauliString& a, const PauliString& b);

/// Symplectic commutation test: true iff the strings commute.
bool commute(const PauliString& a, const PauliString& b);

/// A linear combination of Pauli strings over a common register.
///
/// Always held in canonical form: terms sorted by (x_mask, z_mask), no two
/// terms share masks and no coefficient is smaller than kDedupTolerance.
class PauliSum {
 public:
  explicit PauliSum(int n_qubits);
  PauliSum(int n_qubits, std::vector<PauliString> terms);
  explicit PauliSum(const PauliString& term);

  int n_qubits() const { return n_qubits_; }
  std::span<const PauliString> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Coefficient of the string with the given masks (zero if absent).
  Complex coefficient(std::uint64_t x_mask, std::uint64_t z_mask) const;
  Complex coefficient(std::string_view word) const;

  PauliSum adjoint() const;
  bool is_hermitian(double tol = kDedupTolerance) const;
  bool is_zero() const { return terms_.empty(); }
  bool approx_equal(const PauliSum& other, double tol) const;
  /// Largest coefficient magnitude of (*this - other).
  double max_abs_difference(const PauliSum& other) const;

  PauliSum& operator+=(const PauliSum& rhs);
  PauliSum& operator-=(const PauliSum& rhs);
  PauliSum& operator*=(Complex s);

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, Complex s) { return a *= s; }
  friend PauliSum operator*(Complex s, PauliSum a) { return a *= s; }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

 private:
  void canonicalize();

  int n_qubits_;
  std::vector<PauliString> terms_;
};

PauliSum commutator(const PauliSum& a, const PauliSum& b);
PauliSum anticommutator(const PauliSum& a, const PauliSum& b);

/// Sum over sites of sigma^z_i, the total magnetization operator.
PauliSum total_z(int n_qubits);

}  // namespace agassi
