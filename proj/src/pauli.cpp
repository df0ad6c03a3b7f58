#include "agassi/pauli.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace agassi {

namespace {

void check_site(int n_qubits, int site) {
  if (site < 1 || site > n_qubits) {
    throw std::out_of_range("site " + std::to_string(site) +
                            " outside register of " +
                            std::to_string(n_qubits) + " qubits");
  }
}

// i^k for k taken mod 4.
Complex i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

bool mask_less(const PauliString& a, const PauliString& b) {
  if (a.x_mask() != b.x_mask()) return a.x_mask() < b.x_mask();
  return a.z_mask() < b.z_mask();
}

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default:
      throw std::invalid_argument(std::string("not a Pauli label: '") + c +
                                  "'");
  }
}

PauliString::PauliString(int n_qubits, std::uint64_t x_mask,
                         std::uint64_t z_mask, Complex coeff)
    : n_qubits_(n_qubits), x_(x_mask), z_(z_mask), coeff_(coeff) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, 64]");
  }
  const auto outside = ~full_mask(n_qubits);
  if ((x_mask & outside) != 0 || (z_mask & outside) != 0) {
    throw std::invalid_argument("Pauli mask has bits beyond the register");
  }
}

PauliString PauliString::identity(int n_qubits, Complex coeff) {
  return PauliString(n_qubits, 0, 0, coeff);
}

PauliString PauliString::single(int n_qubits, int site, Pauli p,
                                Complex coeff) {
  check_site(n_qubits, site);
  const auto bit = site_bit(n_qubits, site);
  switch (p) {
    case Pauli::I: return PauliString(n_qubits, 0, 0, coeff);
    case Pauli::X: return PauliString(n_qubits, bit, 0, coeff);
    case Pauli::Y: return PauliString(n_qubits, bit, bit, coeff);
    case Pauli::Z: return PauliString(n_qubits, 0, bit, coeff);
  }
  return PauliString(n_qubits, 0, 0, coeff);
}

PauliString PauliString::from_word(std::string_view word, Complex coeff) {
  const int n = static_cast<int>(word.size());
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("Pauli word length must be in [1, 64]");
  }
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (int site = 1; site <= n; ++site) {
    const auto bit = site_bit(n, site);
    switch (pauli_from_char(word[site - 1])) {
      case Pauli::I: break;
      case Pauli::X: x |= bit; break;
      case Pauli::Y: x |= bit; z |= bit; break;
      case Pauli::Z: z |= bit; break;
    }
  }
  return PauliString(n, x, z, coeff);
}

Pauli PauliString::at(int site) const {
  check_site(n_qubits_, site);
  const auto bit = site_bit(n_qubits_, site);
  const bool hx = (x_ & bit) != 0;
  const bool hz = (z_ & bit) != 0;
  if (hx && hz) return Pauli::Y;
  if (hx) return Pauli::X;
  if (hz) return Pauli::Z;
  return Pauli::I;
}

int PauliString::weight() const { return std::popcount(x_ | z_); }
int PauliString::y_count() const { return std::popcount(x_ & z_); }
int PauliString::xy_count() const { return std::popcount(x_); }

std::string PauliString::word() const {
  std::string out(static_cast<std::size_t>(n_qubits_), 'I');
  for (int site = 1; site <= n_qubits_; ++site) {
    out[site - 1] = to_char(at(site));
  }
  return out;
}

bool PauliString::commutes_with(const PauliString& other) const {
  return commute(*this, other);
}

bool commute(const PauliString& a, const PauliString& b) {
  const int form = std::popcount((a.x_mask() & b.z_mask()) ^
                                 (a.z_mask() & b.x_mask()));
  return (form & 1) == 0;
}

// Every string is i^{ny} X^x Z^z with Z applied first on each site. Moving
// Z^{za} past X^{xb} costs (-1)^{|za & xb|}; the product is then rewritten in
// the same normal form.
PauliString pauli_mul(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("pauli_mul: mismatched qubit counts");
  }
  const auto x = a.x_mask() ^ b.x_mask();
  const auto z = a.z_mask() ^ b.z_mask();
  const int ny_c = std::popcount(x & z);
  const int swap_sign = std::popcount(a.z_mask() & b.x_mask()) & 1;
  const int k = a.y_count() + b.y_count() - ny_c + 2 * swap_sign;
  return PauliString(a.n_qubits(), x, z, a.coeff() * b.coeff() * i_pow(k));
}

PauliSum::PauliSum(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, 64]");
  }
}

PauliSum::PauliSum(int n_qubits, std::vector<PauliString> terms)
    : PauliSum(n_qubits) {
  for (const auto& t : terms) {
    if (t.n_qubits() != n_qubits) {
      throw std::invalid_argument("PauliSum: term register size mismatch");
    }
  }
  terms_ = std::move(terms);
  canonicalize();
}

PauliSum::PauliSum(const PauliString& term)
    : PauliSum(term.n_qubits(), std::vector<PauliString>{term}) {}

void PauliSum::canonicalize() {
  std::stable_sort(terms_.begin(), terms_.end(), mask_less);
  std::vector<PauliString> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().same_operator(t)) {
      merged.back() = merged.back().with_coeff(merged.back().coeff() +
                                               t.coeff());
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const PauliString& t) {
    return std::abs(t.coeff()) < kDedupTolerance;
  });
  terms_ = std::move(merged);
}

Complex PauliSum::coefficient(std::uint64_t x_mask,
                              std::uint64_t z_mask) const {
  const PauliString key(n_qubits_, x_mask, z_mask);
  const auto it =
      std::lower_bound(terms_.begin(), terms_.end(), key, mask_less);
  if (it != terms_.end() && it->same_operator(key)) return it->coeff();
  return 0.0;
}

Complex PauliSum::coefficient(std::string_view word) const {
  const auto p = PauliString::from_word(word);
  if (p.n_qubits() != n_qubits_) {
    throw std::invalid_argument("coefficient: word length mismatch");
  }
  return coefficient(p.x_mask(), p.z_mask());
}

PauliSum PauliSum::adjoint() const {
  std::vector<PauliString> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t.with_coeff(std::conj(t.coeff())));
  return PauliSum(n_qubits_, std::move(out));
}

bool PauliSum::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(), [tol](const auto& t) {
    return std::abs(t.coeff().imag()) <= tol;
  });
}

double PauliSum::max_abs_difference(const PauliSum& other) const {
  if (other.n_qubits_ != n_qubits_) {
    throw std::invalid_argument("max_abs_difference: register mismatch");
  }
  double worst = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  const auto& a = terms_;
  const auto& b = other.terms_;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && mask_less(a[i], b[j]))) {
      worst = std::max(worst, std::abs(a[i++].coeff()));
    } else if (i == a.size() || mask_less(b[j], a[i])) {
      worst = std::max(worst, std::abs(b[j++].coeff()));
    } else {
      worst = std::max(worst, std::abs(a[i++].coeff() - b[j++].coeff()));
    }
  }
  return worst;
}

bool PauliSum::approx_equal(const PauliSum& other, double tol) const {
  return max_abs_difference(other) <= tol;
}

PauliSum& PauliSum::operator+=(const PauliSum& rhs) {
  if (rhs.n_qubits_ != n_qubits_) {
    throw std::invalid_argument("PauliSum +: register mismatch");
  }
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  canonicalize();
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& rhs) {
  return *this += rhs * Complex{-1.0};
}

PauliSum& PauliSum::operator*=(Complex s) {
  for (auto& t : terms_) t = t.with_coeff(t.coeff() * s);
  canonicalize();
  return *this;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("PauliSum *: register mismatch");
  }
  std::vector<PauliString> out;
  out.reserve(a.size() * b.size());
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) out.push_back(pauli_mul(ta, tb));
  }
  return PauliSum(a.n_qubits(), std::move(out));
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  return a * b - b * a;
}

PauliSum anticommutator(const PauliSum& a, const PauliSum& b) {
  return a * b + b * a;
}

PauliSum total_z(int n_qubits) {
  PauliSum out(n_qubits);
  for (int site = 1; site <= n_qubits; ++site) {
    out += PauliSum(PauliString::single(n_qubits, site, Pauli::Z));
  }
  return out;
}

}  // namespace agassi
