#include "agassi/evolution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "agassi/kernels.hpp"

namespace agassi {

namespace {

void check_dense_size(int n) {
  if (n < 1 || n > kMaxDenseQubits) {
    throw std::invalid_argument("dense evolution supports 1.." +
                                std::to_string(kMaxDenseQubits) + " qubits");
  }
}

void check_same_register(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("state dimensions differ");
  }
}

// P|b> = phase(b) |b ^ x> for P = i^ny X^x Z^z with sigma^z|up> = +|up>.
Complex string_phase(std::uint64_t z, int ny, std::uint64_t b) {
  static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const int sign = (std::popcount(z) + std::popcount(z & b)) & 1;
  const Complex ph = kIPow[ny & 3];
  return sign ? -ph : ph;
}

double real_checked(Complex v, const char* what) {
  if (std::abs(v.imag()) > kImagTolerance) {
    throw std::logic_error(std::string(what) + " has imaginary part " +
                           std::to_string(v.imag()));
  }
  return v.real();
}

}  // namespace

StateVector::StateVector(int n_qubits)
    : n_qubits_(n_qubits), amp_() {
  check_dense_size(n_qubits);
  amp_.assign(std::size_t{1} << n_qubits, Complex{});
}

StateVector::StateVector(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amp_(std::move(amplitudes)) {
  check_dense_size(n_qubits);
  if (amp_.size() != (std::size_t{1} << n_qubits)) {
    throw std::invalid_argument("StateVector: wrong amplitude count");
  }
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return std::sqrt(s);
}

StateVector basis_state(std::string_view spec) {
  const int n = static_cast<int>(spec.size());
  if (n < 1 || n > kMaxDenseQubits) {
    throw std::invalid_argument("state spec must have 1.." +
                                std::to_string(kMaxDenseQubits) + " sites");
  }
  // Per-site amplitudes on (|down>, |up>).
  std::vector<std::pair<double, double>> site(static_cast<std::size_t>(n));
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < n; ++k) {
    switch (spec[static_cast<std::size_t>(k)]) {
      case 'u': case 'U': site[k] = {0.0, 1.0}; break;
      case 'd': case 'D': site[k] = {1.0, 0.0}; break;
      case '+': site[k] = {r, r}; break;
      case '-': site[k] = {-r, r}; break;
      default:
        throw std::invalid_argument("bad state spec character '" +
                                    std::string(1, spec[k]) +
                                    "' (use u, d, + or -)");
    }
  }
  StateVector psi(n);
  for (std::size_t b = 0; b < psi.dim(); ++b) {
    double a = 1.0;
    for (int k = 0; k < n && a != 0.0; ++k) {
      const bool up = (b >> (n - 1 - k)) & 1;
      a *= up ? site[k].second : site[k].first;
    }
    psi[b] = a;
  }
  return psi;
}

Complex overlap(const StateVector& a, const StateVector& b) {
  check_same_register(a, b);
  Complex s{};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double survival_probability(const StateVector& psi0,
                            const StateVector& psi_t) {
  return std::norm(overlap(psi0, psi_t));
}

double state_fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(overlap(a, b));
}

Complex expectation(const PauliString& p, const StateVector& psi) {
  if (p.n_qubits() != psi.n_qubits()) {
    throw std::invalid_argument("expectation: register mismatch");
  }
  Complex s{};
  for (std::size_t b = 0; b < psi.dim(); ++b) {
    if (psi[b] == Complex{}) continue;
    s += std::conj(psi[b ^ p.x_mask()]) *
         string_phase(p.z_mask(), p.y_count(), b) * psi[b];
  }
  return p.coeff() * s;
}

Complex expectation(const PauliSum& h, const StateVector& psi) {
  Complex s{};
  for (const auto& t : h.terms()) s += expectation(t, psi);
  return s;
}

Eigen::MatrixXcd dense_matrix(const PauliSum& h) {
  check_dense_size(h.n_qubits());
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << h.n_qubits());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      m(static_cast<Eigen::Index>(b ^ t.x_mask()), static_cast<Eigen::Index>(b)) +=
          t.coeff() * string_phase(t.z_mask(), t.y_count(), b);
    }
  }
  return m;
}

Axis axis_from_char(char c) {
  switch (c) {
    case 'x': case 'X': return Axis::X;
    case 'y': case 'Y': return Axis::Y;
    case 'z': case 'Z': return Axis::Z;
    default:
      throw std::invalid_argument(std::string("bad axis '") + c + "'");
  }
}

char to_char(Axis a) {
  switch (a) {
    case Axis::X: return 'x';
    case Axis::Y: return 'y';
    case Axis::Z: return 'z';
  }
  return '?';
}

namespace {

Pauli to_pauli(Axis a) {
  switch (a) {
    case Axis::X: return Pauli::X;
    case Axis::Y: return Pauli::Y;
    case Axis::Z: return Pauli::Z;
  }
  return Pauli::I;
}

}  // namespace

double correlation(const StateVector& psi, int i, int k, Axis alpha,
                   Axis beta) {
  const int n = psi.n_qubits();
  if (i == k) throw std::invalid_argument("correlation needs two distinct sites");
  if (i < 1 || k < 1 || i > n || k > n) {
    throw std::out_of_range("correlation: site outside the register");
  }
  const auto si = PauliString::single(n, i, to_pauli(alpha));
  const auto sk = PauliString::single(n, k, to_pauli(beta));
  const double both = real_checked(expectation(pauli_mul(si, sk), psi), "<s_i s_k>");
  const double ei = real_checked(expectation(si, psi), "<s_i>");
  const double ek = real_checked(expectation(sk, psi), "<s_k>");
  return both - ei * ek;
}

double oscillation_amplitude(std::span<const double> series) {
  if (series.empty()) {
    throw std::invalid_argument("oscillation_amplitude: empty series");
  }
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  return 0.5 * (*hi - *lo);
}

std::vector<double> time_grid(int count, double dt) {
  if (count < 1 || !(dt > 0.0)) {
    throw std::invalid_argument("time_grid needs count >= 1 and dt > 0");
  }
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) t[k] = (k + 1) * dt;
  return t;
}

ExactPropagator::ExactPropagator(const PauliSum& h) : n_qubits_(h.n_qubits()) {
  check_dense_size(n_qubits_);
  if (!h.is_hermitian()) {
    throw std::invalid_argument("ExactPropagator: Hamiltonian is not Hermitian");
  }
  const Eigen::MatrixXcd m = dense_matrix(h);
  const auto dim = static_cast<std::size_t>(m.rows());

  // Individual strings need not keep the up-spin count; their sum may.
  bool conserves = true;
  for (Eigen::Index c = 0; c < m.cols() && conserves; ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (std::abs(m(r, c)) > kDedupTolerance &&
          std::popcount(static_cast<std::uint64_t>(r)) !=
              std::popcount(static_cast<std::uint64_t>(c))) {
        conserves = false;
        break;
      }
    }
  }

  std::vector<std::vector<std::size_t>> sectors;
  if (conserves) {
    sectors.resize(static_cast<std::size_t>(n_qubits_) + 1);
    for (std::size_t b = 0; b < dim; ++b) {
      sectors[static_cast<std::size_t>(std::popcount(b))].push_back(b);
    }
  } else {
    sectors.emplace_back(dim);
    for (std::size_t b = 0; b < dim; ++b) sectors[0][b] = b;
  }

  for (auto& idx : sectors) {
    const auto d = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd sub(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) {
        sub(r, c) = m(static_cast<Eigen::Index>(idx[r]),
                      static_cast<Eigen::Index>(idx[c]));
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("ExactPropagator: eigensolver failed");
    }
    blocks_.push_back({std::move(idx), es.eigenvalues(), es.eigenvectors()});
  }
}

std::vector<double> ExactPropagator::eigenvalues() const {
  std::vector<double> out;
  for (const auto& b : blocks_) {
    out.insert(out.end(), b.energies.data(), b.energies.data() + b.energies.size());
  }
  std::sort(out.begin(), out.end());
  return out;
}

StateVector ExactPropagator::evolve(const StateVector& psi0, double t) const {
  const double times[] = {t};
  return std::move(evolve(psi0, times).front());
}

std::vector<StateVector> ExactPropagator::evolve(
    const StateVector& psi0, std::span<const double> times) const {
  if (psi0.n_qubits() != n_qubits_) {
    throw std::invalid_argument("ExactPropagator: register mismatch");
  }
  struct Projected {
    const Block* block;
    Eigen::VectorXcd coeff;  // V^dagger psi0 restricted to the block
  };
  std::vector<Projected> parts;
  for (const auto& b : blocks_) {
    Eigen::VectorXcd local(static_cast<Eigen::Index>(b.index.size()));
    bool any = false;
    for (std::size_t i = 0; i < b.index.size(); ++i) {
      local(static_cast<Eigen::Index>(i)) = psi0[b.index[i]];
      any = any || psi0[b.index[i]] != Complex{};
    }
    if (!any) continue;
    parts.push_back({&b, b.vectors.adjoint() * local});
  }

  std::vector<StateVector> out;
  out.reserve(times.size());
  for (const double t : times) {
    StateVector psi(n_qubits_);
    for (const auto& p : parts) {
      Eigen::VectorXcd phased(p.coeff.size());
      for (Eigen::Index i = 0; i < p.coeff.size(); ++i) {
        const double e = p.block->energies(i);
        phased(i) = Complex(std::cos(e * t), -std::sin(e * t)) * p.coeff(i);
      }
      const Eigen::VectorXcd local = p.block->vectors * phased;
      for (std::size_t i = 0; i < p.block->index.size(); ++i) {
        psi[p.block->index[i]] = local(static_cast<Eigen::Index>(i));
      }
    }
    out.push_back(std::move(psi));
  }
  return out;
}

TrotterPropagator::TrotterPropagator(int n_qubits,
                                     std::span<const TermGroup> groups)
    : n_qubits_(n_qubits) {
  check_dense_size(n_qubits);
  for (const auto& g : groups) {
    if (g.terms.n_qubits() != n_qubits) {
      throw std::invalid_argument("TrotterPropagator: group register mismatch");
    }
    if (!group_commutes(g.terms)) {
      throw std::invalid_argument("TrotterPropagator: group " +
                                  std::to_string(g.id) +
                                  " has non-commuting members");
    }
    for (const auto& t : g.terms.terms()) {
      if (std::abs(t.coeff().imag()) > kDedupTolerance) {
        throw std::invalid_argument(
            "TrotterPropagator: complex coefficient on " + t.word());
      }
      if (t.is_identity()) {
        constant_ += t.coeff().real();
      } else {
        strings_.push_back({t.x_mask(), t.z_mask(), t.y_count(), t.coeff().real()});
      }
    }
  }
}

StateVector TrotterPropagator::evolve(const StateVector& psi0, double t,
                                      int n_trotter) const {
  const double times[] = {t};
  return std::move(evolve(psi0, times, n_trotter).front());
}

std::vector<StateVector> TrotterPropagator::evolve(
    const StateVector& psi0, std::span<const double> times,
    int n_trotter) const {
  if (n_trotter < 1) throw std::invalid_argument("n_T must be >= 1");
  if (psi0.n_qubits() != n_qubits_) {
    throw std::invalid_argument("TrotterPropagator: register mismatch");
  }
  const std::size_t dim = psi0.dim();
  std::vector<double> re(dim), im(dim), re2(dim), im2(dim);
  std::vector<kernels::Rotation> rot(strings_.size());

  std::vector<StateVector> out;
  out.reserve(times.size());
  for (const double t : times) {
    const double dt = t / n_trotter;
    for (std::size_t s = 0; s < strings_.size(); ++s) {
      const auto& term = strings_[s];
      rot[s] = kernels::make_rotation(term.x, term.z, term.ny, term.coeff * dt);
    }
    for (std::size_t b = 0; b < dim; ++b) {
      re[b] = psi0[b].real();
      im[b] = psi0[b].imag();
    }
    for (int step = 0; step < n_trotter; ++step) {
      for (const auto& r : rot) {
        kernels::rotate(r, re.data(), im.data(), re2.data(), im2.data(), dim);
        re.swap(re2);
        im.swap(im2);
      }
    }
    const Complex phase(std::cos(constant_ * t), -std::sin(constant_ * t));
    StateVector psi(n_qubits_);
    for (std::size_t b = 0; b < dim; ++b) psi[b] = phase * Complex(re[b], im[b]);
    out.push_back(std::move(psi));
  }
  return out;
}

double fidelity(const PauliSum& h, std::span<const TermGroup> groups,
                const StateVector& psi0, double t, int n_trotter) {
  const ExactPropagator exact(h);
  const TrotterPropagator trotter(h.n_qubits(), groups);
  return state_fidelity(trotter.evolve(psi0, t, n_trotter), exact.evolve(psi0, t));
}

}  // namespace agassi
