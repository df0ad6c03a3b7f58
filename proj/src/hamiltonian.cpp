#include "agassi/hamiltonian.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace agassi {

void ModelParams::validate() const {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("ModelParams: epsilon must be positive");
  }
  if (j != 1 && j != 2) {
    throw std::invalid_argument("ModelParams: j must be 1 or 2");
  }
  if (!std::isfinite(g) || !std::isfinite(V) || !std::isfinite(h)) {
    throw std::invalid_argument("ModelParams: couplings must be finite");
  }
}

ModelParams scale_params(const ScaledParams& s, double epsilon, int j) {
  if (!(epsilon > 0.0) || 2 * j - 1 <= 0) {
    throw std::invalid_argument("scale_params: need epsilon > 0 and j >= 1");
  }
  const double unit = epsilon / (2.0 * j - 1.0);
  return ModelParams{epsilon, unit * s.sigma, unit * s.chi, unit * s.lambda,
                     j};
}

ScaledParams unscale_params(const ModelParams& p) {
  const double inv = (2.0 * p.j - 1.0) / p.epsilon;
  return ScaledParams{p.V * inv, p.g * inv, p.h * inv};
}

namespace {

struct Components {
  PauliSum kinetic;   // J0
  PauliSum pairing;   // -sum A_s^dag A_s'
  PauliSum monopole;  // -1/2 [(J+)^2 + (J-)^2]
  PauliSum extended;  // -2 A0^dag A0
};

Components components(int j) {
  const SiteIndexing idx(j);
  const auto jp = build_collective(Collective::JPlus, idx);
  const auto jm = build_collective(Collective::JMinus, idx);
  const auto a1d = build_collective(Collective::A1Dag, idx);
  const auto am1d = build_collective(Collective::AMinus1Dag, idx);
  const auto a0d = build_collective(Collective::A0Dag, idx);

  const auto a_dag_sum = a1d + am1d;
  return Components{
      build_collective(Collective::JZero, idx),
      Complex{-1.0} * (a_dag_sum * a_dag_sum.adjoint()),
      Complex{-0.5} * (jp * jp + jm * jm),
      Complex{-2.0} * (a0d * a0d.adjoint()),
  };
}

}  // namespace

PauliSum build_hamiltonian(const ModelParams& p) {
  p.validate();
  const auto c = components(p.j);
  return Complex{p.epsilon} * c.kinetic + Complex{p.g} * c.pairing +
         Complex{p.V} * c.monopole + Complex{p.h} * c.extended;
}

HamiltonianBasis::HamiltonianBasis(int j)
    : j_(j),
      kinetic_(4 * j),
      pairing_(4 * j),
      monopole_(4 * j),
      extended_(4 * j) {
  ModelParams{1.0, 0.0, 0.0, 0.0, j}.validate();
  auto c = components(j);
  kinetic_ = std::move(c.kinetic);
  pairing_ = std::move(c.pairing);
  monopole_ = std::move(c.monopole);
  extended_ = std::move(c.extended);
}

PauliSum HamiltonianBasis::at(const ModelParams& p) const {
  p.validate();
  if (p.j != j_) throw std::invalid_argument("HamiltonianBasis: j mismatch");
  return Complex{p.epsilon} * kinetic_ + Complex{p.g} * pairing_ +
         Complex{p.V} * monopole_ + Complex{p.h} * extended_;
}

LadderSum with_hermitian_conjugate(const LadderSum& terms) {
  LadderSum out = terms;
  for (const auto& t : terms) {
    LadderTerm adj{t.ops, std::conj(t.coeff)};
    for (auto& ch : adj.ops) {
      if (ch == '+') {
        ch = '-';
      } else if (ch == '-') {
        ch = '+';
      }
    }
    out.push_back(std::move(adj));
  }
  return out;
}

namespace {

PauliSum site_operator(int n, int site, char op) {
  switch (std::tolower(static_cast<unsigned char>(op))) {
    case '.':
    case 'i':
      return PauliSum(PauliString::identity(n));
    case 'x':
      return PauliSum(PauliString::single(n, site, Pauli::X));
    case 'y':
      return PauliSum(PauliString::single(n, site, Pauli::Y));
    case 'z':
      return PauliSum(PauliString::single(n, site, Pauli::Z));
    case '+':
      return PauliSum(n, {PauliString::single(n, site, Pauli::X, 0.5),
                          PauliString::single(n, site, Pauli::Y, {0.0, 0.5})});
    case '-':
      return PauliSum(n, {PauliString::single(n, site, Pauli::X, 0.5),
                          PauliString::single(n, site, Pauli::Y, {0.0, -0.5})});
    default:
      throw std::invalid_argument(std::string("expand_xyz: bad site op '") +
                                  op + "'");
  }
}

}  // namespace

PauliSum expand_xyz(const LadderSum& terms) {
  if (terms.empty()) throw std::invalid_argument("expand_xyz: empty input");
  const int n = static_cast<int>(terms.front().ops.size());
  PauliSum out(n);
  for (const auto& t : terms) {
    if (static_cast<int>(t.ops.size()) != n) {
      throw std::invalid_argument("expand_xyz: inconsistent term lengths");
    }
    PauliSum product(PauliString::identity(n, t.coeff));
    for (int site = 1; site <= n; ++site) {
      const char op = t.ops[site - 1];
      if (op == '.' || op == 'I' || op == 'i') continue;
      product = product * site_operator(n, site, op);
    }
    out += product;
  }
  return out;
}

PauliSum expand_xyz(const PauliSum& h) { return h; }

std::vector<TermFamily> hamiltonian_families_j2(const ModelParams& p) {
  p.validate();
  if (p.j != 2) {
    throw std::invalid_argument("hamiltonian_families_j2 requires j = 2");
  }
  const double eps = p.epsilon;
  const double g = p.g;
  const double V = p.V;
  const double h = p.h;

  auto scaled = [](std::initializer_list<const char*> chains, double c) {
    LadderSum out;
    for (const char* s : chains) out.push_back({s, Complex{c}});
    return out;
  };

  LadderSum h1;
  const double upper = (eps - g - 2.0 * h) / 4.0;
  const double lower = -(eps + g + 2.0 * h) / 4.0;
  for (const char* s : {"z.......", ".z......", "..z.....", "...z...."}) {
    h1.push_back({s, Complex{upper}});
  }
  for (const char* s : {"....z...", ".....z..", "......z.", ".......z"}) {
    h1.push_back({s, Complex{lower}});
  }
  h1.push_back({"........", Complex{-(g + 2.0 * h)}});

  LadderSum h2 = scaled({"z..z....", ".zz.....", "....z..z", ".....zz."},
                        -g / 4.0);
  for (auto& t : scaled({"z......z", ".z....z.", "..z..z..", "...zz..."},
                        -h / 2.0)) {
    h2.push_back(t);
  }

  const LadderSum h3 = with_hermitian_conjugate(
      scaled({"+zz+.--.", ".++.-zz-", "+--+....", ".++..--.", "....+--+"},
             -g));
  const LadderSum h4 = with_hermitian_conjugate(
      scaled({"+z+.-z-.", ".+z+.-z-", "++..--..", ".++..--.", "..++..--"},
             -V));
  const LadderSum h5 =
      with_hermitian_conjugate(scaled({"+zz+-zz-"}, -(g + V)));
  const LadderSum h6 = with_hermitian_conjugate(LadderSum{
      {"+-....-+", Complex{-2.0 * h}},
      {"+z-..-z+", Complex{2.0 * h}},
      {"+zz--zz+", Complex{2.0 * h}},
      {".+-..-+.", Complex{2.0 * h}},
      {".+z--z+.", Complex{2.0 * h}},
      {"..+--+..", Complex{-2.0 * h}},
  });

  std::vector<TermFamily> out;
  int index = 1;
  for (const LadderSum* ladder :
       std::initializer_list<const LadderSum*>{&h1, &h2, &h3, &h4, &h5, &h6}) {
    out.push_back({index++, *ladder, expand_xyz(*ladder)});
  }
  return out;
}

}  // namespace agassi
