#include <array>
#include <stdexcept>

#include "agassi/hamiltonian.hpp"

namespace agassi {

namespace {

struct TableEntry {
  int family;
  int index;
  const char* word;
  Coupling coupling;
  int sign;
  int divisor;
};

// x/y decomposition of H3 (pairing), H4 (monopole), H5 (mixed) and H6
// (extended pairing) for j = 2, one entry per labelled term H_{i,j}.
constexpr std::array<TableEntry, kReferenceXYTerms> kTable{{
    {3, 1, "XXXXIIII", Coupling::G, -1, 8},
    {3, 2, "XXYYIIII", Coupling::G, -1, 8},
    {3, 3, "YYXXIIII", Coupling::G, -1, 8},
    {3, 4, "XYXYIIII", Coupling::G, -1, 8},
    {3, 5, "YXYXIIII", Coupling::G, -1, 8},
    {3, 6, "XYYXIIII", Coupling::G, +1, 8},
    {3, 7, "YXXYIIII", Coupling::G, +1, 8},
    {3, 8, "YYYYIIII", Coupling::G, -1, 8},
    {3, 9, "IIIIXXXX", Coupling::G, -1, 8},
    {3, 10, "IIIIXXYY", Coupling::G, -1, 8},
    {3, 11, "IIIIYYXX", Coupling::G, -1, 8},
    {3, 12, "IIIIXYXY", Coupling::G, -1, 8},
    {3, 13, "IIIIYXYX", Coupling::G, -1, 8},
    {3, 14, "IIIIXYYX", Coupling::G, +1, 8},
    {3, 15, "IIIIYXXY", Coupling::G, +1, 8},
    {3, 16, "IIIIYYYY", Coupling::G, -1, 8},
    {3, 17, "IXXIIXXI", Coupling::G, -1, 8},
    {3, 18, "IXXIIYYI", Coupling::G, +1, 8},
    {3, 19, "IYYIIXXI", Coupling::G, +1, 8},
    {3, 20, "IXYIIXYI", Coupling::G, -1, 8},
    {3, 21, "IYXIIYXI", Coupling::G, -1, 8},
    {3, 22, "IXYIIYXI", Coupling::G, -1, 8},
    {3, 23, "IYXIIXYI", Coupling::G, -1, 8},
    {3, 24, "IYYIIYYI", Coupling::G, -1, 8},
    {3, 25, "IXXIXZZX", Coupling::G, -1, 8},
    {3, 26, "IXXIYZZY", Coupling::G, +1, 8},
    {3, 27, "IYYIXZZX", Coupling::G, +1, 8},
    {3, 28, "IXYIXZZY", Coupling::G, -1, 8},
    {3, 29, "IYXIYZZX", Coupling::G, -1, 8},
    {3, 30, "IXYIYZZX", Coupling::G, -1, 8},
    {3, 31, "IYXIXZZY", Coupling::G, -1, 8},
    {3, 32, "IYYIYZZY", Coupling::G, -1, 8},
    {3, 33, "XZZXIXXI", Coupling::G, -1, 8},
    {3, 34, "XZZXIYYI", Coupling::G, +1, 8},
    {3, 35, "YZZYIXXI", Coupling::G, +1, 8},
    {3, 36, "XZZYIXYI", Coupling::G, -1, 8},
    {3, 37, "YZZXIYXI", Coupling::G, -1, 8},
    {3, 38, "XZZYIYXI", Coupling::G, -1, 8},
    {3, 39, "YZZXIXYI", Coupling::G, -1, 8},
    {3, 40, "YZZYIYYI", Coupling::G, -1, 8},
    {4, 1, "XXIIXXII", Coupling::V, -1, 8},
    {4, 2, "XXIIYYII", Coupling::V, +1, 8},
    {4, 3, "YYIIXXII", Coupling::V, +1, 8},
    {4, 4, "XYIIXYII", Coupling::V, -1, 8},
    {4, 5, "YXIIYXII", Coupling::V, -1, 8},
    {4, 6, "XYIIYXII", Coupling::V, -1, 8},
    {4, 7, "YXIIXYII", Coupling::V, -1, 8},
    {4, 8, "YYIIYYII", Coupling::V, -1, 8},
    {4, 9, "XZXIXZXI", Coupling::V, -1, 8},
    {4, 10, "XZXIYZYI", Coupling::V, +1, 8},
    {4, 11, "YZYIXZXI", Coupling::V, +1, 8},
    {4, 12, "XZYIXZYI", Coupling::V, -1, 8},
    {4, 13, "YZXIYZXI", Coupling::V, -1, 8},
    {4, 14, "XZYIYZXI", Coupling::V, -1, 8},
    {4, 15, "YZXIXZYI", Coupling::V, -1, 8},
    {4, 16, "YZYIYZYI", Coupling::V, -1, 8},
    {4, 17, "IXXIIXXI", Coupling::V, -1, 8},
    {4, 18, "IXXIIYYI", Coupling::V, +1, 8},
    {4, 19, "IYYIIXXI", Coupling::V, +1, 8},
    {4, 20, "IXYIIXYI", Coupling::V, -1, 8},
    {4, 21, "IYXIIYXI", Coupling::V, -1, 8},
    {4, 22, "IXYIIYXI", Coupling::V, -1, 8},
    {4, 23, "IYXIIXYI", Coupling::V, -1, 8},
    {4, 24, "IYYIIYYI", Coupling::V, -1, 8},
    {4, 25, "IXZXIXZX", Coupling::V, -1, 8},
    {4, 26, "IXZXIYZY", Coupling::V, +1, 8},
    {4, 27, "IYZYIXZX", Coupling::V, +1, 8},
    {4, 28, "IXZYIXZY", Coupling::V, -1, 8},
    {4, 29, "IYZXIYZX", Coupling::V, -1, 8},
    {4, 30, "IXZYIYZX", Coupling::V, -1, 8},
    {4, 31, "IYZXIXZY", Coupling::V, -1, 8},
    {4, 32, "IYZYIYZY", Coupling::V, -1, 8},
    {4, 33, "IIXXIIXX", Coupling::V, -1, 8},
    {4, 34, "IIXXIIYY", Coupling::V, +1, 8},
    {4, 35, "IIYYIIXX", Coupling::V, +1, 8},
    {4, 36, "IIXYIIXY", Coupling::V, -1, 8},
    {4, 37, "IIYXIIYX", Coupling::V, -1, 8},
    {4, 38, "IIXYIIYX", Coupling::V, -1, 8},
    {4, 39, "IIYXIIXY", Coupling::V, -1, 8},
    {4, 40, "IIYYIIYY", Coupling::V, -1, 8},
    {5, 1, "XZZXXZZX", Coupling::GPlusV, -1, 8},
    {5, 2, "XZZXYZZY", Coupling::GPlusV, +1, 8},
    {5, 3, "YZZYXZZX", Coupling::GPlusV, +1, 8},
    {5, 4, "XZZYXZZY", Coupling::GPlusV, -1, 8},
    {5, 5, "YZZXYZZX", Coupling::GPlusV, -1, 8},
    {5, 6, "XZZYYZZX", Coupling::GPlusV, -1, 8},
    {5, 7, "YZZXXZZY", Coupling::GPlusV, -1, 8},
    {5, 8, "YZZYYZZY", Coupling::GPlusV, -1, 8},
    {6, 1, "XXIIIIXX", Coupling::H, -1, 4},
    {6, 2, "XXIIIIYY", Coupling::H, -1, 4},
    {6, 3, "YYIIIIXX", Coupling::H, -1, 4},
    {6, 4, "XYIIIIXY", Coupling::H, -1, 4},
    {6, 5, "YXIIIIYX", Coupling::H, -1, 4},
    {6, 6, "XYIIIIYX", Coupling::H, +1, 4},
    {6, 7, "YXIIIIXY", Coupling::H, +1, 4},
    {6, 8, "YYIIIIYY", Coupling::H, -1, 4},
    {6, 9, "XZXIIXZX", Coupling::H, +1, 4},
    {6, 10, "XZXIIYZY", Coupling::H, +1, 4},
    {6, 11, "YZYIIXZX", Coupling::H, +1, 4},
    {6, 12, "XZYIIXZY", Coupling::H, +1, 4},
    {6, 13, "YZXIIYZX", Coupling::H, +1, 4},
    {6, 14, "XZYIIYZX", Coupling::H, -1, 4},
    {6, 15, "YZXIIXZY", Coupling::H, -1, 4},
    {6, 16, "YZYIIYZY", Coupling::H, +1, 4},
    {6, 17, "XZZXXZZX", Coupling::H, +1, 4},
    {6, 18, "XZZXYZZY", Coupling::H, +1, 4},
    {6, 19, "YZZYXZZX", Coupling::H, +1, 4},
    {6, 20, "XZZYXZZY", Coupling::H, +1, 4},
    {6, 21, "YZZXYZZX", Coupling::H, +1, 4},
    {6, 22, "XZZYYZZX", Coupling::H, -1, 4},
    {6, 23, "YZZXXZZY", Coupling::H, -1, 4},
    {6, 24, "YZZYYZZY", Coupling::H, +1, 4},
    {6, 25, "IXXIIXXI", Coupling::H, +1, 4},
    {6, 26, "IXXIIYYI", Coupling::H, +1, 4},
    {6, 27, "IYYIIXXI", Coupling::H, +1, 4},
    {6, 28, "IXYIIXYI", Coupling::H, +1, 4},
    {6, 29, "IYXIIYXI", Coupling::H, +1, 4},
    {6, 30, "IXYIIYXI", Coupling::H, -1, 4},
    {6, 31, "IYXIIXYI", Coupling::H, -1, 4},
    {6, 32, "IYYIIYYI", Coupling::H, +1, 4},
    {6, 33, "IXZXXZXI", Coupling::H, +1, 4},
    {6, 34, "IXZXYZYI", Coupling::H, +1, 4},
    {6, 35, "IYZYXZXI", Coupling::H, +1, 4},
    {6, 36, "IXZYXZYI", Coupling::H, +1, 4},
    {6, 37, "IYZXYZXI", Coupling::H, +1, 4},
    {6, 38, "IXZYYZXI", Coupling::H, -1, 4},
    {6, 39, "IYZXXZYI", Coupling::H, -1, 4},
    {6, 40, "IYZYYZYI", Coupling::H, +1, 4},
    {6, 41, "IIXXXXII", Coupling::H, -1, 4},
    {6, 42, "IIXXYYII", Coupling::H, -1, 4},
    {6, 43, "IIYYXXII", Coupling::H, -1, 4},
    {6, 44, "IIXYXYII", Coupling::H, -1, 4},
    {6, 45, "IIYXYXII", Coupling::H, -1, 4},
    {6, 46, "IIXYYXII", Coupling::H, +1, 4},
    {6, 47, "IIYXXYII", Coupling::H, +1, 4},
    {6, 48, "IIYYYYII", Coupling::H, -1, 4},
}};

double coupling_value(Coupling c, const ModelParams& p) {
  switch (c) {
    case Coupling::G: return p.g;
    case Coupling::V: return p.V;
    case Coupling::GPlusV: return p.g + p.V;
    case Coupling::H: return p.h;
  }
  return 0.0;
}

std::string word_with(std::initializer_list<int> z_sites) {
  std::string w(8, 'I');
  for (int s : z_sites) w[s - 1] = 'Z';
  return w;
}

}  // namespace

std::vector<ReferenceTerm> reference_terms_j2(const ModelParams& p) {
  p.validate();
  if (p.j != 2) {
    throw std::invalid_argument(
        "reference_terms_j2: the reference table exists only for j = 2");
  }
  std::vector<ReferenceTerm> out;
  out.reserve(kTable.size() + 17);
  for (const auto& e : kTable) {
    const double c = e.sign * coupling_value(e.coupling, p) / e.divisor;
    out.push_back({e.family, e.index, e.word, Complex{c}});
  }

  // H1: (eps - g - 2h)/4 on the upper level, -(eps + g + 2h)/4 on the lower
  // level, and the constant -(g + 2h).
  const double upper = (p.epsilon - p.g - 2.0 * p.h) / 4.0;
  const double lower = -(p.epsilon + p.g + 2.0 * p.h) / 4.0;
  int k = 1;
  for (int s = 1; s <= 8; ++s) {
    out.push_back({1, k++, word_with({s}), Complex{s <= 4 ? upper : lower}});
  }
  out.push_back({1, k, std::string(8, 'I'), Complex{-(p.g + 2.0 * p.h)}});

  // H2: -g/4 on the (m,-m) partner pairs within a level, -h/2 across levels.
  k = 1;
  for (auto [a, b] : {std::pair{1, 4}, {2, 3}, {5, 8}, {6, 7}}) {
    out.push_back({2, k++, word_with({a, b}), Complex{-p.g / 4.0}});
  }
  for (auto [a, b] : {std::pair{1, 8}, {2, 7}, {3, 6}, {4, 5}}) {
    out.push_back({2, k++, word_with({a, b}), Complex{-p.h / 2.0}});
  }
  return out;
}

PauliSum reference_hamiltonian_j2(const ModelParams& p) {
  std::vector<PauliString> strings;
  for (const auto& t : reference_terms_j2(p)) {
    strings.push_back(PauliString::from_word(t.word, t.coeff));
  }
  return PauliSum(8, std::move(strings));
}

}  // namespace agassi
