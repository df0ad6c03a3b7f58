#include "agassi/grouping.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace agassi {

namespace {

bool all_commute(std::span<const PauliString> a, std::span<const PauliString> b) {
  for (const auto& p : a) {
    for (const auto& q : b) {
      if (!commute(p, q)) return false;
    }
  }
  return true;
}

}  // namespace

bool group_commutes(const PauliSum& group) {
  const auto t = group.terms();
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t k = i + 1; k < t.size(); ++k) {
      if (!commute(t[i], t[k])) return false;
    }
  }
  return true;
}

std::vector<TermGroup> partition_commuting(const PauliSum& h,
                                           GroupGranularity granularity) {
  const int n = h.n_qubits();
  const auto terms = h.terms();

  // Vertices as contiguous runs of the canonical term list (sorted by x mask).
  std::vector<std::vector<PauliString>> vertices;
  if (granularity == GroupGranularity::FlipClass) {
    std::size_t start = 0;
    while (start < terms.size()) {
      std::size_t end = start + 1;
      while (end < terms.size() &&
             terms[end].x_mask() == terms[start].x_mask()) {
        ++end;
      }
      std::vector<PauliString> cls(terms.begin() + start, terms.begin() + end);
      if (group_commutes(PauliSum(n, cls))) {
        vertices.push_back(std::move(cls));
      } else {
        for (const auto& t : cls) vertices.push_back({t});
      }
      start = end;
    }
  } else {
    for (const auto& t : terms) vertices.push_back({t});
  }

  const std::size_t nv = vertices.size();
  std::vector<std::vector<char>> adj(nv, std::vector<char>(nv, 0));
  std::vector<int> degree(nv, 0);
  for (std::size_t a = 0; a < nv; ++a) {
    for (std::size_t b = a + 1; b < nv; ++b) {
      if (!all_commute(vertices[a], vertices[b])) {
        adj[a][b] = adj[b][a] = 1;
        ++degree[a];
        ++degree[b];
      }
    }
  }

  // Vertices are already in ascending mask order, so a stable sort on degree
  // keeps that as the tie-break.
  std::vector<std::size_t> order(nv);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return degree[a] > degree[b];
  });

  std::vector<int> color(nv, -1);
  int n_colors = 0;
  for (const auto v : order) {
    std::vector<char> used(static_cast<std::size_t>(n_colors) + 1, 0);
    for (std::size_t u = 0; u < nv; ++u) {
      if (adj[v][u] && color[u] >= 0) used[static_cast<std::size_t>(color[u])] = 1;
    }
    int c = 0;
    while (used[static_cast<std::size_t>(c)]) ++c;
    color[v] = c;
    n_colors = std::max(n_colors, c + 1);
  }

  std::vector<std::vector<PauliString>> members(static_cast<std::size_t>(n_colors));
  for (std::size_t v = 0; v < nv; ++v) {
    auto& dst = members[static_cast<std::size_t>(color[v])];
    dst.insert(dst.end(), vertices[v].begin(), vertices[v].end());
  }
  std::vector<TermGroup> out;
  out.reserve(members.size());
  for (std::size_t c = 0; c < members.size(); ++c) {
    out.push_back({static_cast<int>(c), PauliSum(n, std::move(members[c]))});
  }
  return out;
}

std::string check_partition(const PauliSum& h,
                            std::span<const TermGroup> groups) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, int> seen;
  PauliSum total(h.n_qubits());
  for (const auto& g : groups) {
    if (g.terms.n_qubits() != h.n_qubits()) {
      return "group " + std::to_string(g.id) + " has the wrong register size";
    }
    if (!group_commutes(g.terms)) {
      return "group " + std::to_string(g.id) + " has non-commuting members";
    }
    for (const auto& t : g.terms.terms()) {
      const auto key = std::make_pair(t.x_mask(), t.z_mask());
      if (seen.count(key) != 0) {
        std::ostringstream os;
        os << "string " << t.word() << " appears in groups " << seen[key]
           << " and " << g.id;
        return os.str();
      }
      seen[key] = g.id;
    }
    total += g.terms;
  }
  if (!total.approx_equal(h, kDedupTolerance)) {
    return "groups do not sum to the Hamiltonian";
  }
  return {};
}

ResourceEstimate estimate_resources(std::span<const PauliString> terms,
                                    int n_trotter) {
  if (n_trotter < 1) {
    throw std::invalid_argument("estimate_resources: n_T must be >= 1");
  }
  ResourceEstimate r;
  for (const auto& t : terms) {
    if (t.weight() >= 2) ++r.ms_gates;
    r.single_qubit_gates += 2 * t.xy_count();
  }
  r.ms_gates *= n_trotter;
  r.single_qubit_gates *= n_trotter;
  r.total = r.ms_gates + r.single_qubit_gates;
  return r;
}

ResourceEstimate estimate_resources(std::span<const TermGroup> groups,
                                    int n_trotter) {
  std::vector<PauliString> all;
  for (const auto& g : groups) {
    all.insert(all.end(), g.terms.terms().begin(), g.terms.terms().end());
  }
  return estimate_resources(all, n_trotter);
}

}  // namespace agassi
