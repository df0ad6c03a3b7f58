#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "agassi/pauli.hpp"

namespace agassi {

/// A set of pairwise commuting Pauli strings applied together in one Trotter
/// factor.
struct TermGroup {
  int id = 0;
  PauliSum terms;
};

/// What a vertex of the coloring graph is.
///
/// FlipClass merges all strings sharing an x mask into one vertex whenever
/// they commute among themselves. Such a class moves amplitude between the
/// same pair of basis states, so for a number-conserving H each class
/// conserves magnetization on its own. String treats every string as its
/// own vertex.
enum class GroupGranularity { FlipClass, String };

/// Greedy largest-degree-first coloring of the anticommutation graph. Ties
/// are broken by ascending (x_mask, z_mask) of the vertex's first string, so
/// the result is deterministic. Group ids follow color order.
std::vector<TermGroup> partition_commuting(
    const PauliSum& h, GroupGranularity granularity = GroupGranularity::FlipClass);

/// Empty string if `groups` is a partition of `h` into internally commuting
/// groups, otherwise a description of the first violation found.
std::string check_partition(const PauliSum& h,
                            std::span<const TermGroup> groups);

/// True iff every pair of strings inside `group` commutes.
bool group_commutes(const PauliSum& group);

struct ResourceEstimate {
  std::int64_t ms_gates = 0;
  std::int64_t single_qubit_gates = 0;
  std::int64_t total = 0;
};

/// Gate count for n_T Trotter steps: one Molmer-Sorensen gate per string of
/// weight >= 2, two single-qubit gates per x or y factor. Identity and
/// single-site z strings cost nothing.
ResourceEstimate estimate_resources(std::span<const PauliString> terms,
                                    int n_trotter);
ResourceEstimate estimate_resources(std::span<const TermGroup> groups,
                                    int n_trotter);

}  // namespace agassi
