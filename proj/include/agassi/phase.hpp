#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "agassi/hamiltonian.hpp"

namespace agassi {

/// Mean-field phases; the numeric values are the classifier class indices.
enum class Phase { Symmetric = 0, HF = 1, BCS = 2, HFBCS = 3, ClosedValley = 4 };

inline constexpr int kPhaseCount = 5;
inline constexpr std::array<Phase, kPhaseCount> kAllPhases = {
    Phase::Symmetric, Phase::HF, Phase::BCS, Phase::HFBCS, Phase::ClosedValley};

std::string_view to_string(Phase p);
Phase phase_from_string(std::string_view name);

struct PhaseLabel {
  Phase primary = Phase::Symmetric;
  /// Every phase meeting at this point when it lies on a critical surface,
  /// primary included; empty inside a region.
  std::vector<Phase> boundary;

  bool on_boundary() const { return !boundary.empty(); }
  bool boundary_contains(Phase p) const;
};

/// "HF|BCS" style encoding of a boundary set ("" when empty).
std::string encode_boundary(const std::vector<Phase>& set);
std::vector<Phase> decode_boundary(std::string_view text);

struct PhaseRules {
  /// Absolute tolerance for every equality test.
  double tie_tolerance = 1e-9;
  /// Also label chi = Sigma < 1 as ClosedValley (literal reading of the
  /// region list). Off by default: that line lies inside the symmetric
  /// region.
  bool closed_valley_below_one = false;
};

/// (1 + x^2) / (2x), the Lambda value of the first-order surface above the
/// deformed phases; +inf at x = 0.
double lambda_critical(double x);

PhaseLabel classify_phase(double chi, double sigma, double lambda,
                          const PhaseRules& rules = {});

struct PhasePoint {
  ScaledParams params;
  PhaseLabel label;
};

struct AxisRange {
  double lo = 0.0;
  double hi = 2.0;
  int steps = 21;
};

struct MeshSpec {
  AxisRange chi;
  AxisRange sigma;
  AxisRange lambda;

  std::size_t size() const;
};

/// Value k of an axis, lo + (hi - lo) k / (steps - 1).
double axis_value(const AxisRange& r, int k);

/// Lexicographic mesh (chi outer, Lambda inner), each point labelled.
std::vector<PhasePoint> generate_mesh(const MeshSpec& spec,
                                      const PhaseRules& rules = {});

}  // namespace agassi
