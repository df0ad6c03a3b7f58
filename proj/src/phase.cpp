#include "agassi/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace agassi {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Symmetric: return "Symmetric";
    case Phase::HF: return "HF";
    case Phase::BCS: return "BCS";
    case Phase::HFBCS: return "HFBCS";
    case Phase::ClosedValley: return "ClosedValley";
  }
  return "?";
}

Phase phase_from_string(std::string_view name) {
  for (const auto p : kAllPhases) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown phase '" + std::string(name) + "'");
}

bool PhaseLabel::boundary_contains(Phase p) const {
  return std::find(boundary.begin(), boundary.end(), p) != boundary.end();
}

std::string encode_boundary(const std::vector<Phase>& set) {
  std::string out;
  for (const auto p : set) {
    if (!out.empty()) out += '|';
    out += to_string(p);
  }
  return out;
}

std::vector<Phase> decode_boundary(std::string_view text) {
  std::vector<Phase> out;
  while (!text.empty()) {
    const auto bar = text.find('|');
    out.push_back(phase_from_string(text.substr(0, bar)));
    if (bar == std::string_view::npos) break;
    text.remove_prefix(bar + 1);
  }
  return out;
}

double lambda_critical(double x) {
  if (x <= 0.0) return std::numeric_limits<double>::infinity();
  return (1.0 + x * x) / (2.0 * x);
}

namespace {

struct Cmp {
  double tol;
  bool lt(double a, double b) const { return a < b - tol; }
  bool gt(double a, double b) const { return a > b + tol; }
  bool eq(double a, double b) const { return std::abs(a - b) <= tol; }
};

// Green surface: Lambda = 1 below chi = Sigma = 1, (1 + m^2)/(2m) above,
// with m the larger of chi and Sigma.
double green_surface(double chi, double sigma) {
  const double m = std::max(chi, sigma);
  return m <= 1.0 ? 1.0 : lambda_critical(m);
}

// Label of a point inside one of the four open regions (no ties).
Phase open_region(double chi, double sigma, double lambda) {
  if (lambda > green_surface(chi, sigma)) return Phase::HFBCS;
  if (chi < 1.0 && sigma < 1.0) return Phase::Symmetric;
  return chi > sigma ? Phase::HF : Phase::BCS;
}

bool on_valley(double chi, double sigma, double lambda, const PhaseRules& r) {
  const Cmp c{r.tie_tolerance};
  if (!c.eq(chi, sigma)) return false;
  if (!r.closed_valley_below_one && !c.gt(chi, 1.0)) return false;
  return c.lt(lambda, lambda_critical(sigma));
}

bool on_any_surface(double chi, double sigma, double lambda, const Cmp& c) {
  return c.eq(chi, 1.0) || c.eq(sigma, 1.0) || c.eq(chi, sigma) ||
         c.eq(lambda, 1.0) || c.eq(lambda, lambda_critical(chi)) ||
         c.eq(lambda, lambda_critical(sigma));
}

}  // namespace

PhaseLabel classify_phase(double chi, double sigma, double lambda,
                          const PhaseRules& rules) {
  if (!std::isfinite(chi) || !std::isfinite(sigma) || !std::isfinite(lambda)) {
    throw std::invalid_argument("classify_phase: non-finite coordinate");
  }
  const Cmp c{rules.tie_tolerance};
  const bool valley = on_valley(chi, sigma, lambda, rules);

  // Phases meeting here: the open regions within a step much larger than the
  // tie tolerance, plus the valley plane itself.
  std::vector<Phase> meet;
  if (on_any_surface(chi, sigma, lambda, c)) {
    const double d = std::max(1e-7, 100.0 * rules.tie_tolerance);
    for (int a = -1; a <= 1; ++a) {
      for (int b = -1; b <= 1; ++b) {
        for (int l = -1; l <= 1; ++l) {
          const double x = chi + a * d;
          const double y = sigma + b * d;
          const double z = lambda + l * d;
          if (x < 0.0 || y < 0.0 || z < 0.0) continue;
          if (x == y && x > 1.0) continue;  // valley plane, not an open region
          meet.push_back(open_region(x, y, z));
        }
      }
    }
    if (valley) meet.push_back(Phase::ClosedValley);
    std::sort(meet.begin(), meet.end());
    meet.erase(std::unique(meet.begin(), meet.end()), meet.end());
    if (meet.size() < 2) meet.clear();
  }

  PhaseLabel out;
  out.boundary = meet;
  const double lc_chi = lambda_critical(chi);
  const double lc_sigma = lambda_critical(sigma);
  if (valley) {
    out.primary = Phase::ClosedValley;
  } else if (c.lt(chi, 1.0) && c.lt(sigma, 1.0) && c.lt(lambda, 1.0)) {
    out.primary = Phase::Symmetric;
  } else if (c.gt(chi, 1.0) && c.lt(sigma, chi) && c.lt(lambda, lc_chi)) {
    out.primary = Phase::HF;
  } else if (c.gt(sigma, 1.0) && c.lt(chi, sigma) && c.lt(lambda, lc_sigma)) {
    out.primary = Phase::BCS;
  } else if ((c.lt(chi, 1.0) && c.lt(sigma, 1.0) && c.gt(lambda, 1.0)) ||
             (c.gt(chi, sigma) && c.gt(chi, 1.0) && c.gt(lambda, lc_chi)) ||
             (c.gt(sigma, chi) && c.gt(sigma, 1.0) && c.gt(lambda, lc_sigma)) ||
             (c.eq(chi, sigma) && c.gt(chi, 1.0) && !c.lt(lambda, lc_sigma))) {
    out.primary = Phase::HFBCS;
  } else if (!meet.empty()) {
    out.primary = meet.front();
  } else {
    // On a tie that separates nothing (e.g. chi = 1 inside BCS).
    out.primary = open_region(chi, sigma, lambda);
  }
  if (!out.boundary.empty() && !out.boundary_contains(out.primary)) {
    out.boundary.push_back(out.primary);
    std::sort(out.boundary.begin(), out.boundary.end());
  }
  return out;
}

std::size_t MeshSpec::size() const {
  return static_cast<std::size_t>(chi.steps) * sigma.steps * lambda.steps;
}

double axis_value(const AxisRange& r, int k) {
  return r.lo + (r.hi - r.lo) * k / (r.steps - 1);
}

std::vector<PhasePoint> generate_mesh(const MeshSpec& spec,
                                      const PhaseRules& rules) {
  for (const auto* r : {&spec.chi, &spec.sigma, &spec.lambda}) {
    if (r->steps < 2 || !(r->hi > r->lo) || !std::isfinite(r->lo) ||
        !std::isfinite(r->hi)) {
      throw std::invalid_argument("generate_mesh: each axis needs steps >= 2 and hi > lo");
    }
  }
  std::vector<PhasePoint> out;
  out.reserve(spec.size());
  for (int i = 0; i < spec.chi.steps; ++i) {
    const double chi = axis_value(spec.chi, i);
    for (int j = 0; j < spec.sigma.steps; ++j) {
      const double sigma = axis_value(spec.sigma, j);
      for (int k = 0; k < spec.lambda.steps; ++k) {
        const double lambda = axis_value(spec.lambda, k);
        out.push_back({{chi, sigma, lambda}, classify_phase(chi, sigma, lambda, rules)});
      }
    }
  }
  return out;
}

}  // namespace agassi
