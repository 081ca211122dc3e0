#pragma once

#include <string>
#include <utility>

namespace oil {

/// A strict-inequality premise `observed < threshold` of a theorem.
struct HypothesisStatus {
  std::string name;
  double threshold = 0.0;
  double observed = 0.0;
  bool satisfied = false;

  static HypothesisStatus check(std::string name, double threshold, double observed) {
    return {std::move(name), threshold, observed, observed < threshold};
  }

  /// True when observed sits below threshold by more than a relative guard
  /// band; values inside the band are numerically ambiguous.
  bool clear_of_band(double rel_band = 1e-10) const {
    return observed < threshold * (1.0 - rel_band);
  }
};

}  // namespace oil
