#pragma once

#include <string>
#include <string_view>

#include "refadopt/similarity.hpp"

namespace refadopt {

enum class AdoptionLevel {
  Full,
  Selective,
  MinorModification,
  Restructured,
  MajorModification,
};

std::string_view adoption_level_name(AdoptionLevel level);
AdoptionLevel adoption_level_from_name(std::string_view name);

struct ClassifierThresholds {
  double high = 0.9;
  double low = 0.3;
  double tmr_high = 0.9;

  // Enforces 0 <= low < high <= 1 and tmr_high in [0,1].
  void validate() const;
};

// Maps a metric signature to a coarse adoption level. The regions partition
// the score space: FULL needs all four metrics at 1.0; otherwise a high token
// match rate means the committed tokens came from the suggestion, and the
// Jaccard band tells deletion-dominated (below `low`) apart from reordering
// (between `low` and `high`); a high Jaccard alone is a near-verbatim copy
// with small edits; everything else is a major rework.
AdoptionLevel classify(const MetricScores& scores, const ClassifierThresholds& t);

}  // namespace refadopt
