#include "refadopt/adoption.hpp"

#include "refadopt/errors.hpp"

namespace refadopt {

std::string_view adoption_level_name(AdoptionLevel level) {
  switch (level) {
    case AdoptionLevel::Full: return "FULL";
    case AdoptionLevel::Selective: return "SELECTIVE";
    case AdoptionLevel::MinorModification: return "MINOR_MODIFICATION";
    case AdoptionLevel::Restructured: return "RESTRUCTURED";
    case AdoptionLevel::MajorModification: return "MAJOR_MODIFICATION";
  }
  throw data_error("unknown adoption level");
}

AdoptionLevel adoption_level_from_name(std::string_view name) {
  if (name == "FULL") return AdoptionLevel::Full;
  if (name == "SELECTIVE") return AdoptionLevel::Selective;
  if (name == "MINOR_MODIFICATION") return AdoptionLevel::MinorModification;
  if (name == "RESTRUCTURED") return AdoptionLevel::Restructured;
  if (name == "MAJOR_MODIFICATION") return AdoptionLevel::MajorModification;
  throw schema_error("unknown adoption level: \"" + std::string(name) + "\"");
}

void ClassifierThresholds::validate() const {
  if (!(0.0 <= low && low < high && high <= 1.0)) {
    throw usage_error("classifier thresholds must satisfy 0 <= low < high <= 1");
  }
  if (!(0.0 <= tmr_high && tmr_high <= 1.0)) {
    throw usage_error("tmr threshold must lie in [0,1]");
  }
}

AdoptionLevel classify(const MetricScores& scores, const ClassifierThresholds& t) {
  t.validate();

  const bool full = scores.levenshtein_similarity == 1.0 &&
                    scores.jaccard_3gram == 1.0 &&
                    scores.token_match_rate == 1.0 && scores.crystal_bleu == 1.0;
  if (full) return AdoptionLevel::Full;

  const bool tokens_kept = scores.token_match_rate >= t.tmr_high;
  if (tokens_kept && scores.jaccard_3gram < t.low) return AdoptionLevel::Selective;
  if (scores.jaccard_3gram >= t.high) return AdoptionLevel::MinorModification;
  if (tokens_kept) return AdoptionLevel::Restructured;
  return AdoptionLevel::MajorModification;
}

}  // namespace refadopt
