#ifndef HALFWAVE_VERDICT_HPP
#define HALFWAVE_VERDICT_HPP

#include <array>
#include <string>

namespace halfwave {

/// Outcome of a fitted-constant boundedness check for a pointwise estimate.
/// fitted_constant is the empirical sup of |LHS|/RHS over the sample set;
/// pass requires it to be finite and stable under sample refinement.
struct EstimateVerdict {
  std::string estimate_id;
  double fitted_constant = 0.0;
  long sample_count = 0;
  std::array<double, 3> max_ratio_location{0.0, 0.0, 0.0};  // (t, x1, x2)
  bool pass = false;
  double refinement_drift = 0.0;  // relative change under doubled sampling
  long unresolved_count = 0;      // samples whose quadrature error was too large
  std::string note;
};

}  // namespace halfwave

#endif
