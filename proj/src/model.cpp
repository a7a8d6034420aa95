#include "phnls/model.hpp"

#include "phnls/error.hpp"

#include <string>

namespace phnls {

std::optional<Rational> energy_critical_sigma(int d) {
  if (d <= 2)
    return std::nullopt;
  return Rational(2, d - 2);
}

void check(const ModelParams &params) {
  if (params.d < 2)
    throw ValidationError("model: d must be at least 2, got " + std::to_string(params.d));
  if (params.n < 1 || params.n > params.d - 1)
    throw ValidationError("model: n must lie in [1, d-1], got " + std::to_string(params.n));
  if (params.sigma <= Rational(0))
    throw ValidationError("model: sigma must be positive, got " + params.sigma.str());
  if (params.lambda != -1 && params.lambda != 1)
    throw ValidationError("model: lambda must be -1 or 1, got " + std::to_string(params.lambda));
}

ValidityReport validate(const ModelParams &params) {
  check(params);
  const Rational &sigma = params.sigma;
  const auto upper = energy_critical_sigma(params.d);
  const bool below_upper = !upper || sigma < *upper;
  const Rational lower_free(2, params.d - params.n);

  ValidityReport report;
  report.strichartz_window = lower_free <= sigma && below_upper;
  report.profile_window = lower_free < sigma && below_upper;
  report.theorem_window = params.lambda == -1 && params.n == 1 && sigma >= Rational(1, 2) &&
                          Rational(2, params.d - 1) < sigma && below_upper;
  return report;
}

} // namespace phnls
