#pragma once

#include <stdexcept>
#include <string>

namespace hpq {

enum class ErrorCode {
  dimension_mismatch,
  zero_vector,
  degenerate_span,
  unsupported_basis,
  not_tangent,
  not_on_quadric,
  degenerate_metric,
  normal_completion,
  stencil_out_of_domain,
  invalid_spec,
  non_spacelike_boundary,
  antipodal_boundary,
  step_collapse,
  not_converged,
  rank_deficient_fit,
};

const char* to_string(ErrorCode code);

class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hpq
