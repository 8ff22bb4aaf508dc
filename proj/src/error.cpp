#include "hpq/error.hpp"

namespace hpq {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::zero_vector: return "zero vector";
    case ErrorCode::degenerate_span: return "degenerate span";
    case ErrorCode::unsupported_basis: return "unsupported basis";
    case ErrorCode::not_tangent: return "not tangent";
    case ErrorCode::not_on_quadric: return "not on quadric";
    case ErrorCode::degenerate_metric: return "degenerate metric";
    case ErrorCode::normal_completion: return "normal completion failed";
    case ErrorCode::stencil_out_of_domain: return "stencil exits domain";
    case ErrorCode::invalid_spec: return "invalid spec";
    case ErrorCode::non_spacelike_boundary: return "boundary not spacelike-spannable";
    case ErrorCode::antipodal_boundary: return "antipodal boundary points";
    case ErrorCode::step_collapse: return "step collapse";
    case ErrorCode::not_converged: return "not converged";
    case ErrorCode::rank_deficient_fit: return "rank-deficient fit";
  }
  return "unknown";
}

GeometryError::GeometryError(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace hpq
