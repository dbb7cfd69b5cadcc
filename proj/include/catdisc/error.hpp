#pragma once

#include <stdexcept>
#include <string>

namespace catdisc {

enum class ErrorCode {
  invalid_argument,
  invalid_point,
  non_unique_geodesic,
  undefined_angle,
  triangle_inequality,
  too_large_triangle,
  backend_mismatch,
  out_of_convexity,
  not_length_connected,
  graph_mismatch,
  fixed_set_mismatch,
  epsilon_bound,
  invalid_mesh,
  schema,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_point: return "invalid-point";
    case ErrorCode::non_unique_geodesic: return "non-unique-geodesic";
    case ErrorCode::undefined_angle: return "undefined-angle";
    case ErrorCode::triangle_inequality: return "triangle-inequality";
    case ErrorCode::too_large_triangle: return "too-large-triangle";
    case ErrorCode::backend_mismatch: return "backend-mismatch";
    case ErrorCode::out_of_convexity: return "out-of-convexity";
    case ErrorCode::not_length_connected: return "not-length-connected";
    case ErrorCode::graph_mismatch: return "graph-mismatch";
    case ErrorCode::fixed_set_mismatch: return "fixed-set-mismatch";
    case ErrorCode::epsilon_bound: return "epsilon-bound";
    case ErrorCode::invalid_mesh: return "invalid-mesh";
    case ErrorCode::schema: return "schema";
  }
  return "unknown";
}

}  // namespace catdisc
