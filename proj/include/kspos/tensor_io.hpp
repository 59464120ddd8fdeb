#pragma once

// Curvature tensors as JSON: {"n": int, "r": int, "entries": [[alpha, beta, j, k, re, im], ...]},
// 0-based indices, unlisted entries zero. Every listed entry must come with its
// hermitian partner (beta, alpha, k, j) carrying exactly the conjugate value.

#include <iosfwd>
#include <string>

#include "kspos/curvature.hpp"

namespace kspos {

/// Throws Error(invalid_input) on malformed documents or broken symmetry.
Tensor read_tensor_json(std::istream& in);
Tensor read_tensor_file(const std::string& path);

/// Nonzero entries in (alpha, beta, j, k) order.
std::string write_tensor_json(const Tensor& R);

}  // namespace kspos
