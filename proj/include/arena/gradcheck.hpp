#ifndef ARENA_GRADCHECK_HPP
#define ARENA_GRADCHECK_HPP

#include <string>
#include <vector>

#include "arena/nn.hpp"

namespace arena::nn {

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::vector<std::pair<std::string, double>> per_layer;  // description -> max rel error

    bool pass(double tol) const { return max_rel_error <= tol; }
};

/// Compares reverse-mode gradients of the MSE loss against central finite
/// differences, parameter by parameter. Relative error uses
/// |a-b| / max(|a|, |b|, 1e-3); with an O(1) loss that makes errors below
/// the tolerance meaningful down to gradients of ~1e-3 and compares smaller
/// ones absolutely. Run with dropout disabled (training=false forward).
GradCheckReport gradient_check(ModelGraph& model, const std::vector<Tensor>& inputs,
                               const Tensor& target, double h = 1e-4, double tol = 1e-4);

}  // namespace arena::nn

#endif
