#include "arena/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace arena::nn {

GradCheckReport gradient_check(ModelGraph& model, const std::vector<Tensor>& inputs,
                               const Tensor& target, double h, double /*tol*/) {
    Tensor pred = model.forward(inputs, false);
    model.zero_grad();
    model.backward(mse_grad(pred, target));
    std::vector<double> analytic = model.grads;

    GradCheckReport report;
    report.per_layer.reserve(model.layer_count());
    for (std::size_t li = 0; li < model.layer_count(); ++li) {
        auto [offset, count] = model.param_block(li);
        double layer_max = 0.0;
        for (std::size_t i = offset; i < offset + count; ++i) {
            double saved = model.params[i];
            model.params[i] = saved + h;
            double lp = mse(model.forward(inputs, false), target);
            model.params[i] = saved - h;
            double lm = mse(model.forward(inputs, false), target);
            model.params[i] = saved;
            double fd = (lp - lm) / (2.0 * h);
            double a = analytic[i];
            double rel = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-3});
            layer_max = std::max(layer_max, rel);
        }
        report.per_layer.emplace_back(model.layer_desc(li), layer_max);
        report.max_rel_error = std::max(report.max_rel_error, layer_max);
    }
    return report;
}

}  // namespace arena::nn
