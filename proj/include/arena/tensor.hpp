#ifndef ARENA_TENSOR_HPP
#define ARENA_TENSOR_HPP

#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "arena/common.hpp"

namespace arena::nn {

/// Row-major n-dimensional array of 64-bit floats.
struct Tensor {
    std::vector<std::size_t> dims;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> d, double fill = 0.0)
        : dims(std::move(d)), data(count(dims), fill) {}
    Tensor(std::vector<std::size_t> d, std::vector<double> values)
        : dims(std::move(d)), data(std::move(values)) {
        if (data.size() != count(dims)) throw DataError("tensor data length != product of dims");
    }

    static std::size_t count(const std::vector<std::size_t>& d) {
        std::size_t n = 1;
        for (std::size_t v : d) n *= v;
        return n;
    }

    std::size_t size() const { return data.size(); }
    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    std::string shape_str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < dims.size(); ++i)
            s += (i ? "," : "") + std::to_string(dims[i]);
        return s + ")";
    }

    bool operator==(const Tensor&) const = default;
};

/// Flat vector view helpers for 1-D tensors.
inline Tensor vec_tensor(std::vector<double> v) {
    std::size_t n = v.size();
    return Tensor({n}, std::move(v));
}

}  // namespace arena::nn

#endif
