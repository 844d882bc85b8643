#ifndef ARENA_COMMON_HPP
#define ARENA_COMMON_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arena {

/// Dense row-major matrix of doubles. Small helper shared by trace slicing,
/// analytics output and the test oracles; the NN engine has its own Tensor.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    bool operator==(const Matrix&) const = default;
};

/// Error raised when input data violates a documented precondition or an
/// on-disk file is malformed. The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Number of worker threads to use: min(hardware, ARENA_THREADS if set).
int worker_threads();

/// Runs fn(i) for i in [0, n) on up to worker_threads() threads. Work items
/// must be independent; results are deterministic regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Formats a double so that parsing the text recovers the exact same bits
/// (shortest round-trip form, "%.17g").
std::string format_double(double v);

/// Writes content to path atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace arena

#endif
