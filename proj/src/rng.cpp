#include "arena/rng.hpp"

#include <cmath>
#include <vector>

namespace arena {

std::vector<double> sample_unit_sphere(Rng& rng, std::size_t d) {
    if (d == 1) return {rng.sign()};
    std::vector<double> u(d);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (auto& v : u) {
            v = rng.normal();
            norm += v * v;
        }
        norm = std::sqrt(norm);
    } while (norm < 1e-12);
    for (auto& v : u) v /= norm;
    return u;
}

}  // namespace arena
