#include "mtlab/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace mtlab {

RadialGrid::RadialGrid(const Dimension& dim, double t_min, double t_max, double h)
    : dim_(dim), h_(h) {
    if (!(h > 0.0) || !(t_max > t_min))
        throw std::invalid_argument("RadialGrid: need t_min < t_max and h > 0");
    const int n = static_cast<int>(std::llround((t_max - t_min) / h)) + 1;
    if (n < 3) throw std::invalid_argument("RadialGrid: window too small");
    auto data = std::make_shared<Data>();
    data->t.resize(n);
    data->r.resize(n);
    data->w.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = t_min + i * h;
        data->t[i] = t;
        data->r[i] = std::exp(-t / dim.n);
        data->w[i] = std::exp(-t) * h;
    }
    data->w.front() *= 0.5;
    data->w.back() *= 0.5;
    data_ = std::move(data);
}

RadialGrid RadialGrid::standard(const Dimension& dim) {
    return RadialGrid(dim, -20.0, 60.0, 0.01);
}

RadialGrid RadialGrid::shifted(double dt) const {
    return RadialGrid(dim_, t_min() + dt, t_max() + dt, h_);
}

}  // namespace mtlab
