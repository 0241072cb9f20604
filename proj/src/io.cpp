#include "mtlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mtlab {

void write_profile_csv(const std::string& path, const RadialProfile& u) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("write_profile_csv: cannot open " + path);
    std::fputs("t,r,value\n", f);
    const auto t = u.grid().t_nodes();
    const auto r = u.grid().r_nodes();
    const auto v = u.values();
    for (int i = 0; i < u.size(); ++i)
        std::fprintf(f, "%.17g,%.17g,%.17g\n", t[i], r[i], v[i]);
    std::fclose(f);
}

RadialProfile read_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_profile_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,r,value", 0) != 0)
        throw std::runtime_error("read_profile_csv: bad header in " + path);
    std::vector<double> t, r, v;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        double a, b, c;
        char c1, c2;
        if (!(ss >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',')
            throw std::runtime_error("read_profile_csv: parse error at " + path + ":" +
                                     std::to_string(lineno));
        t.push_back(a);
        r.push_back(b);
        v.push_back(c);
    }
    if (t.size() < 3) throw std::runtime_error("read_profile_csv: too few rows");

    // infer N from the row with the largest |t|
    size_t best = 0;
    for (size_t i = 0; i < t.size(); ++i)
        if (std::abs(t[i]) > std::abs(t[best])) best = i;
    const double n_est = -t[best] / std::log(r[best]);
    const int n = static_cast<int>(std::llround(n_est));
    if (n < 2 || std::abs(n_est - n) > 1e-6)
        throw std::runtime_error("read_profile_csv: rows do not satisfy r = e^{-t/N}");

    // span-averaged spacing avoids amplifying last-digit noise of one row
    const double h = (t.back() - t.front()) / (t.size() - 1);
    for (size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * (1.0 + std::abs(h)))
            throw std::runtime_error("read_profile_csv: t column is not uniform");

    RadialGrid grid(make_dimension(n), t.front(), t.back(), h);
    if (grid.size() != static_cast<int>(v.size()))
        throw std::runtime_error("read_profile_csv: node count mismatch");
    return RadialProfile(grid, std::move(v), Interp::MonotoneCubic);
}

}  // namespace mtlab
