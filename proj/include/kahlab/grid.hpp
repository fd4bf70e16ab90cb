#pragma once

#include <cstddef>
#include <vector>

namespace kahlab {

/// Shape of a doubly periodic node grid; node (i, j) is stored at i * n_phi + j.
struct GridShape {
    int n_theta = 0;
    int n_phi = 0;
    double h_theta = 0.0;
    double h_phi = 0.0;

    std::size_t size() const { return static_cast<std::size_t>(n_theta) * n_phi; }
    std::size_t index(int i, int j) const {
        const int ii = ((i % n_theta) + n_theta) % n_theta;
        const int jj = ((j % n_phi) + n_phi) % n_phi;
        return static_cast<std::size_t>(ii) * n_phi + jj;
    }
};

// Fourth-order central periodic differences. T needs T + T and double * T.

template <typename T>
std::vector<T> diff_theta(const std::vector<T>& f, const GridShape& g) {
    std::vector<T> out(f.size());
    const double s = 1.0 / (12.0 * g.h_theta);
    for (int i = 0; i < g.n_theta; ++i)
        for (int j = 0; j < g.n_phi; ++j)
            out[g.index(i, j)] = s * (-1.0 * f[g.index(i + 2, j)] + 8.0 * f[g.index(i + 1, j)] -
                                      8.0 * f[g.index(i - 1, j)] + f[g.index(i - 2, j)]);
    return out;
}

template <typename T>
std::vector<T> diff_phi(const std::vector<T>& f, const GridShape& g) {
    std::vector<T> out(f.size());
    const double s = 1.0 / (12.0 * g.h_phi);
    for (int i = 0; i < g.n_theta; ++i)
        for (int j = 0; j < g.n_phi; ++j)
            out[g.index(i, j)] = s * (-1.0 * f[g.index(i, j + 2)] + 8.0 * f[g.index(i, j + 1)] -
                                      8.0 * f[g.index(i, j - 1)] + f[g.index(i, j - 2)]);
    return out;
}

template <typename T>
std::vector<T> diff2_theta(const std::vector<T>& f, const GridShape& g) {
    std::vector<T> out(f.size());
    const double s = 1.0 / (12.0 * g.h_theta * g.h_theta);
    for (int i = 0; i < g.n_theta; ++i)
        for (int j = 0; j < g.n_phi; ++j)
            out[g.index(i, j)] =
                s * (-1.0 * f[g.index(i + 2, j)] + 16.0 * f[g.index(i + 1, j)] -
                     30.0 * f[g.index(i, j)] + 16.0 * f[g.index(i - 1, j)] - f[g.index(i - 2, j)]);
    return out;
}

template <typename T>
std::vector<T> diff2_phi(const std::vector<T>& f, const GridShape& g) {
    std::vector<T> out(f.size());
    const double s = 1.0 / (12.0 * g.h_phi * g.h_phi);
    for (int i = 0; i < g.n_theta; ++i)
        for (int j = 0; j < g.n_phi; ++j)
            out[g.index(i, j)] =
                s * (-1.0 * f[g.index(i, j + 2)] + 16.0 * f[g.index(i, j + 1)] -
                     30.0 * f[g.index(i, j)] + 16.0 * f[g.index(i, j - 1)] - f[g.index(i, j - 2)]);
    return out;
}

}  // namespace kahlab
