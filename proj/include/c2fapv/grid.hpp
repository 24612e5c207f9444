#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "c2fapv/common.hpp"

namespace c2f {

// Dense 3D grid, x-fastest: index = x + W*(y + H*z).
template <typename T>
struct Grid3 {
    int W = 0, H = 0, L = 0;
    std::vector<T> data;

    Grid3() = default;
    Grid3(int w, int h, int l, T fill = T{})
        : W(w), H(h), L(l), data(std::size_t(w) * h * l, fill) {}

    std::size_t size() const { return data.size(); }
    std::size_t idx(int x, int y, int z) const {
        return std::size_t(x) + std::size_t(W) * (std::size_t(y) + std::size_t(H) * z);
    }
    T& at(int x, int y, int z) { return data[idx(x, y, z)]; }
    const T& at(int x, int y, int z) const { return data[idx(x, y, z)]; }

    std::array<int, 3> dims() const { return {W, H, L}; }

    bool same_shape(const Grid3& o) const { return W == o.W && H == o.H && L == o.L; }
};

using Grid3f = Grid3<float>;
using Grid3d = Grid3<double>;
using Grid3u8 = Grid3<std::uint8_t>;

// Minimal dense tensor for network math; last dimension fastest.
// A (D,H,W) tensor shares memory order with Grid3 (z,y,x -> x fastest).
struct Tensor {
    std::vector<int> dims;
    std::vector<double> v;

    Tensor() = default;
    explicit Tensor(std::vector<int> d) : dims(std::move(d)) {
        std::size_t n = 1;
        for (int e : dims) n *= std::size_t(e);
        v.assign(n, 0.0);
    }

    std::size_t numel() const { return v.size(); }
    double* data() { return v.data(); }
    const double* data() const { return v.data(); }

    int dim(int i) const { return dims[std::size_t(i)]; }

    bool same_shape(const Tensor& o) const { return dims == o.dims; }
};

}  // namespace c2f
