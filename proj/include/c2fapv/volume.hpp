#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "c2fapv/common.hpp"
#include "c2fapv/grid.hpp"

namespace c2f {

// 3D scalar intensity volume with voxel spacing metadata.
struct CTVolume {
    Grid3f grid;
    std::array<double, 3> spacing = {1.0, 1.0, 1.0};
    std::string id;

    CTVolume() = default;
    CTVolume(int w, int h, int l, std::array<double, 3> sp = {1, 1, 1}, std::string sample_id = {})
        : grid(w, h, l), spacing(sp), id(std::move(sample_id)) {}

    int W() const { return grid.W; }
    int H() const { return grid.H; }
    int L() const { return grid.L; }

    void validate() const {
        if (grid.W < 1 || grid.H < 1 || grid.L < 1)
            throw ParameterError("volume dims must be >= 1");
        for (double s : spacing)
            if (!(s > 0.0)) throw ParameterError("volume spacing must be > 0");
        for (float f : grid.data)
            if (!std::isfinite(f)) throw ParameterError("volume contains non-finite values");
    }
};

// Integer class labels 0..N aligned with a CTVolume.
struct LabelMap {
    Grid3u8 grid;
    int num_classes = 0;  // organ classes, excluding background

    LabelMap() = default;
    LabelMap(int w, int h, int l, int n) : grid(w, h, l), num_classes(n) {}

    int W() const { return grid.W; }
    int H() const { return grid.H; }
    int L() const { return grid.L; }

    void validate() const {
        if (num_classes < 0) throw ParameterError("num_classes must be >= 0");
        for (std::uint8_t v : grid.data)
            if (int(v) > num_classes) throw ParameterError("label value exceeds num_classes");
    }
};

// One axial plane; index is the 0-based z position in the parent volume.
struct Slice2D {
    int W = 0, H = 0;
    int index = 0;
    std::vector<float> data;  // x-fastest

    float& at(int x, int y) { return data[std::size_t(x) + std::size_t(W) * y]; }
    const float& at(int x, int y) const { return data[std::size_t(x) + std::size_t(W) * y]; }
};

inline std::vector<Slice2D> slice_axial(const CTVolume& v) {
    std::vector<Slice2D> out;
    out.reserve(std::size_t(v.L()));
    const std::size_t plane = std::size_t(v.W()) * v.H();
    for (int z = 0; z < v.L(); ++z) {
        Slice2D s;
        s.W = v.W();
        s.H = v.H();
        s.index = z;
        s.data.assign(v.grid.data.begin() + std::ptrdiff_t(plane) * z,
                      v.grid.data.begin() + std::ptrdiff_t(plane) * (z + 1));
        out.push_back(std::move(s));
    }
    return out;
}

// Inverse of slice_axial; used by tests and by attended-volume assembly.
inline CTVolume stack_slices(const std::vector<Slice2D>& slices,
                             std::array<double, 3> spacing = {1, 1, 1},
                             const std::string& id = {}) {
    if (slices.empty()) throw ParameterError("stack_slices: no slices");
    CTVolume v(slices[0].W, slices[0].H, int(slices.size()), spacing, id);
    const std::size_t plane = std::size_t(v.W()) * v.H();
    for (std::size_t z = 0; z < slices.size(); ++z) {
        if (slices[z].W != v.W() || slices[z].H != v.H())
            throw ParameterError("stack_slices: inconsistent slice shapes");
        std::copy(slices[z].data.begin(), slices[z].data.end(),
                  v.grid.data.begin() + std::ptrdiff_t(plane * z));
    }
    return v;
}

// clip to [lo, hi] then map affinely onto [0, 1]
inline CTVolume normalize_intensity(const CTVolume& v, double lo, double hi) {
    if (!(lo < hi)) throw ParameterError("normalize_intensity: requires lo < hi");
    CTVolume out = v;
    const double scale = 1.0 / (hi - lo);
    for (float& f : out.grid.data) {
        double x = std::clamp(double(f), lo, hi);
        f = float((x - lo) * scale);
    }
    return out;
}

}  // namespace c2f
