#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <vector>

#include <nlohmann/json.hpp>

#include "c2fapv/common.hpp"
#include "c2fapv/grid.hpp"
#include "c2fapv/volume.hpp"

namespace c2f {

// Axis-aligned per-class box: real-valued center and extents in voxel
// coordinates. Rounding to voxel indices happens only inside crop.
struct PriorBox {
    int class_id = 0;
    std::array<double, 3> center{};  // (x, y, z)
    std::array<double, 3> size{};    // (w, l, h)
};

struct PriorBoxSet {
    std::map<int, PriorBox> boxes;  // one per class 1..N
    std::array<int, 3> grid{};      // source grid dims
};

// Corpus-level statistics: per class, span of the per-axis min/max voxel
// indices over every sample. center = (min+max)/2, size = max-min+1.
inline PriorBoxSet compute_prior_boxes(const std::vector<LabelMap>& labels, int num_classes) {
    if (num_classes < 1) throw ParameterError("compute_prior_boxes: N must be >= 1");
    if (labels.empty()) throw ParameterError("compute_prior_boxes: empty corpus");
    const auto dims = labels[0].grid.dims();
    for (const auto& m : labels)
        if (m.grid.dims() != dims)
            throw ParameterError("compute_prior_boxes: label maps must share grid dims");

    const int kInt = std::numeric_limits<int>::max();
    std::vector<std::array<int, 3>> lo(std::size_t(num_classes) + 1, {kInt, kInt, kInt});
    std::vector<std::array<int, 3>> hi(std::size_t(num_classes) + 1, {-1, -1, -1});

    for (const auto& m : labels)
        for (int z = 0; z < m.L(); ++z)
            for (int y = 0; y < m.H(); ++y)
                for (int x = 0; x < m.W(); ++x) {
                    int n = m.grid.at(x, y, z);
                    if (n == 0 || n > num_classes) continue;
                    auto& l = lo[std::size_t(n)];
                    auto& h = hi[std::size_t(n)];
                    l[0] = std::min(l[0], x); l[1] = std::min(l[1], y); l[2] = std::min(l[2], z);
                    h[0] = std::max(h[0], x); h[1] = std::max(h[1], y); h[2] = std::max(h[2], z);
                }

    PriorBoxSet set;
    set.grid = dims;
    for (int n = 1; n <= num_classes; ++n) {
        if (hi[std::size_t(n)][0] < 0) throw MissingClassError(n);
        PriorBox b;
        b.class_id = n;
        for (int a = 0; a < 3; ++a) {
            b.center[std::size_t(a)] =
                0.5 * (lo[std::size_t(n)][std::size_t(a)] + hi[std::size_t(n)][std::size_t(a)]);
            b.size[std::size_t(a)] =
                double(hi[std::size_t(n)][std::size_t(a)] - lo[std::size_t(n)][std::size_t(a)] + 1);
        }
        set.boxes[n] = b;
    }
    return set;
}

// Grow extents by (1+fraction) and clamp the box into the grid, shifting the
// center only when clamping forces it. Voxel i spans [i-0.5, i+0.5].
inline PriorBox pad_box(const PriorBox& b, double fraction, std::array<int, 3> dims) {
    if (fraction < 0) throw ParameterError("pad_box: fraction must be >= 0");
    PriorBox out = b;
    for (int a = 0; a < 3; ++a) {
        double dim = double(dims[std::size_t(a)]);
        double s = b.size[std::size_t(a)] * (1.0 + fraction);
        s = std::min(s, dim);
        double c = b.center[std::size_t(a)];
        if (c - s / 2 < -0.5) c = s / 2 - 0.5;
        if (c + s / 2 > dim - 0.5) c = dim - 0.5 - s / 2;
        out.size[std::size_t(a)] = s;
        out.center[std::size_t(a)] = c;
    }
    return out;
}

// Integer voxel bounds covered by a box, clamped to the grid.
struct BoxBounds {
    std::array<int, 3> lo{};
    std::array<int, 3> hi{};  // inclusive
    std::array<int, 3> extent() const {
        return {hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1};
    }
};

inline BoxBounds box_voxel_bounds(const PriorBox& b, std::array<int, 3> dims) {
    BoxBounds r;
    for (int a = 0; a < 3; ++a) {
        double lo = b.center[std::size_t(a)] - b.size[std::size_t(a)] / 2;
        double hi = b.center[std::size_t(a)] + b.size[std::size_t(a)] / 2;
        int ilo = int(std::floor(lo + 0.5));
        int ihi = int(std::ceil(hi - 0.5));
        ilo = std::max(ilo, 0);
        ihi = std::min(ihi, dims[std::size_t(a)] - 1);
        if (ihi < ilo) throw ParameterError("crop: box does not intersect the grid");
        r.lo[std::size_t(a)] = ilo;
        r.hi[std::size_t(a)] = ihi;
    }
    return r;
}

// Region of a parent grid under a prior box.
template <typename T>
struct SubVolumeT {
    Grid3<T> data;
    PriorBox box;
    int class_id = 0;
    std::array<int, 3> parent_dims{};
    std::array<int, 3> origin{};  // voxel bounds actually used
};

using SubVolume = SubVolumeT<double>;

template <typename T>
SubVolumeT<T> crop(const Grid3<T>& volume, const PriorBox& b) {
    auto bounds = box_voxel_bounds(b, volume.dims());
    auto ext = bounds.extent();
    SubVolumeT<T> sub;
    sub.data = Grid3<T>(ext[0], ext[1], ext[2]);
    sub.box = b;
    sub.class_id = b.class_id;
    sub.parent_dims = volume.dims();
    sub.origin = bounds.lo;
    for (int z = 0; z < ext[2]; ++z)
        for (int y = 0; y < ext[1]; ++y)
            for (int x = 0; x < ext[0]; ++x)
                sub.data.at(x, y, z) =
                    volume.at(bounds.lo[0] + x, bounds.lo[1] + y, bounds.lo[2] + z);
    return sub;
}

template <typename T>
Grid3<T> embed(const SubVolumeT<T>& sub, T fill) {
    Grid3<T> out(sub.parent_dims[0], sub.parent_dims[1], sub.parent_dims[2], fill);
    for (int z = 0; z < sub.data.L; ++z)
        for (int y = 0; y < sub.data.H; ++y)
            for (int x = 0; x < sub.data.W; ++x)
                out.at(sub.origin[0] + x, sub.origin[1] + y, sub.origin[2] + z) =
                    sub.data.at(x, y, z);
    return out;
}

// Priors file: JSON array of {class_id, center, size, grid}.
inline void save_priors(const PriorBoxSet& set, const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [n, b] : set.boxes)
        j.push_back({{"class_id", n},
                     {"center", {b.center[0], b.center[1], b.center[2]}},
                     {"size", {b.size[0], b.size[1], b.size[2]}},
                     {"grid", {set.grid[0], set.grid[1], set.grid[2]}}});
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write priors file " + path.string());
    out << j.dump(2) << "\n";
}

inline PriorBoxSet load_priors(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("missing priors file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("corrupt priors file " + path.string() + ": " + e.what());
    }
    if (!j.is_array() || j.empty()) throw FormatError("priors file must be a non-empty array");
    PriorBoxSet set;
    for (const auto& je : j) {
        PriorBox b;
        b.class_id = je.at("class_id").get<int>();
        for (int a = 0; a < 3; ++a) {
            b.center[std::size_t(a)] = je.at("center")[std::size_t(a)].get<double>();
            b.size[std::size_t(a)] = je.at("size")[std::size_t(a)].get<double>();
            set.grid[std::size_t(a)] = je.at("grid")[std::size_t(a)].get<int>();
        }
        set.boxes[b.class_id] = b;
    }
    return set;
}

}  // namespace c2f
