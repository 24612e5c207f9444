#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "c2fapv/common.hpp"
#include "c2fapv/grid.hpp"

namespace c2f {

// Output voxel i maps to input coordinate (i + 0.5) * (src/dst) - 0.5,
// clamped to the valid range (align to voxel centers).
inline double resample_coord(int i, int src, int dst) {
    double c = (i + 0.5) * (double(src) / double(dst)) - 0.5;
    return std::clamp(c, 0.0, double(src - 1));
}

template <typename T>
Grid3<T> resample_nearest(const Grid3<T>& src, int nw, int nh, int nl) {
    if (nw < 1 || nh < 1 || nl < 1) throw ParameterError("resample: dims must be >= 1");
    Grid3<T> dst(nw, nh, nl);
    for (int z = 0; z < nl; ++z) {
        int sz = int(std::lround(resample_coord(z, src.L, nl)));
        for (int y = 0; y < nh; ++y) {
            int sy = int(std::lround(resample_coord(y, src.H, nh)));
            for (int x = 0; x < nw; ++x) {
                int sx = int(std::lround(resample_coord(x, src.W, nw)));
                dst.at(x, y, z) = src.at(sx, sy, sz);
            }
        }
    }
    return dst;
}

template <typename T>
Grid3<T> resample_trilinear(const Grid3<T>& src, int nw, int nh, int nl) {
    if (nw < 1 || nh < 1 || nl < 1) throw ParameterError("resample: dims must be >= 1");
    Grid3<T> dst(nw, nh, nl);
    for (int z = 0; z < nl; ++z) {
        double cz = resample_coord(z, src.L, nl);
        int z0 = int(std::floor(cz)), z1 = std::min(z0 + 1, src.L - 1);
        double fz = cz - z0;
        for (int y = 0; y < nh; ++y) {
            double cy = resample_coord(y, src.H, nh);
            int y0 = int(std::floor(cy)), y1 = std::min(y0 + 1, src.H - 1);
            double fy = cy - y0;
            for (int x = 0; x < nw; ++x) {
                double cx = resample_coord(x, src.W, nw);
                int x0 = int(std::floor(cx)), x1 = std::min(x0 + 1, src.W - 1);
                double fx = cx - x0;
                double v000 = src.at(x0, y0, z0), v100 = src.at(x1, y0, z0);
                double v010 = src.at(x0, y1, z0), v110 = src.at(x1, y1, z0);
                double v001 = src.at(x0, y0, z1), v101 = src.at(x1, y0, z1);
                double v011 = src.at(x0, y1, z1), v111 = src.at(x1, y1, z1);
                double v = (1 - fz) * ((1 - fy) * ((1 - fx) * v000 + fx * v100) +
                                       fy * ((1 - fx) * v010 + fx * v110)) +
                           fz * ((1 - fy) * ((1 - fx) * v001 + fx * v101) +
                                 fy * ((1 - fx) * v011 + fx * v111));
                dst.at(x, y, z) = T(v);
            }
        }
    }
    return dst;
}

// Trilinear resample with an adjoint, for paths that need gradients
// (sub-volume -> fixed cube). The adjoint scatters sequentially so results
// are independent of thread count.
inline void resample_trilinear_adjoint(const Grid3d& grad_dst, Grid3d& grad_src_accum) {
    const int nw = grad_dst.W, nh = grad_dst.H, nl = grad_dst.L;
    const int sw = grad_src_accum.W, sh = grad_src_accum.H, sl = grad_src_accum.L;
    for (int z = 0; z < nl; ++z) {
        double cz = resample_coord(z, sl, nl);
        int z0 = int(std::floor(cz)), z1 = std::min(z0 + 1, sl - 1);
        double fz = cz - z0;
        for (int y = 0; y < nh; ++y) {
            double cy = resample_coord(y, sh, nh);
            int y0 = int(std::floor(cy)), y1 = std::min(y0 + 1, sh - 1);
            double fy = cy - y0;
            for (int x = 0; x < nw; ++x) {
                double cx = resample_coord(x, sw, nw);
                int x0 = int(std::floor(cx)), x1 = std::min(x0 + 1, sw - 1);
                double fx = cx - x0;
                double g = grad_dst.at(x, y, z);
                grad_src_accum.at(x0, y0, z0) += g * (1 - fz) * (1 - fy) * (1 - fx);
                grad_src_accum.at(x1, y0, z0) += g * (1 - fz) * (1 - fy) * fx;
                grad_src_accum.at(x0, y1, z0) += g * (1 - fz) * fy * (1 - fx);
                grad_src_accum.at(x1, y1, z0) += g * (1 - fz) * fy * fx;
                grad_src_accum.at(x0, y0, z1) += g * fz * (1 - fy) * (1 - fx);
                grad_src_accum.at(x1, y0, z1) += g * fz * (1 - fy) * fx;
                grad_src_accum.at(x0, y1, z1) += g * fz * fy * (1 - fx);
                grad_src_accum.at(x1, y1, z1) += g * fz * fy * fx;
            }
        }
    }
}

}  // namespace c2f
