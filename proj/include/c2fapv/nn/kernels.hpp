#pragma once

// Dense 3x3 / 3x3x3 stencil kernels, zero padding, stride 1. Every output
// element is a fixed-order sequential sum computed by exactly one thread, so
// results are bit-identical for any thread count.

#include <cstddef>

namespace c2f::nn {

namespace detail {

// out[y][x] += sum_{ky,kx} w[ky][kx] * in[y+ky-1][x+kx-1], zero-padded.
inline void stencil3x3_add(const double* in, int H, int W, const double* w, double* out) {
    auto row = [&](int y, int ylo, int yhi) {
        for (int x = 0; x < W; ++x) {
            double acc = 0.0;
            for (int ky = ylo; ky <= yhi; ++ky) {
                const double* irow = in + std::size_t(y + ky) * W;
                const double* wrow = w + std::size_t(ky + 1) * 3;
                if (x > 0) acc += wrow[0] * irow[x - 1];
                acc += wrow[1] * irow[x];
                if (x + 1 < W) acc += wrow[2] * irow[x + 1];
            }
            out[std::size_t(y) * W + x] += acc;
        }
    };
    if (H == 1) {
        row(0, 0, 0);
        return;
    }
    row(0, 0, 1);
    for (int y = 1; y + 1 < H; ++y) {
        const double* r0 = in + std::size_t(y - 1) * W;
        const double* r1 = in + std::size_t(y) * W;
        const double* r2 = in + std::size_t(y + 1) * W;
        double* orow = out + std::size_t(y) * W;
        const double w00 = w[0], w01 = w[1], w02 = w[2];
        const double w10 = w[3], w11 = w[4], w12 = w[5];
        const double w20 = w[6], w21 = w[7], w22 = w[8];
        // left edge
        orow[0] += w01 * r0[0] + w02 * r0[1] + w11 * r1[0] + w12 * r1[1] + w21 * r2[0] +
                   w22 * r2[1];
        for (int x = 1; x + 1 < W; ++x) {
            double acc = w00 * r0[x - 1] + w01 * r0[x] + w02 * r0[x + 1];
            acc += w10 * r1[x - 1] + w11 * r1[x] + w12 * r1[x + 1];
            acc += w20 * r2[x - 1] + w21 * r2[x] + w22 * r2[x + 1];
            orow[x] += acc;
        }
        if (W > 1) {
            int x = W - 1;
            orow[x] += w00 * r0[x - 1] + w01 * r0[x] + w10 * r1[x - 1] + w11 * r1[x] +
                       w20 * r2[x - 1] + w21 * r2[x];
        }
    }
    row(H - 1, -1, 0);
}

// 9 dot products between out-grads and shifted input planes; accumulates into
// gw[ky*3+kx].
inline void stencil3x3_wgrad(const double* in, const double* gout, int H, int W, double* gw) {
    for (int ky = 0; ky < 3; ++ky)
        for (int kx = 0; kx < 3; ++kx) {
            const int dy = ky - 1, dx = kx - 1;
            const int y0 = dy < 0 ? -dy : 0, y1 = dy > 0 ? H - dy : H;
            const int x0 = dx < 0 ? -dx : 0, x1 = dx > 0 ? W - dx : W;
            double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
            for (int y = y0; y < y1; ++y) {
                const double* g = gout + std::size_t(y) * W;
                const double* i = in + std::size_t(y + dy) * W + dx;
                int x = x0;
                for (; x + 3 < x1; x += 4) {
                    a0 += g[x] * i[x];
                    a1 += g[x + 1] * i[x + 1];
                    a2 += g[x + 2] * i[x + 2];
                    a3 += g[x + 3] * i[x + 3];
                }
                for (; x < x1; ++x) a0 += g[x] * i[x];
            }
            gw[std::size_t(ky) * 3 + kx] += ((a0 + a1) + (a2 + a3));
        }
}

inline void flip9(const double* w, double* wf) {
    for (int i = 0; i < 9; ++i) wf[i] = w[8 - i];
}

inline void flip27(const double* w, double* wf) {
    for (int i = 0; i < 27; ++i) wf[i] = w[26 - i];
}

// 3D: out[z][y][x] += sum w[kz][ky][kx] * in[z+kz-1][y+ky-1][x+kx-1].
// Implemented as three z-shifted 2D stencils per output plane.
inline void stencil3x3x3_add(const double* in, int D, int H, int W, const double* w,
                             double* out) {
    const std::size_t plane = std::size_t(H) * W;
    for (int z = 0; z < D; ++z)
        for (int kz = 0; kz < 3; ++kz) {
            int sz = z + kz - 1;
            if (sz < 0 || sz >= D) continue;
            stencil3x3_add(in + plane * std::size_t(sz), H, W, w + std::size_t(kz) * 9,
                           out + plane * std::size_t(z));
        }
}

inline void stencil3x3x3_wgrad(const double* in, const double* gout, int D, int H, int W,
                               double* gw) {
    const std::size_t plane = std::size_t(H) * W;
    for (int z = 0; z < D; ++z)
        for (int kz = 0; kz < 3; ++kz) {
            int sz = z + kz - 1;
            if (sz < 0 || sz >= D) continue;
            stencil3x3_wgrad(in + plane * std::size_t(sz), gout + plane * std::size_t(z), H, W,
                             gw + std::size_t(kz) * 9);
        }
}

}  // namespace detail

// ---- 2D convolution, weights (Cout, Cin, 3, 3) ----

inline void conv2d_forward(const double* in, int Cin, int H, int W, const double* weight,
                           const double* bias, double* out, int Cout) {
    const std::size_t plane = std::size_t(H) * W;
#pragma omp parallel for schedule(static)
    for (int co = 0; co < Cout; ++co) {
        double* oplane = out + plane * std::size_t(co);
        const double b = bias[co];
        for (std::size_t i = 0; i < plane; ++i) oplane[i] = b;
        for (int ci = 0; ci < Cin; ++ci)
            detail::stencil3x3_add(in + plane * std::size_t(ci), H, W,
                                   weight + (std::size_t(co) * Cin + ci) * 9, oplane);
    }
}

inline void conv2d_backward_data(const double* gout, int Cout, int H, int W,
                                 const double* weight, double* gin, int Cin) {
    const std::size_t plane = std::size_t(H) * W;
#pragma omp parallel for schedule(static)
    for (int ci = 0; ci < Cin; ++ci) {
        double* gplane = gin + plane * std::size_t(ci);
        for (std::size_t i = 0; i < plane; ++i) gplane[i] = 0.0;
        double wf[9];
        for (int co = 0; co < Cout; ++co) {
            detail::flip9(weight + (std::size_t(co) * Cin + ci) * 9, wf);
            detail::stencil3x3_add(gout + plane * std::size_t(co), H, W, wf, gplane);
        }
    }
}

inline void conv2d_backward_param(const double* in, int Cin, int H, int W, const double* gout,
                                  int Cout, double* gweight, double* gbias) {
    const std::size_t plane = std::size_t(H) * W;
#pragma omp parallel for schedule(static)
    for (int co = 0; co < Cout; ++co) {
        const double* gplane = gout + plane * std::size_t(co);
        double acc = 0.0;
        for (std::size_t i = 0; i < plane; ++i) acc += gplane[i];
        gbias[co] += acc;
        for (int ci = 0; ci < Cin; ++ci)
            detail::stencil3x3_wgrad(in + plane * std::size_t(ci), gplane, H, W,
                                     gweight + (std::size_t(co) * Cin + ci) * 9);
    }
}

// ---- 3D convolution, weights (Cout, Cin, 3, 3, 3) ----

inline void conv3d_forward(const double* in, int Cin, int D, int H, int W, const double* weight,
                           const double* bias, double* out, int Cout) {
    const std::size_t vol = std::size_t(D) * H * W;
#pragma omp parallel for schedule(static)
    for (int co = 0; co < Cout; ++co) {
        double* ovol = out + vol * std::size_t(co);
        const double b = bias[co];
        for (std::size_t i = 0; i < vol; ++i) ovol[i] = b;
        for (int ci = 0; ci < Cin; ++ci)
            detail::stencil3x3x3_add(in + vol * std::size_t(ci), D, H, W,
                                     weight + (std::size_t(co) * Cin + ci) * 27, ovol);
    }
}

inline void conv3d_backward_data(const double* gout, int Cout, int D, int H, int W,
                                 const double* weight, double* gin, int Cin) {
    const std::size_t vol = std::size_t(D) * H * W;
#pragma omp parallel for schedule(static)
    for (int ci = 0; ci < Cin; ++ci) {
        double* gvol = gin + vol * std::size_t(ci);
        for (std::size_t i = 0; i < vol; ++i) gvol[i] = 0.0;
        double wf[27];
        for (int co = 0; co < Cout; ++co) {
            detail::flip27(weight + (std::size_t(co) * Cin + ci) * 27, wf);
            detail::stencil3x3x3_add(gout + vol * std::size_t(co), D, H, W, wf, gvol);
        }
    }
}

inline void conv3d_backward_param(const double* in, int Cin, int D, int H, int W,
                                  const double* gout, int Cout, double* gweight,
                                  double* gbias) {
    const std::size_t vol = std::size_t(D) * H * W;
#pragma omp parallel for schedule(static)
    for (int co = 0; co < Cout; ++co) {
        const double* gvol = gout + vol * std::size_t(co);
        double acc = 0.0;
        for (std::size_t i = 0; i < vol; ++i) acc += gvol[i];
        gbias[co] += acc;
        for (int ci = 0; ci < Cin; ++ci)
            detail::stencil3x3x3_wgrad(in + vol * std::size_t(ci), gvol, D, H, W,
                                       gweight + (std::size_t(co) * Cin + ci) * 27);
    }
}

}  // namespace c2f::nn
