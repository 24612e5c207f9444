#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "c2fapv/grid.hpp"
#include "c2fapv/nn/core.hpp"
#include "c2fapv/nn/kernels.hpp"
#include "c2fapv/rng.hpp"

namespace c2f::nn {

// ---------------------------------------------------------------- conv

struct Conv2d {
    Parameter* w = nullptr;
    Parameter* b = nullptr;
    int cin = 0, cout = 0;

    void init(ParamStore& ps, const std::string& name, int cin_, int cout_, Rng& rng,
              double gain = 2.0) {
        cin = cin_;
        cout = cout_;
        w = ps.add(name + ".w", {cout_, cin_, 3, 3});
        b = ps.add(name + ".b", {cout_});
        init_normal(w, rng, std::sqrt(gain / (cin_ * 9.0)));
        init_zero(b);
    }

    Tensor forward(const Tensor& x) const {
        Tensor y({cout, x.dim(1), x.dim(2)});
        conv2d_forward(x.data(), cin, x.dim(1), x.dim(2), w->value.data(), b->value.data(),
                       y.data(), cout);
        return y;
    }

    Tensor backward(const Tensor& x, const Tensor& gy) const {
        conv2d_backward_param(x.data(), cin, x.dim(1), x.dim(2), gy.data(), cout,
                              w->grad.data(), b->grad.data());
        Tensor gx(x.dims);
        conv2d_backward_data(gy.data(), cout, x.dim(1), x.dim(2), w->value.data(), gx.data(),
                             cin);
        return gx;
    }
};

struct Conv3d {
    Parameter* w = nullptr;
    Parameter* b = nullptr;
    int cin = 0, cout = 0;

    void init(ParamStore& ps, const std::string& name, int cin_, int cout_, Rng& rng,
              double gain = 2.0) {
        cin = cin_;
        cout = cout_;
        w = ps.add(name + ".w", {cout_, cin_, 3, 3, 3});
        b = ps.add(name + ".b", {cout_});
        init_normal(w, rng, std::sqrt(gain / (cin_ * 27.0)));
        init_zero(b);
    }

    Tensor forward(const Tensor& x) const {
        Tensor y({cout, x.dim(1), x.dim(2), x.dim(3)});
        conv3d_forward(x.data(), cin, x.dim(1), x.dim(2), x.dim(3), w->value.data(),
                       b->value.data(), y.data(), cout);
        return y;
    }

    Tensor backward(const Tensor& x, const Tensor& gy) const {
        conv3d_backward_param(x.data(), cin, x.dim(1), x.dim(2), x.dim(3), gy.data(), cout,
                              w->grad.data(), b->grad.data());
        Tensor gx(x.dims);
        conv3d_backward_data(gy.data(), cout, x.dim(1), x.dim(2), x.dim(3), w->value.data(),
                             gx.data(), cin);
        return gx;
    }
};

struct Linear {
    Parameter* w = nullptr;  // (out, in)
    Parameter* b = nullptr;
    int in = 0, out = 0;

    void init(ParamStore& ps, const std::string& name, int in_, int out_, Rng& rng,
              double gain = 1.0) {
        in = in_;
        out = out_;
        w = ps.add(name + ".w", {out_, in_});
        b = ps.add(name + ".b", {out_});
        init_normal(w, rng, std::sqrt(gain / double(in_)));
        init_zero(b);
    }

    std::vector<double> forward(const std::vector<double>& x) const {
        std::vector<double> y(std::size_t(out));
        for (int o = 0; o < out; ++o) {
            double acc = b->value[std::size_t(o)];
            const double* row = w->value.data() + std::size_t(o) * in;
            for (int i = 0; i < in; ++i) acc += row[i] * x[std::size_t(i)];
            y[std::size_t(o)] = acc;
        }
        return y;
    }

    std::vector<double> backward(const std::vector<double>& x,
                                 const std::vector<double>& gy) const {
        std::vector<double> gx(std::size_t(in), 0.0);
        for (int o = 0; o < out; ++o) {
            const double g = gy[std::size_t(o)];
            b->grad[std::size_t(o)] += g;
            double* wg = w->grad.data() + std::size_t(o) * in;
            const double* row = w->value.data() + std::size_t(o) * in;
            for (int i = 0; i < in; ++i) {
                wg[i] += g * x[std::size_t(i)];
                gx[std::size_t(i)] += g * row[i];
            }
        }
        return gx;
    }
};

// ---------------------------------------------------------------- pointwise

inline Tensor relu(const Tensor& x) {
    Tensor y = x;
    for (double& v : y.v) v = v > 0.0 ? v : 0.0;
    return y;
}

inline Tensor relu_backward(const Tensor& x, const Tensor& gy) {
    Tensor gx = gy;
    for (std::size_t i = 0; i < gx.v.size(); ++i)
        if (x.v[i] <= 0.0) gx.v[i] = 0.0;
    return gx;
}

inline Tensor sigmoid(const Tensor& x) {
    Tensor y = x;
    for (double& v : y.v) v = 1.0 / (1.0 + std::exp(-v));
    return y;
}

// takes the forward output y
inline Tensor sigmoid_backward(const Tensor& y, const Tensor& gy) {
    Tensor gx = gy;
    for (std::size_t i = 0; i < gx.v.size(); ++i) gx.v[i] *= y.v[i] * (1.0 - y.v[i]);
    return gx;
}

// ---------------------------------------------------------------- pooling

inline Tensor avgpool2(const Tensor& x) {  // (C,H,W) -> (C,H/2,W/2)
    const int C = x.dim(0), H = x.dim(1), W = x.dim(2);
    if (H % 2 || W % 2) throw ParameterError("avgpool2: dims must be even");
    Tensor y({C, H / 2, W / 2});
    for (int c = 0; c < C; ++c)
        for (int yy = 0; yy < H / 2; ++yy)
            for (int xx = 0; xx < W / 2; ++xx) {
                const double* p = x.data() + (std::size_t(c) * H + 2 * yy) * W + 2 * xx;
                y.v[(std::size_t(c) * (H / 2) + yy) * (W / 2) + xx] =
                    0.25 * ((p[0] + p[1]) + (p[std::size_t(W)] + p[std::size_t(W) + 1]));
            }
    return y;
}

inline Tensor avgpool2_backward(const Tensor& gy, int H, int W) {
    const int C = gy.dim(0);
    Tensor gx({C, H, W});
    for (int c = 0; c < C; ++c)
        for (int yy = 0; yy < H / 2; ++yy)
            for (int xx = 0; xx < W / 2; ++xx) {
                double g = 0.25 * gy.v[(std::size_t(c) * (H / 2) + yy) * (W / 2) + xx];
                double* p = gx.data() + (std::size_t(c) * H + 2 * yy) * W + 2 * xx;
                p[0] = g;
                p[1] = g;
                p[std::size_t(W)] = g;
                p[std::size_t(W) + 1] = g;
            }
    return gx;
}

inline Tensor avgpool2_3d(const Tensor& x) {  // (C,D,H,W) -> halved
    const int C = x.dim(0), D = x.dim(1), H = x.dim(2), W = x.dim(3);
    if (D % 2 || H % 2 || W % 2) throw ParameterError("avgpool2_3d: dims must be even");
    Tensor y({C, D / 2, H / 2, W / 2});
    std::size_t o = 0;
    for (int c = 0; c < C; ++c)
        for (int zz = 0; zz < D / 2; ++zz)
            for (int yy = 0; yy < H / 2; ++yy)
                for (int xx = 0; xx < W / 2; ++xx) {
                    double acc = 0.0;
                    for (int dz = 0; dz < 2; ++dz)
                        for (int dy = 0; dy < 2; ++dy) {
                            const double* p = x.data() +
                                              ((std::size_t(c) * D + 2 * zz + dz) * H + 2 * yy + dy) * W +
                                              2 * xx;
                            acc += p[0] + p[1];
                        }
                    y.v[o++] = 0.125 * acc;
                }
    return y;
}

inline Tensor avgpool2_3d_backward(const Tensor& gy, int D, int H, int W) {
    const int C = gy.dim(0);
    Tensor gx({C, D, H, W});
    std::size_t o = 0;
    for (int c = 0; c < C; ++c)
        for (int zz = 0; zz < D / 2; ++zz)
            for (int yy = 0; yy < H / 2; ++yy)
                for (int xx = 0; xx < W / 2; ++xx) {
                    double g = 0.125 * gy.v[o++];
                    for (int dz = 0; dz < 2; ++dz)
                        for (int dy = 0; dy < 2; ++dy) {
                            double* p = gx.data() +
                                        ((std::size_t(c) * D + 2 * zz + dz) * H + 2 * yy + dy) * W +
                                        2 * xx;
                            p[0] = g;
                            p[1] = g;
                        }
                }
    return gx;
}

// ---------------------------------------------------------------- upsample

inline Tensor upsample2(const Tensor& x) {  // nearest, (C,H,W) -> (C,2H,2W)
    const int C = x.dim(0), H = x.dim(1), W = x.dim(2);
    Tensor y({C, 2 * H, 2 * W});
    for (int c = 0; c < C; ++c)
        for (int yy = 0; yy < H; ++yy)
            for (int xx = 0; xx < W; ++xx) {
                double v = x.v[(std::size_t(c) * H + yy) * W + xx];
                double* p = y.data() + (std::size_t(c) * 2 * H + 2 * yy) * 2 * W + 2 * xx;
                p[0] = v;
                p[1] = v;
                p[std::size_t(2 * W)] = v;
                p[std::size_t(2 * W) + 1] = v;
            }
    return y;
}

inline Tensor upsample2_backward(const Tensor& gy) {
    const int C = gy.dim(0), H2 = gy.dim(1), W2 = gy.dim(2);
    Tensor gx({C, H2 / 2, W2 / 2});
    for (int c = 0; c < C; ++c)
        for (int yy = 0; yy < H2 / 2; ++yy)
            for (int xx = 0; xx < W2 / 2; ++xx) {
                const double* p = gy.data() + (std::size_t(c) * H2 + 2 * yy) * W2 + 2 * xx;
                gx.v[(std::size_t(c) * (H2 / 2) + yy) * (W2 / 2) + xx] =
                    (p[0] + p[1]) + (p[std::size_t(W2)] + p[std::size_t(W2) + 1]);
            }
    return gx;
}

inline Tensor upsample2_3d(const Tensor& x) {
    const int C = x.dim(0), D = x.dim(1), H = x.dim(2), W = x.dim(3);
    Tensor y({C, 2 * D, 2 * H, 2 * W});
    for (int c = 0; c < C; ++c)
        for (int zz = 0; zz < D; ++zz)
            for (int yy = 0; yy < H; ++yy)
                for (int xx = 0; xx < W; ++xx) {
                    double v = x.v[((std::size_t(c) * D + zz) * H + yy) * W + xx];
                    for (int dz = 0; dz < 2; ++dz)
                        for (int dy = 0; dy < 2; ++dy) {
                            double* p = y.data() +
                                        ((std::size_t(c) * 2 * D + 2 * zz + dz) * 2 * H + 2 * yy + dy) *
                                            2 * W +
                                        2 * xx;
                            p[0] = v;
                            p[1] = v;
                        }
                }
    return y;
}

inline Tensor upsample2_3d_backward(const Tensor& gy) {
    const int C = gy.dim(0), D2 = gy.dim(1), H2 = gy.dim(2), W2 = gy.dim(3);
    Tensor gx({C, D2 / 2, H2 / 2, W2 / 2});
    for (int c = 0; c < C; ++c)
        for (int zz = 0; zz < D2 / 2; ++zz)
            for (int yy = 0; yy < H2 / 2; ++yy)
                for (int xx = 0; xx < W2 / 2; ++xx) {
                    double acc = 0.0;
                    for (int dz = 0; dz < 2; ++dz)
                        for (int dy = 0; dy < 2; ++dy) {
                            const double* p = gy.data() +
                                              ((std::size_t(c) * D2 + 2 * zz + dz) * H2 + 2 * yy + dy) *
                                                  W2 +
                                              2 * xx;
                            acc += p[0] + p[1];
                        }
                    gx.v[((std::size_t(c) * (D2 / 2) + zz) * (H2 / 2) + yy) * (W2 / 2) + xx] = acc;
                }
    return gx;
}

// ---------------------------------------------------------------- concat

inline Tensor concat_channels(const Tensor& a, const Tensor& b) {
    std::vector<int> dims = a.dims;
    dims[0] += b.dim(0);
    Tensor y(dims);
    std::copy(a.v.begin(), a.v.end(), y.v.begin());
    std::copy(b.v.begin(), b.v.end(), y.v.begin() + std::ptrdiff_t(a.v.size()));
    return y;
}

inline void split_channels(const Tensor& gy, Tensor& ga, Tensor& gb) {
    std::copy(gy.v.begin(), gy.v.begin() + std::ptrdiff_t(ga.v.size()), ga.v.begin());
    std::copy(gy.v.begin() + std::ptrdiff_t(ga.v.size()), gy.v.end(), gb.v.begin());
}

// ---------------------------------------------------------------- softmax

// per-pixel softmax over the channel axis of a (C, spatial...) tensor
inline Tensor softmax_channels(const Tensor& x) {
    const int C = x.dim(0);
    std::size_t spatial = x.numel() / std::size_t(C);
    Tensor y(x.dims);
    for (std::size_t i = 0; i < spatial; ++i) {
        double mx = x.v[i];
        for (int c = 1; c < C; ++c) mx = std::max(mx, x.v[std::size_t(c) * spatial + i]);
        double sum = 0.0;
        for (int c = 0; c < C; ++c) {
            double e = std::exp(x.v[std::size_t(c) * spatial + i] - mx);
            y.v[std::size_t(c) * spatial + i] = e;
            sum += e;
        }
        double inv = 1.0 / sum;
        for (int c = 0; c < C; ++c) y.v[std::size_t(c) * spatial + i] *= inv;
    }
    return y;
}

// takes the forward output y
inline Tensor softmax_channels_backward(const Tensor& y, const Tensor& gy) {
    const int C = y.dim(0);
    std::size_t spatial = y.numel() / std::size_t(C);
    Tensor gx(y.dims);
    for (std::size_t i = 0; i < spatial; ++i) {
        double dot = 0.0;
        for (int c = 0; c < C; ++c)
            dot += gy.v[std::size_t(c) * spatial + i] * y.v[std::size_t(c) * spatial + i];
        for (int c = 0; c < C; ++c) {
            std::size_t k = std::size_t(c) * spatial + i;
            gx.v[k] = y.v[k] * (gy.v[k] - dot);
        }
    }
    return gx;
}

inline std::vector<double> softmax_vec(const std::vector<double>& x) {
    double mx = x[0];
    for (double v : x) mx = std::max(mx, v);
    std::vector<double> y(x.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = std::exp(x[i] - mx);
        sum += y[i];
    }
    for (double& v : y) v /= sum;
    return y;
}

// ---------------------------------------------------------------- misc

// global average pool over the spatial dims of (C, D, H, W)
inline std::vector<double> gap3d(const Tensor& x) {
    const int C = x.dim(0);
    std::size_t vol = x.numel() / std::size_t(C);
    std::vector<double> y(std::size_t(C));
    for (int c = 0; c < C; ++c) {
        double acc = 0.0;
        const double* p = x.data() + std::size_t(c) * vol;
        for (std::size_t i = 0; i < vol; ++i) acc += p[i];
        y[std::size_t(c)] = acc / double(vol);
    }
    return y;
}

inline Tensor gap3d_backward(const std::vector<double>& gy, const std::vector<int>& xdims) {
    Tensor gx(xdims);
    const int C = xdims[0];
    std::size_t vol = gx.numel() / std::size_t(C);
    for (int c = 0; c < C; ++c) {
        double g = gy[std::size_t(c)] / double(vol);
        double* p = gx.data() + std::size_t(c) * vol;
        for (std::size_t i = 0; i < vol; ++i) p[i] = g;
    }
    return gx;
}

// Inverted dropout; identity in eval mode.
struct DropoutMask {
    std::vector<double> scale;  // 0 or 1/(1-p) per element
};

inline std::vector<double> dropout_forward(const std::vector<double>& x, double p,
                                           std::uint64_t seed, DropoutMask& mask) {
    Rng rng(mix_seed(seed, fnv1a("dropout")));
    mask.scale.assign(x.size(), 0.0);
    std::vector<double> y(x.size());
    const double keep = 1.0 - p;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (rng.uniform() >= p) mask.scale[i] = 1.0 / keep;
        y[i] = x[i] * mask.scale[i];
    }
    return y;
}

inline std::vector<double> dropout_backward(const std::vector<double>& gy,
                                            const DropoutMask& mask) {
    std::vector<double> gx(gy.size());
    for (std::size_t i = 0; i < gy.size(); ++i) gx[i] = gy[i] * mask.scale[i];
    return gx;
}

}  // namespace c2f::nn
