// Rough throughput check for the stencil kernels; not part of the test suite.
#include <chrono>
#include <cstdio>

#include "c2fapv/grid.hpp"
#include "c2fapv/nn/core.hpp"
#include "c2fapv/nn/kernels.hpp"
#include "c2fapv/rng.hpp"

using namespace c2f;

int main(int argc, char** argv) {
    int threads = argc > 1 ? std::atoi(argv[1]) : 0;
    nn::set_threads(threads);
    Rng rng(7);

    {  // 2D: 48 -> 16 channels at 64x64, roughly the coarse decoder head
        const int Cin = 48, Cout = 16, H = 64, W = 64;
        Tensor x({Cin, H, W}), w({Cout, Cin, 3, 3}), b({Cout}), y({Cout, H, W});
        for (auto& v : x.v) v = rng.normal();
        for (auto& v : w.v) v = rng.normal();
        const int reps = 200;
        auto t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r)
            nn::conv2d_forward(x.data(), Cin, H, W, w.data(), b.data(), y.data(), Cout);
        auto t1 = std::chrono::steady_clock::now();
        double sec = std::chrono::duration<double>(t1 - t0).count();
        double flops = 2.0 * Cin * Cout * 9.0 * H * W * reps;
        std::printf("conv2d fwd  %6.2f GFLOP/s (%.3f ms/call)\n", flops / sec / 1e9,
                    sec / reps * 1e3);

        Tensor gx(x.dims), gw(w.dims), gb(b.dims);
        t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r) {
            nn::conv2d_backward_data(y.data(), Cout, H, W, w.data(), gx.data(), Cin);
            nn::conv2d_backward_param(x.data(), Cin, H, W, y.data(), Cout, gw.data(),
                                      gb.data());
        }
        t1 = std::chrono::steady_clock::now();
        sec = std::chrono::duration<double>(t1 - t0).count();
        std::printf("conv2d bwd  %6.2f GFLOP/s (%.3f ms/call)\n", 2 * flops / sec / 1e9,
                    sec / reps * 1e3);
    }

    {  // 3D: 24 -> 8 channels at 32^3, roughly the fine decoder head
        const int Cin = 24, Cout = 8, D = 32, H = 32, W = 32;
        Tensor x({Cin, D, H, W}), w({Cout, Cin, 3, 3, 3}), b({Cout}), y({Cout, D, H, W});
        for (auto& v : x.v) v = rng.normal();
        for (auto& v : w.v) v = rng.normal();
        const int reps = 30;
        auto t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r)
            nn::conv3d_forward(x.data(), Cin, D, H, W, w.data(), b.data(), y.data(), Cout);
        auto t1 = std::chrono::steady_clock::now();
        double sec = std::chrono::duration<double>(t1 - t0).count();
        double flops = 2.0 * Cin * Cout * 27.0 * D * H * W * reps;
        std::printf("conv3d fwd  %6.2f GFLOP/s (%.3f ms/call)\n", flops / sec / 1e9,
                    sec / reps * 1e3);

        Tensor gx(x.dims), gw(w.dims), gb(b.dims);
        t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r) {
            nn::conv3d_backward_data(y.data(), Cout, D, H, W, w.data(), gx.data(), Cin);
            nn::conv3d_backward_param(x.data(), Cin, D, H, W, y.data(), Cout, gw.data(),
                                      gb.data());
        }
        t1 = std::chrono::steady_clock::now();
        sec = std::chrono::duration<double>(t1 - t0).count();
        std::printf("conv3d bwd  %6.2f GFLOP/s (%.3f ms/call)\n", 2 * flops / sec / 1e9,
                    sec / reps * 1e3);
    }
    return 0;
}
