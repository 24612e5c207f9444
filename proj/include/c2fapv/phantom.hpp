#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "c2fapv/common.hpp"
#include "c2fapv/rng.hpp"
#include "c2fapv/volume.hpp"

namespace c2f {

// One synthetic "organ": an axis-aligned ellipsoid with jittered pose.
struct PhantomClassSpec {
    std::array<double, 3> center_frac;  // nominal center as fraction of grid extent
    std::array<double, 3> radii_vox;    // nominal semi-axes in voxels
    double intensity_mean;
};

struct PhantomSpec {
    int num_classes = 3;
    std::array<int, 3> grid = {64, 64, 64};
    std::vector<PhantomClassSpec> classes;
    double center_jitter_vox = 3.0;
    double radius_jitter_frac = 0.15;
    double background_mean = 0.20;
    double noise_amplitude = 0.05;
    std::array<double, 3> spacing = {1.0, 1.0, 1.0};

    // 3 intensity-separated ellipsoids in a 64^3 grid; trains in minutes.
    static PhantomSpec defaults() {
        PhantomSpec s;
        s.classes = {
            {{0.28, 0.30, 0.30}, {9.0, 7.0, 8.0}, 0.55},
            {{0.72, 0.30, 0.62}, {7.0, 8.0, 7.0}, 0.72},
            {{0.40, 0.72, 0.68}, {8.0, 8.5, 9.0}, 0.88},
        };
        return s;
    }

    void validate() const {
        if (num_classes < 1) throw ParameterError("phantom: num_classes must be >= 1");
        if (num_classes > 255) throw ParameterError("phantom: num_classes exceeds uint8 labels");
        if (int(classes.size()) != num_classes)
            throw ParameterError("phantom: classes size must equal num_classes");
        for (int d : grid)
            if (d < 1) throw ParameterError("phantom: grid dims must be >= 1");
        if (center_jitter_vox < 0 || radius_jitter_frac < 0 || noise_amplitude < 0)
            throw ParameterError("phantom: jitter/noise must be >= 0");

        // worst-case axis-aligned bounds per class
        std::vector<std::array<double, 6>> bounds;  // xlo,xhi,ylo,yhi,zlo,zhi
        for (const auto& c : classes) {
            std::array<double, 6> b{};
            for (int a = 0; a < 3; ++a) {
                double ctr = c.center_frac[std::size_t(a)] * (grid[std::size_t(a)] - 1);
                double ext = c.radii_vox[std::size_t(a)] * (1.0 + radius_jitter_frac) +
                             center_jitter_vox;
                b[std::size_t(2 * a)] = ctr - ext;
                b[std::size_t(2 * a + 1)] = ctr + ext;
                if (b[std::size_t(2 * a)] < -0.5 ||
                    b[std::size_t(2 * a + 1)] > grid[std::size_t(a)] - 0.5)
                    throw ParameterError("phantom: class region can leave the grid at max jitter");
                if (!(c.radii_vox[std::size_t(a)] > 0))
                    throw ParameterError("phantom: radii must be > 0");
            }
            bounds.push_back(b);
        }
        for (std::size_t i = 0; i < bounds.size(); ++i)
            for (std::size_t j = i + 1; j < bounds.size(); ++j) {
                bool separated = false;
                for (int a = 0; a < 3 && !separated; ++a)
                    separated = bounds[i][std::size_t(2 * a + 1)] < bounds[j][std::size_t(2 * a)] ||
                                bounds[j][std::size_t(2 * a + 1)] < bounds[i][std::size_t(2 * a)];
                if (!separated)
                    throw ParameterError("phantom: class regions may overlap at max jitter");
            }
    }
};

// Pure function of (spec, seed): jittered ellipsoid labels plus textured
// intensities. Voxel (i,j,k) belongs to class n iff its center satisfies
// the ellipsoid inequality.
inline std::pair<CTVolume, LabelMap> synth_phantom(const PhantomSpec& spec, std::uint64_t seed,
                                                   const std::string& id = {}) {
    spec.validate();
    const int W = spec.grid[0], H = spec.grid[1], L = spec.grid[2];
    CTVolume vol(W, H, L, spec.spacing, id);
    LabelMap lab(W, H, L, spec.num_classes);

    Rng pose_rng(mix_seed(seed, fnv1a("phantom-pose")));
    std::vector<std::array<double, 3>> centers, radii;
    for (int n = 0; n < spec.num_classes; ++n) {
        const auto& c = spec.classes[std::size_t(n)];
        std::array<double, 3> ctr{}, rad{};
        for (int a = 0; a < 3; ++a)
            ctr[std::size_t(a)] = c.center_frac[std::size_t(a)] * (spec.grid[std::size_t(a)] - 1) +
                                  pose_rng.uniform(-spec.center_jitter_vox, spec.center_jitter_vox);
        for (int a = 0; a < 3; ++a)
            rad[std::size_t(a)] = c.radii_vox[std::size_t(a)] *
                                  (1.0 + pose_rng.uniform(-spec.radius_jitter_frac,
                                                          spec.radius_jitter_frac));
        centers.push_back(ctr);
        radii.push_back(rad);
    }

    for (int z = 0; z < L; ++z)
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                for (int n = 0; n < spec.num_classes; ++n) {
                    const auto& c = centers[std::size_t(n)];
                    const auto& r = radii[std::size_t(n)];
                    double dx = (x - c[0]) / r[0];
                    double dy = (y - c[1]) / r[1];
                    double dz = (z - c[2]) / r[2];
                    if (dx * dx + dy * dy + dz * dz <= 1.0) {
                        lab.grid.at(x, y, z) = std::uint8_t(n + 1);
                        break;  // regions are disjoint by spec invariant
                    }
                }
            }

    Rng noise_rng(mix_seed(seed, fnv1a("phantom-noise")));
    for (int z = 0; z < L; ++z)
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                int n = lab.grid.at(x, y, z);
                double mean = n == 0 ? spec.background_mean
                                     : spec.classes[std::size_t(n - 1)].intensity_mean;
                vol.grid.at(x, y, z) = float(mean + spec.noise_amplitude * noise_rng.normal());
            }

    return {std::move(vol), std::move(lab)};
}

}  // namespace c2f
