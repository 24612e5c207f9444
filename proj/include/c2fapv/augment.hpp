#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "c2fapv/common.hpp"
#include "c2fapv/resample.hpp"
#include "c2fapv/rng.hpp"
#include "c2fapv/volume.hpp"

namespace c2f {

// Defaults reproduce the 6-variants-per-sample recipe: the original, three
// Gaussian-noise copies and two rescaled copies.
struct AugSpec {
    std::vector<double> noise_sigmas = {0.5, 1.0, 1.5};
    std::vector<double> rescale_factors = {0.9, 1.1};
    bool include_original = true;

    std::size_t variants_per_sample() const {
        return (include_original ? 1u : 0u) + noise_sigmas.size() + rescale_factors.size();
    }
};

// Canonical variant order: original, noise variants (sigma order, labels
// shared unchanged), rescaled variants (factor order, trilinear intensities,
// nearest-neighbor labels). Deterministic given seed.
inline std::vector<std::pair<CTVolume, LabelMap>> augment(const CTVolume& v, const LabelMap& y,
                                                          const AugSpec& spec,
                                                          std::uint64_t seed) {
    if (!(v.W() == y.W() && v.H() == y.H() && v.L() == y.L()))
        throw ParameterError("augment: volume/label shape mismatch");
    for (double f : spec.rescale_factors)
        if (!(f > 0.0)) throw ParameterError("augment: rescale factor must be > 0");

    std::vector<std::pair<CTVolume, LabelMap>> out;
    out.reserve(spec.variants_per_sample());

    if (spec.include_original) out.emplace_back(v, y);

    std::uint64_t variant = 0;
    for (double sigma : spec.noise_sigmas) {
        CTVolume nv = v;
        nv.id = v.id + "_noise" + std::to_string(sigma);
        Rng rng(mix_seed(seed, fnv1a("augment-noise"), variant++));
        for (float& f : nv.grid.data) f = float(double(f) + sigma * rng.normal());
        out.emplace_back(std::move(nv), y);
    }

    for (double factor : spec.rescale_factors) {
        int nw = std::max(1, int(std::lround(v.W() * factor)));
        int nh = std::max(1, int(std::lround(v.H() * factor)));
        int nl = std::max(1, int(std::lround(v.L() * factor)));
        CTVolume rv;
        rv.grid = resample_trilinear(v.grid, nw, nh, nl);
        rv.spacing = {v.spacing[0] * v.W() / nw, v.spacing[1] * v.H() / nh,
                      v.spacing[2] * v.L() / nl};
        rv.id = v.id + "_scale" + std::to_string(factor);
        LabelMap ry;
        ry.grid = resample_nearest(y.grid, nw, nh, nl);
        ry.num_classes = y.num_classes;
        out.emplace_back(std::move(rv), std::move(ry));
    }

    return out;
}

}  // namespace c2f
