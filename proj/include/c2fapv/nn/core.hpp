#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "c2fapv/common.hpp"
#include "c2fapv/rng.hpp"

namespace c2f::nn {

inline int& thread_count() {
    static int n = 0;  // 0 = library default
    return n;
}

inline void set_threads(int n) {
    thread_count() = n;
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#endif
}

struct Parameter {
    std::string name;
    std::vector<int> shape;
    std::vector<double> value;
    std::vector<double> grad;
    std::vector<double> momentum;

    std::size_t numel() const { return value.size(); }
};

// Flat registry of every learnable tensor. Layers keep stable pointers into
// it; the optimizer walks it by name prefix so each training phase can update
// its own parameter groups.
class ParamStore {
public:
    Parameter* add(const std::string& name, std::vector<int> shape) {
        std::size_t n = 1;
        for (int d : shape) n *= std::size_t(d);
        params_.push_back(Parameter{name, std::move(shape), std::vector<double>(n, 0.0),
                                    std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)});
        return &params_.back();
    }

    void zero_grad() {
        for (auto& p : params_)
            std::fill(p.grad.begin(), p.grad.end(), 0.0);
    }

    // Classic momentum SGD: buf = m*buf + g; w -= lr*buf.
    // Prefixes empty = update everything.
    void sgd_step(double lr, double momentum, const std::vector<std::string>& prefixes = {}) {
        for (auto& p : params_) {
            if (!prefixes.empty() && !matches(p.name, prefixes)) continue;
            for (std::size_t i = 0; i < p.numel(); ++i) {
                p.momentum[i] = momentum * p.momentum[i] + p.grad[i];
                p.value[i] -= lr * p.momentum[i];
            }
        }
    }

    double grad_max_abs(const std::vector<std::string>& prefixes = {}) const {
        double m = 0.0;
        for (const auto& p : params_) {
            if (!prefixes.empty() && !matches(p.name, prefixes)) continue;
            for (double g : p.grad) m = std::max(m, std::abs(g));
        }
        return m;
    }

    Parameter* find(const std::string& name) {
        for (auto& p : params_)
            if (p.name == name) return &p;
        return nullptr;
    }

    std::deque<Parameter>& all() { return params_; }
    const std::deque<Parameter>& all() const { return params_; }

    static bool matches(const std::string& name, const std::vector<std::string>& prefixes) {
        for (const auto& pre : prefixes)
            if (name.rfind(pre, 0) == 0) return true;
        return false;
    }

private:
    std::deque<Parameter> params_;  // deque: stable addresses as layers register
};

// He-style init for layers followed by ReLU, Xavier otherwise.
inline void init_normal(Parameter* p, Rng& rng, double stddev) {
    for (double& v : p->value) v = stddev * rng.normal();
}

inline void init_zero(Parameter* p) {
    std::fill(p->value.begin(), p->value.end(), 0.0);
}

}  // namespace c2f::nn
