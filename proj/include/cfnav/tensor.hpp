#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "cfnav/errors.hpp"

namespace cfnav::nn {

// Dense row-major tensor. Rank is 1 or 2 everywhere in this project.
template <class S>
struct TensorT {
    std::vector<int> shape;
    std::vector<S> data;

    TensorT() = default;

    static TensorT zeros(std::vector<int> shape) {
        TensorT t;
        t.shape = std::move(shape);
        t.data.assign(t.shape_numel(), S(0));
        return t;
    }

    int numel() const { return static_cast<int>(data.size()); }

    int rows() const { return shape.empty() ? 0 : shape[0]; }
    int cols() const { return shape.size() < 2 ? 1 : shape[1]; }

    S& at(int r, int c) { return data[static_cast<size_t>(r) * cols() + c]; }
    S at(int r, int c) const { return data[static_cast<size_t>(r) * cols() + c]; }

    void fill(S v) { std::fill(data.begin(), data.end(), v); }

    bool all_finite() const {
        for (S v : data)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }

    bool same_shape(const TensorT& o) const { return shape == o.shape; }

private:
    size_t shape_numel() const {
        size_t n = 1;
        for (int d : shape) n *= static_cast<size_t>(d);
        return n;
    }
};

using Tensor = TensorT<float>;

template <class S>
inline void require_shape(const TensorT<S>& t, std::vector<int> shape, const char* what) {
    if (t.shape != shape)
        throw ShapeError(std::string("shape mismatch in ") + what);
}

}  // namespace cfnav::nn
