#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "ssep/matrix.hpp"

namespace ssep {

// Strictly increasing set of 0-based indices inside [0, ambient_dim).
struct IndexSet {
    std::vector<int> indices;
    int ambient_dim = 0;
};

inline IndexSet make_index_set(std::vector<int> indices, int ambient_dim) {
    if (ambient_dim <= 0) throw Error("make_index_set: ambient dimension must be positive");
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw Error("make_index_set: duplicate index");
    if (!indices.empty() && (indices.front() < 0 || indices.back() >= ambient_dim))
        throw OutOfRange("make_index_set: index outside [0, ambient_dim)");
    return {std::move(indices), ambient_dim};
}

/// Indices of the k largest-magnitude entries; ties broken by lowest index.
inline IndexSet supp_k(const Vector& x, int k) {
    const int n = static_cast<int>(x.size());
    if (k < 0 || k > n) throw KTooLarge("supp_k: k = " + std::to_string(k) + " exceeds length " +
                                        std::to_string(n));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&x](int a, int b) { return std::abs(x(a)) > std::abs(x(b)); });
    std::vector<int> sel(order.begin(), order.begin() + k);
    std::sort(sel.begin(), sel.end());
    return {std::move(sel), n};
}

/// l1 error of the best k-term approximation: the magnitude mass outside supp_k.
inline double sigma_k(const Vector& x, int k) {
    const IndexSet s = supp_k(x, k);
    double tail = 0.0;
    int cursor = 0;
    for (int i = 0; i < s.ambient_dim; ++i) {
        if (cursor < static_cast<int>(s.indices.size()) && s.indices[cursor] == i) {
            ++cursor;
            continue;
        }
        tail += std::abs(x(i));
    }
    return tail;
}

/// Keep entries indexed by s, zero the rest.
inline Vector project_support(const Vector& x, const IndexSet& s) {
    if (static_cast<int>(x.size()) != s.ambient_dim)
        throw DimensionMismatch("project_support: vector length " + std::to_string(x.size()) +
                                " vs ambient " + std::to_string(s.ambient_dim));
    Vector out = Vector::Zero(x.size());
    for (int i : s.indices) out(i) = x(i);
    return out;
}

inline IndexSet complement(const IndexSet& s) {
    std::vector<int> out;
    out.reserve(s.ambient_dim - s.indices.size());
    int cursor = 0;
    for (int i = 0; i < s.ambient_dim; ++i) {
        if (cursor < static_cast<int>(s.indices.size()) && s.indices[cursor] == i) {
            ++cursor;
            continue;
        }
        out.push_back(i);
    }
    return {std::move(out), s.ambient_dim};
}

/// Shift every index by n into a set with the given new ambient dimension.
inline IndexSet shift_set(const IndexSet& s, int n, int new_ambient_dim) {
    if (new_ambient_dim <= 0) throw Error("shift_set: ambient dimension must be positive");
    std::vector<int> out;
    out.reserve(s.indices.size());
    for (int i : s.indices) {
        const int j = i + n;
        if (j < 0 || j >= new_ambient_dim)
            throw OutOfRange("shift_set: shifted index " + std::to_string(j) +
                             " outside [0, " + std::to_string(new_ambient_dim) + ")");
        out.push_back(j);
    }
    return {std::move(out), new_ambient_dim};
}

}  // namespace ssep
