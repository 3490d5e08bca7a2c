#pragma once

// Brute-force dense versions of the model, written straight from the
// definitions with no shared code from the library.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace oracle {

using Bits = std::vector<std::uint8_t>;
using Dense = std::vector<std::vector<double>>;

inline std::vector<std::vector<int>> counts(const std::vector<Bits>& patterns, std::size_t n) {
    std::vector<std::vector<int>> c(n, std::vector<int>(n, 0));
    for (const auto& p : patterns) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && p[i] && p[j]) ++c[i][j];
            }
        }
    }
    return c;
}

inline Dense weights(const std::vector<Bits>& patterns, std::size_t n, double inhibitor) {
    const auto c = counts(patterns, n);
    Dense t(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            t[i][j] = c[i][j] > 0 ? static_cast<double>(c[i][j]) / static_cast<double>(n)
                                  : -inhibitor / static_cast<double>(n);
        }
    }
    return t;
}

inline double field(const Dense& t, const Bits& v, const std::vector<double>& input, std::size_t i) {
    double s = input.empty() ? 0.0 : input[i];
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (j != i) s += t[i][j] * v[j];
    }
    return s;
}

inline double energy(const Dense& t, const Bits& v, const std::vector<double>& u, const std::vector<double>& input) {
    double quad = 0.0;
    double lin = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) quad += t[i][j] * v[i] * v[j];
        lin += u[i] * v[i] - (input.empty() ? 0.0 : input[i] * v[i]);
    }
    return -0.5 * quad + lin;
}

inline bool fixed_point(const Dense& t, const Bits& v, const std::vector<double>& u) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::uint8_t next = field(t, v, {}, i) >= u[i] ? 1 : 0;
        if (next != v[i]) return false;
    }
    return true;
}

/// theta * mean over patterns of the mean in-pattern field.
inline double default_threshold(const Dense& t, const std::vector<Bits>& patterns, double theta) {
    double total = 0.0;
    int used = 0;
    for (const auto& p : patterns) {
        double s = 0.0;
        int active = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!p[i]) continue;
            s += field(t, p, {}, i);
            ++active;
        }
        if (active == 0) continue;
        total += s / active;
        ++used;
    }
    return used == 0 ? 0.0 : theta * total / used;
}

inline Bits state_bits(std::uint64_t code, std::size_t n) {
    Bits v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = (code >> i) & 1u;
    return v;
}

}  // namespace oracle
