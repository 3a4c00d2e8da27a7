#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace bts {

enum class SpectrumKind { eigenvalues, singular_values };

/// Where a spectrum came from; purely descriptive.
struct SpectrumSource {
    std::size_t n = 0;
    std::size_t k = 0;
    std::string role;
};

/// Lexicographic (Re, Im) order used for every sorted view.
inline bool lex_less(const std::complex<double>& a, const std::complex<double>& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

/// Multiset of eigenvalues or singular values.
struct Spectrum {
    std::vector<std::complex<double>> values;
    SpectrumKind kind = SpectrumKind::eigenvalues;
    SpectrumSource source;

    std::size_t size() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }

    Spectrum sorted() const {
        Spectrum out = *this;
        std::sort(out.values.begin(), out.values.end(), lex_less);
        return out;
    }

    /// Real parts in ascending order.
    std::vector<double> sorted_real_parts() const {
        std::vector<double> re(values.size());
        std::transform(values.begin(), values.end(), re.begin(), [](const auto& v) { return v.real(); });
        std::sort(re.begin(), re.end());
        return re;
    }

    double max_abs_imag() const {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
        return m;
    }
};

}  // namespace bts
