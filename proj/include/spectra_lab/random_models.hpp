#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spectra_lab/cantor.hpp"
#include "spectra_lab/spectra.hpp"

namespace spectra_lab {

// Seeded generators for property suites.  The standard distributions are
// implementation-defined, so draws are mapped from the raw engine here to keep
// runs identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform integer in [lo, hi]
    long long uniform(long long lo, long long hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t x;
        do x = eng_();
        while (x >= limit);
        return lo + static_cast<long long>(x % span);
    }

    // uniform double in [0, 1)
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    std::mt19937_64 eng_;
};

// Random SFT on r symbols, no dead symbols.
inline SftSpec random_sft(Rng& rng, int r, double density = 0.6) {
    for (;;) {
        std::vector<std::vector<int>> b(r, std::vector<int>(r, 0));
        for (auto& row : b)
            for (auto& x : row) x = rng.unit() < density ? 1 : 0;
        bool ok = true;
        for (int i = 0; i < r && ok; ++i) {
            bool row = false, col = false;
            for (int j = 0; j < r; ++j) {
                row = row || b[i][j];
                col = col || b[j][i];
            }
            ok = row && col;
        }
        if (ok) return SftSpec(r, b);
    }
}

// Values k/10 with k in [1, levels] on every admissible window.
inline TablePotential random_table_potential(Rng& rng, const SftSpec& spec, int past, int future, int levels = 6) {
    TablePotential f;
    f.past = past;
    f.future = future;
    for_each_word(spec, f.window(), [&](const Word& w) { f.values[w] = Rational(rng.uniform(1, levels), 10); });
    return f;
}

inline RateTable random_rates(Rng& rng, int r, bool symmetric, double lo = 0.15, double hi = 0.6) {
    RateTable t;
    for (int i = 0; i < r; ++i) {
        t.stable.push_back(rng.uniform_real(lo, hi));
        t.unstable.push_back(symmetric ? t.stable.back() : rng.uniform_real(lo, hi));
    }
    return t;
}

// Random (SFT, table potential, rates) on 2..4 symbols; window (x_{-1}, x_0)
// or the single symbol.
inline Bundle random_bundle(Rng& rng, bool symmetric) {
    Bundle b;
    int r = static_cast<int>(rng.uniform(2, 4));
    b.sft = random_sft(rng, r, 0.7);
    int past = static_cast<int>(rng.uniform(0, 1));
    b.potential = random_table_potential(rng, b.sft, past, 0);
    b.rates = random_rates(rng, r, symmetric);
    return b;
}

// Random rational rates with k branches summing to at most 9/10.
inline std::vector<Rational> random_affine_rates(Rng& rng, int k) {
    std::vector<long long> w(k);
    long long total = 0;
    for (auto& x : w) total += (x = rng.uniform(1, 100));
    long long scale = rng.uniform(30, 90); // percent of [0,1] covered
    std::vector<Rational> rates;
    for (long long x : w) rates.push_back(Rational(x * scale, total * 100));
    return rates;
}

inline CantorSpec random_affine_spec(Rng& rng, int min_branches = 2, int max_branches = 5) {
    int k = static_cast<int>(rng.uniform(min_branches, max_branches));
    return affine_from_rates(random_affine_rates(rng, k));
}

} // namespace spectra_lab
