#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "spinor/constants.hpp"
#include "spinor/errors.hpp"

namespace spinor {

/// Uniformly sampled complex time-domain signal. Sample k sits at t0 + k dt.
struct Fid {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<cplx> samples;

    [[nodiscard]] std::size_t size() const { return samples.size(); }
    [[nodiscard]] double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    [[nodiscard]] double duration() const { return static_cast<double>(samples.size()) * dt; }
};

/// Sample a signal function on a uniform grid. If max_abs_freq_hz is positive
/// it is treated as the highest frequency present and checked against the
/// complex-sampling limit |f| < 1/(2 dt).
[[nodiscard]] inline Fid synthesize_fid(const std::function<cplx(double)>& signal, double t0,
                                        double dt, std::size_t n,
                                        double max_abs_freq_hz = 0.0) {
    if (!(dt > 0.0) || !is_finite(dt)) throw Error("synthesize_fid: dt must be positive");
    if (n == 0) throw Error("synthesize_fid: need at least one sample");
    if (max_abs_freq_hz > 0.0 && max_abs_freq_hz >= 0.5 / dt)
        throw NyquistViolation("synthesize_fid: sample spacing too coarse for signal content");
    Fid fid;
    fid.t0 = t0;
    fid.dt = dt;
    fid.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx v = signal(fid.time_at(k));
        if (!is_finite(v)) throw Error("synthesize_fid: signal returned non-finite sample");
        fid.samples[k] = v;
    }
    return fid;
}

/// full_complex keeps the signed frequency axis of complex sampling
/// (ascending, negative half first). folded keeps only |f| with
/// root-sum-square magnitudes, for magnitude-only reports.
enum class SpectrumConvention { full_complex, folded };

/// Discrete spectrum. amps are DFT coefficients divided by the sample count,
/// so a unit tone e^{-i 2 pi f t} aligned with a bin has amplitude 1 there
/// (at -f under full_complex, at +f under folded).
struct Spectrum {
    SpectrumConvention convention = SpectrumConvention::full_complex;
    std::size_t n_time = 0;  ///< sample count of the originating signal
    std::vector<double> freqs_hz;
    std::vector<cplx> amps;

    [[nodiscard]] std::size_t size() const { return freqs_hz.size(); }
};

namespace detail {

constexpr std::size_t max_direct_dft = 4096;

/// Direct O(n^2) transform, X_m = sum_k x_k e^{-i 2 pi m k / n}.
[[nodiscard]] inline std::vector<cplx> dft_direct(const std::vector<cplx>& x) {
    const std::size_t n = x.size();
    if (n > max_direct_dft) throw Error("dft_direct: too many samples for the direct transform");
    std::vector<cplx> out(n, cplx{0.0, 0.0});
    const double step = -2.0 * pi / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            // reduce m*k mod n before the trig call to keep the angle small
            const std::size_t mk = (m * k) % n;
            acc += x[k] * std::polar(1.0, step * static_cast<double>(mk));
        }
        out[m] = acc;
    }
    return out;
}

/// Iterative radix-2 transform; n must be a power of two.
[[nodiscard]] inline std::vector<cplx> fft_radix2(std::vector<cplx> x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0) throw Error("fft_radix2: sample count must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * pi / static_cast<double>(len);
        const cplx wlen = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = x[i + k];
                const cplx v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    return x;
}

[[nodiscard]] inline std::vector<cplx> dft_any(const std::vector<cplx>& x) {
    const std::size_t n = x.size();
    if (n != 0 && (n & (n - 1)) == 0) return fft_radix2(x);
    return dft_direct(x);
}

}  // namespace detail

/// Transform a FID into a spectrum under the requested convention.
[[nodiscard]] inline Spectrum spectrum_of(const Fid& fid,
                                          SpectrumConvention convention =
                                              SpectrumConvention::full_complex) {
    const std::size_t n = fid.size();
    if (n == 0) throw Error("spectrum_of: empty signal");
    if (!(fid.dt > 0.0)) throw Error("spectrum_of: FID has no valid sample spacing");
    const std::vector<cplx> coeffs = detail::dft_any(fid.samples);
    const double df = 1.0 / (static_cast<double>(n) * fid.dt);
    const double inv_n = 1.0 / static_cast<double>(n);

    Spectrum spec;
    spec.convention = convention;
    spec.n_time = n;
    if (convention == SpectrumConvention::full_complex) {
        const std::ptrdiff_t lo = -static_cast<std::ptrdiff_t>(n / 2);
        spec.freqs_hz.resize(n);
        spec.amps.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::ptrdiff_t m_signed = lo + static_cast<std::ptrdiff_t>(i);
            const std::size_t m = static_cast<std::size_t>(
                (m_signed + static_cast<std::ptrdiff_t>(n)) % static_cast<std::ptrdiff_t>(n));
            spec.freqs_hz[i] = static_cast<double>(m_signed) * df;
            spec.amps[i] = coeffs[m] * inv_n;
        }
    } else {
        const std::size_t half = n / 2;
        spec.freqs_hz.resize(half + 1);
        spec.amps.resize(half + 1);
        for (std::size_t j = 0; j <= half; ++j) {
            spec.freqs_hz[j] = static_cast<double>(j) * df;
            const std::size_t mirror = (n - j) % n;
            double mag;
            if (j == 0 || j == mirror) {
                mag = std::abs(coeffs[j]) * inv_n;
            } else {
                mag = std::hypot(std::abs(coeffs[j]), std::abs(coeffs[mirror])) * inv_n;
            }
            spec.amps[j] = cplx{mag, 0.0};
        }
    }
    return spec;
}

/// |sum |x_k|^2 - n sum |amp|^2| / max(sum |x_k|^2, tiny). Both conventions
/// preserve the energy identity exactly up to rounding.
[[nodiscard]] inline double parseval_relative_gap(const Fid& fid, const Spectrum& spec) {
    double e_time = 0.0;
    for (const cplx& v : fid.samples) e_time += std::norm(v);
    double e_freq = 0.0;
    for (const cplx& a : spec.amps) e_freq += std::norm(a);
    e_freq *= static_cast<double>(spec.n_time);
    return std::abs(e_time - e_freq) / std::max(e_time, 1e-300);
}

struct Peak {
    std::size_t index = 0;
    double freq_hz = 0.0;
    cplx amp{0.0, 0.0};
    double magnitude = 0.0;
};

/// Local maxima of |amp| above rel_threshold times the global maximum,
/// sorted by descending magnitude. Edge bins count as maxima when they top
/// their single neighbor.
[[nodiscard]] inline std::vector<Peak> find_peaks(const Spectrum& spec,
                                                  double rel_threshold = 1e-3) {
    const std::size_t n = spec.size();
    std::vector<Peak> peaks;
    if (n == 0) return peaks;
    double max_mag = 0.0;
    for (const cplx& a : spec.amps) max_mag = std::max(max_mag, std::abs(a));
    if (max_mag == 0.0) return peaks;
    const double floor_mag = rel_threshold * max_mag;
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = std::abs(spec.amps[i]);
        if (mag < floor_mag) continue;
        const double left = (i > 0) ? std::abs(spec.amps[i - 1]) : -1.0;
        const double right = (i + 1 < n) ? std::abs(spec.amps[i + 1]) : -1.0;
        if (mag > left && mag > right) {
            peaks.push_back(Peak{i, spec.freqs_hz[i], spec.amps[i], mag});
        }
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.magnitude > b.magnitude; });
    return peaks;
}

/// Nearest bin to a target frequency.
[[nodiscard]] inline std::size_t bin_of_frequency(const Spectrum& spec, double freq_hz) {
    if (spec.size() == 0) throw Error("bin_of_frequency: empty spectrum");
    std::size_t best = 0;
    double best_gap = std::abs(spec.freqs_hz[0] - freq_hz);
    for (std::size_t i = 1; i < spec.size(); ++i) {
        const double gap = std::abs(spec.freqs_hz[i] - freq_hz);
        if (gap < best_gap) {
            best = i;
            best_gap = gap;
        }
    }
    return best;
}

}  // namespace spinor
