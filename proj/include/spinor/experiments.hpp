#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <future>
#include <string>
#include <vector>

#include "spinor/constants.hpp"
#include "spinor/propagator.hpp"
#include "spinor/spectra.hpp"
#include "spinor/state.hpp"
#include "spinor/suscept.hpp"

namespace spinor {

struct ExperimentMetric {
    std::string name;
    double value = 0.0;
};

struct ExperimentReport {
    std::string name;
    bool passed = true;
    std::vector<std::string> checks;
    std::vector<ExperimentMetric> metrics;
    Fid fid;            ///< time-domain trace (or sweep profile) behind the report
    Spectrum spectrum;  ///< empty for sweep-style experiments
};

namespace detail {

inline void check(ExperimentReport& r, bool ok, const std::string& what) {
    r.checks.push_back(std::string(ok ? "ok: " : "FAIL: ") + what);
    r.passed = r.passed && ok;
}

inline void metric(ExperimentReport& r, const std::string& name, double value) {
    r.metrics.push_back(ExperimentMetric{name, value});
}

}  // namespace detail

/// Resonantly driven ensemble at low field, sampled over an integer number
/// of precession periods so both lines land on exact bins. The spectrum must
/// show exactly two lines, at the precession frequency and its double, with
/// equal magnitude and opposite sign.
[[nodiscard]] inline ExperimentReport run_low_field_experiment(
    const PhysicalConstants& c = PhysicalConstants{}) {
    ExperimentReport r;
    r.name = "low_field";

    const double f0 = 50.0;
    const double omega0 = 2.0 * pi * f0;
    const double omega_x = omega0 / 100.0;
    const double n_spins = 1.0e3;
    const double pol = 1.0e-3;
    const std::size_t periods = 16;
    const std::size_t n = 256;
    const double dt = static_cast<double>(periods) / (f0 * static_cast<double>(n));

    r.fid = synthesize_fid(
        [&](double t) { return chi_rf_closed_form(n_spins, pol, omega_x, omega0, t, c); }, 0.0,
        dt, n, 2.0 * f0);
    r.spectrum = spectrum_of(r.fid, SpectrumConvention::full_complex);

    const std::vector<Peak> peaks = find_peaks(r.spectrum);
    detail::check(r, peaks.size() == 2, "spectrum has exactly two lines");
    if (peaks.size() == 2) {
        // complex tones e^{-i omega t} land on the negative-frequency axis
        const Peak& line1 = (std::abs(peaks[0].freq_hz + f0) < std::abs(peaks[1].freq_hz + f0))
                                ? peaks[0]
                                : peaks[1];
        const Peak& line2 = (&line1 == &peaks[0]) ? peaks[1] : peaks[0];
        detail::check(r, std::abs(line1.freq_hz + f0) < 1e-9,
                      "first line sits at the precession frequency");
        detail::check(r, std::abs(line2.freq_hz + 2.0 * f0) < 1e-9,
                      "second line sits at twice the precession frequency");
        const double ratio = line1.magnitude / line2.magnitude;
        detail::check(r, std::abs(ratio - 1.0) <= 1e-9,
                      "line magnitudes agree to 1e-9 relative");
        const double cancel = std::abs(line1.amp + line2.amp) / line1.magnitude;
        detail::check(r, cancel <= 1e-9, "line amplitudes have opposite sign (sum cancels)");
        detail::metric(r, "line1_freq_hz", line1.freq_hz);
        detail::metric(r, "line2_freq_hz", line2.freq_hz);
        detail::metric(r, "magnitude_ratio", ratio);
        detail::metric(r, "signed_sum_residual", cancel);
    }
    const double pgap = parseval_relative_gap(r.fid, r.spectrum);
    detail::check(r, pgap <= 1e-9, "energy is preserved through the transform");
    detail::metric(r, "parseval_gap", pgap);
    return r;
}

/// Nutation sweep: apply a resonant pulse of variable duration to the ground
/// state and record the transverse amplitude |conj(x1) x2|. Over a half turn
/// the profile must match |sin(omega1 t)| / 2 with its single maximum at
/// omega1 t = pi/2.
[[nodiscard]] inline ExperimentReport run_pulse_calibration_experiment(
    const PhysicalConstants& = PhysicalConstants{}) {
    ExperimentReport r;
    r.name = "pulse_calibration";

    const double omega0 = 2.0 * pi * 5.0e5;
    const double omega1 = 2.0 * pi * 1.0e3;
    const std::size_t n = 1000;
    const double t_max = pi / omega1;  // half turn: one maximum in range
    const double step = t_max / static_cast<double>(n - 1);

    r.fid.t0 = 0.0;
    r.fid.dt = step;
    r.fid.samples.resize(n);
    double worst = 0.0;
    std::size_t argmax = 0;
    double best = -1.0;
    const SpinState ground = ground_state();
    for (std::size_t k = 0; k < n; ++k) {
        const double tp = static_cast<double>(k) * step;
        const SpinState out = rf_propagator(omega0, omega0, omega1, tp).apply(ground);
        const double amp = std::abs(std::conj(out.x1) * out.x2);
        const double predicted = 0.5 * std::abs(std::sin(omega1 * tp));
        worst = std::max(worst, std::abs(amp - predicted));
        if (amp > best) {
            best = amp;
            argmax = k;
        }
        r.fid.samples[k] = cplx{amp, 0.0};
    }
    detail::check(r, worst <= 1e-10, "sweep matches |sin(omega1 t)|/2 to 1e-10");
    const double t_star = static_cast<double>(argmax) * step;
    const double t_quarter = 0.5 * pi / omega1;
    detail::check(r, std::abs(t_star - t_quarter) <= step,
                  "amplitude peaks within one step of the quarter-turn duration");
    detail::check(r, best > 0.4999, "peak amplitude reaches 1/2");
    detail::metric(r, "sweep_points", static_cast<double>(n));
    detail::metric(r, "max_profile_error", worst);
    detail::metric(r, "peak_time_s", t_star);
    detail::metric(r, "peak_flip_angle_rad", omega1 * t_star);
    detail::metric(r, "peak_amplitude", best);
    return r;
}

/// Triplet from two equivalent coupled neighbors: three tones with binomial
/// weights 1:2:1, split symmetrically around the center frequency. The
/// acquisition grid puts every line on an exact bin.
[[nodiscard]] inline ExperimentReport run_ethanol_triplet_experiment(
    const PhysicalConstants& = PhysicalConstants{}) {
    ExperimentReport r;
    r.name = "ethanol_triplet";

    const double f_center = 5.0e5;
    const double f_split = 100.0;
    const std::array<double, 3> weights{0.25, 0.5, 0.25};
    const std::array<double, 3> freqs{f_center - f_split, f_center, f_center + f_split};
    const double duration = 0.1;
    const std::size_t n = std::size_t{1} << 17;
    const double dt = duration / static_cast<double>(n);

    r.fid = synthesize_fid(
        [&](double t) {
            cplx v{0.0, 0.0};
            for (std::size_t g = 0; g < 3; ++g)
                v += weights[g] * std::polar(1.0, -2.0 * pi * freqs[g] * t);
            return v;
        },
        0.0, dt, n, freqs[2]);
    r.spectrum = spectrum_of(r.fid, SpectrumConvention::full_complex);

    const std::vector<Peak> peaks = find_peaks(r.spectrum);
    detail::check(r, peaks.size() == 3, "spectrum has exactly three lines");
    if (peaks.size() == 3) {
        std::array<const Peak*, 3> ordered{&peaks[0], &peaks[1], &peaks[2]};
        std::sort(ordered.begin(), ordered.end(),
                  [](const Peak* a, const Peak* b) { return a->freq_hz < b->freq_hz; });
        detail::check(r, std::abs(ordered[1]->freq_hz + f_center) < 1e-6,
                      "center line sits at the carrier frequency");
        const double gap_lo = ordered[1]->freq_hz - ordered[0]->freq_hz;
        const double gap_hi = ordered[2]->freq_hz - ordered[1]->freq_hz;
        detail::check(r, std::abs(gap_lo - f_split) < 1e-6 && std::abs(gap_hi - f_split) < 1e-6,
                      "lines are split by the coupling frequency on both sides");
        const double mid_over_side = ordered[1]->magnitude / ordered[0]->magnitude;
        const double side_over_side = ordered[2]->magnitude / ordered[0]->magnitude;
        detail::check(r, std::abs(mid_over_side - 2.0) <= 0.04,
                      "center line is twice each side line within 2%");
        detail::check(r, std::abs(side_over_side - 1.0) <= 0.02,
                      "side lines match within 2%");
        detail::metric(r, "splitting_hz", 0.5 * (gap_lo + gap_hi));
        detail::metric(r, "mid_over_side", mid_over_side);
        detail::metric(r, "side_over_side", side_over_side);
    }
    const double pgap = parseval_relative_gap(r.fid, r.spectrum);
    detail::check(r, pgap <= 1e-9, "energy is preserved through the transform");
    detail::metric(r, "parseval_gap", pgap);
    return r;
}

/// Spin-noise signature: with no drive, a negative rest constant produces a
/// precession line whose real part is inverted against the driven reference,
/// scaled by |K| / (sqrt2 omega_x).
[[nodiscard]] inline ExperimentReport run_spin_noise_sign_experiment(
    const PhysicalConstants& c = PhysicalConstants{}) {
    ExperimentReport r;
    r.name = "spin_noise_sign";

    const double f0 = 50.0;
    const double omega0 = 2.0 * pi * f0;
    const double omega_x = omega0 / 100.0;
    const double k_rest = -std::sqrt(2.0) * omega_x * 1.0e-8;
    const double n_spins = 1.0e3;
    const double pol = 1.0e-3;
    const std::size_t periods = 16;
    const std::size_t n = 256;
    const double dt = static_cast<double>(periods) / (f0 * static_cast<double>(n));

    r.fid = synthesize_fid(
        [&](double t) { return chi_noise_closed_form(n_spins, pol, k_rest, omega0, t, c); },
        0.0, dt, n, 2.0 * f0);
    r.spectrum = spectrum_of(r.fid, SpectrumConvention::full_complex);

    Fid ref_fid = synthesize_fid(
        [&](double t) { return chi_rf_closed_form(n_spins, pol, omega_x, omega0, t, c); }, 0.0,
        dt, n, 2.0 * f0);
    const Spectrum ref_spec = spectrum_of(ref_fid, SpectrumConvention::full_complex);

    const std::size_t line_bin = bin_of_frequency(r.spectrum, -f0);
    const cplx a_noise = r.spectrum.amps[line_bin];
    const cplx a_ref = ref_spec.amps[bin_of_frequency(ref_spec, -f0)];

    detail::check(r, a_ref.real() > 0.0 && a_noise.real() < 0.0,
                  "noise line real part is inverted against the driven reference");
    const double ratio = std::abs(a_noise) / std::abs(a_ref);
    const double expected = std::abs(k_rest) / (std::sqrt(2.0) * omega_x);
    detail::check(r, std::abs(ratio / expected - 1.0) <= 1e-9,
                  "amplitude ratio equals |K| / (sqrt2 omega_x) to 1e-9 relative");
    const cplx a_noise2 = r.spectrum.amps[bin_of_frequency(r.spectrum, -2.0 * f0)];
    detail::check(r, a_noise.real() * a_noise2.real() < 0.0,
                  "noise spectrum keeps its own two-line sign structure");
    detail::metric(r, "line_real_noise", a_noise.real());
    detail::metric(r, "line_real_reference", a_ref.real());
    detail::metric(r, "amplitude_ratio", ratio);
    detail::metric(r, "expected_ratio", expected);
    return r;
}

/// All four canned experiments. With concurrent=true each runs in its own
/// async task; reports come back in a fixed order either way.
[[nodiscard]] inline std::vector<ExperimentReport> run_all_experiments(
    bool concurrent = true, const PhysicalConstants& c = PhysicalConstants{}) {
    using Runner = ExperimentReport (*)(const PhysicalConstants&);
    const std::array<Runner, 4> runners{
        &run_low_field_experiment,
        &run_pulse_calibration_experiment,
        &run_ethanol_triplet_experiment,
        &run_spin_noise_sign_experiment,
    };
    std::vector<ExperimentReport> reports;
    reports.reserve(runners.size());
    if (concurrent) {
        std::vector<std::future<ExperimentReport>> futures;
        futures.reserve(runners.size());
        for (Runner run : runners)
            futures.push_back(std::async(std::launch::async, run, c));
        for (auto& f : futures) reports.push_back(f.get());
    } else {
        for (Runner run : runners) reports.push_back(run(c));
    }
    return reports;
}

}  // namespace spinor
