#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "spinor/experiments.hpp"
#include "spinor/rng.hpp"
#include "spinor/spectra.hpp"

using namespace spinor;

TEST_CASE("fid synthesis samples the signal on the requested grid") {
    const Fid fid = synthesize_fid([](double t) { return cplx{t, -2.0 * t}; }, 0.5, 0.25, 4);
    REQUIRE(fid.size() == 4);
    CHECK(fid.t0 == 0.5);
    CHECK(fid.dt == 0.25);
    CHECK(fid.samples[0] == cplx{0.5, -1.0});
    CHECK(fid.samples[3] == cplx{1.25, -2.5});
    CHECK(fid.time_at(3) == 1.25);
    CHECK(fid.duration() == 1.0);
}

TEST_CASE("sampling rejects content beyond the resolvable band") {
    auto one = [](double) { return cplx{1.0, 0.0}; };
    CHECK_THROWS_AS(synthesize_fid(one, 0.0, 1e-3, 16, 600.0), NyquistViolation);
    CHECK_NOTHROW(synthesize_fid(one, 0.0, 1e-3, 16, 400.0));
}

TEST_CASE("negative-phase tone lands at the negative bin") {
    const double f0 = 100.0;
    const std::size_t n = 64;
    const double dt = 1.0 / (64.0 * 25.0);  // df = 25 Hz, f0 = bin 4
    const Fid fid = synthesize_fid(
        [f0](double t) { return std::polar(1.0, -2.0 * pi * f0 * t); }, 0.0, dt, n);
    const Spectrum spec = spectrum_of(fid, SpectrumConvention::full_complex);

    const std::size_t neg = bin_of_frequency(spec, -f0);
    CHECK(spec.freqs_hz[neg] == Catch::Approx(-f0).margin(1e-9));
    CHECK(std::abs(spec.amps[neg] - cplx{1.0, 0.0}) < 1e-12);
    const std::size_t pos = bin_of_frequency(spec, f0);
    CHECK(std::abs(spec.amps[pos]) < 1e-12);

    // frequencies ascend through zero
    CHECK(spec.freqs_hz.front() < 0.0);
    CHECK(spec.freqs_hz.back() > 0.0);
    for (std::size_t i = 1; i < spec.size(); ++i)
        CHECK(spec.freqs_hz[i] > spec.freqs_hz[i - 1]);
}

TEST_CASE("direct and radix-2 transforms agree") {
    const CounterRng rng(41);
    std::vector<cplx> x(1024);
    for (std::size_t k = 0; k < x.size(); ++k)
        x[k] = cplx{rng.uniform(2 * k, -1.0, 1.0), rng.uniform(2 * k + 1, -1.0, 1.0)};
    const std::vector<cplx> a = detail::dft_direct(x);
    const std::vector<cplx> b = detail::fft_radix2(x);
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    CHECK(worst < 1e-9);
}

TEST_CASE("non-power-of-two lengths fall back to the direct transform") {
    const CounterRng rng(42);
    std::vector<cplx> x(96);
    for (std::size_t k = 0; k < x.size(); ++k)
        x[k] = cplx{rng.uniform(2 * k, -1.0, 1.0), rng.uniform(2 * k + 1, -1.0, 1.0)};
    Fid fid;
    fid.dt = 1e-3;
    fid.samples = x;
    const Spectrum spec = spectrum_of(fid);
    CHECK(spec.size() == 96);
    CHECK(parseval_relative_gap(fid, spec) < 1e-12);
}

TEST_CASE("energy is preserved under both conventions") {
    const CounterRng rng(43);
    Fid fid;
    fid.dt = 2e-4;
    fid.samples.resize(256);
    for (std::size_t k = 0; k < fid.samples.size(); ++k)
        fid.samples[k] =
            cplx{rng.uniform(2 * k, -1.0, 1.0), rng.uniform(2 * k + 1, -1.0, 1.0)};
    CHECK(parseval_relative_gap(fid, spectrum_of(fid, SpectrumConvention::full_complex)) <
          1e-12);
    CHECK(parseval_relative_gap(fid, spectrum_of(fid, SpectrumConvention::folded)) < 1e-12);
}

TEST_CASE("folded convention combines mirror bins root-sum-square") {
    const double f0 = 50.0;
    const std::size_t n = 128;
    const double dt = 1.0 / (128.0 * 10.0);
    // cosine splits between +f0 and -f0; folding recombines them
    const Fid fid = synthesize_fid(
        [f0](double t) { return cplx{std::cos(2.0 * pi * f0 * t), 0.0}; }, 0.0, dt, n);
    const Spectrum folded = spectrum_of(fid, SpectrumConvention::folded);
    const std::size_t j = bin_of_frequency(folded, f0);
    CHECK(folded.freqs_hz[j] == Catch::Approx(f0).margin(1e-9));
    // each mirror bin holds 1/2; hypot(0.5, 0.5) = sqrt(0.5)
    CHECK(std::abs(folded.amps[j].real() - std::sqrt(0.5)) < 1e-12);
    CHECK(folded.freqs_hz.front() == 0.0);
    for (double f : folded.freqs_hz) CHECK(f >= 0.0);
}

TEST_CASE("peak finding returns local maxima sorted by magnitude") {
    const std::size_t n = 256;
    const double dt = 1.0 / 1280.0;  // df = 5 Hz, both tones on exact bins
    const Fid fid = synthesize_fid(
        [](double t) {
            return std::polar(0.3, -2.0 * pi * 40.0 * t) +
                   std::polar(1.0, -2.0 * pi * 110.0 * t);
        },
        0.0, dt, n);
    const Spectrum spec = spectrum_of(fid);
    const std::vector<Peak> peaks = find_peaks(spec);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].freq_hz == Catch::Approx(-110.0).margin(1e-9));
    CHECK(peaks[0].magnitude == Catch::Approx(1.0).margin(1e-9));
    CHECK(peaks[1].freq_hz == Catch::Approx(-40.0).margin(1e-9));
    CHECK(peaks[1].magnitude == Catch::Approx(0.3).margin(1e-9));
}

TEST_CASE("low-field experiment: two opposite lines in ratio one") {
    const ExperimentReport r = run_low_field_experiment();
    for (const std::string& line : r.checks) INFO(line);
    CHECK(r.passed);
    bool saw_ratio = false;
    for (const ExperimentMetric& m : r.metrics) {
        if (m.name == "magnitude_ratio") {
            saw_ratio = true;
            CHECK(m.value == Catch::Approx(1.0).margin(1e-9));
        }
    }
    CHECK(saw_ratio);
}

TEST_CASE("pulse calibration experiment peaks at the quarter turn") {
    const ExperimentReport r = run_pulse_calibration_experiment();
    for (const std::string& line : r.checks) INFO(line);
    CHECK(r.passed);
}

TEST_CASE("triplet experiment weighs the lines 1:2:1") {
    const ExperimentReport r = run_ethanol_triplet_experiment();
    for (const std::string& line : r.checks) INFO(line);
    CHECK(r.passed);
}

TEST_CASE("noise experiment flips sign against the driven reference") {
    const ExperimentReport r = run_spin_noise_sign_experiment();
    for (const std::string& line : r.checks) INFO(line);
    CHECK(r.passed);
}

TEST_CASE("all experiments run concurrently with stable order") {
    const std::vector<ExperimentReport> rs = run_all_experiments(true);
    REQUIRE(rs.size() == 4);
    CHECK(rs[0].name == "low_field");
    CHECK(rs[1].name == "pulse_calibration");
    CHECK(rs[2].name == "ethanol_triplet");
    CHECK(rs[3].name == "spin_noise_sign");
    for (const ExperimentReport& r : rs) CHECK(r.passed);
}
