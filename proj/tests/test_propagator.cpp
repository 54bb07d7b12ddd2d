#include <catch2/catch_amalgamated.hpp>

#include <limits>

#include "spinor/propagator.hpp"
#include "spinor/rng.hpp"
#include "spinor/state.hpp"

using namespace spinor;

namespace {

void check_close(const cplx& got, const cplx& want, double margin) {
    CHECK(std::abs(got - want) <= margin);
}

}  // namespace

TEST_CASE("free precession matches pinned reference values") {
    // reference computed independently with 64-bit arithmetic
    const ComplexMatrix u = static_propagator(2.7e8, 1e-9);
    check_close(u(0, 0), cplx{0.9909013312045479, -0.1345903110073483}, 1e-15);
    check_close(u(1, 1), std::conj(u(0, 0)), 0.0);
    CHECK(u(0, 1) == cplx{0.0, 0.0});
    CHECK(u(1, 0) == cplx{0.0, 0.0});
}

TEST_CASE("full-field propagator matches pinned reference values") {
    FieldParams p;
    p.omega_x = 300.0;
    p.omega_y = 400.0;
    p.omega_z = 1e5;
    p.k_rest = 50.0;
    const ComplexMatrix u = general_propagator(p, 1e-4).product();
    check_close(u(0, 0), cplx{2.861262458880739e-01, 9.581783739721752e-01}, 1e-13);
    check_close(u(0, 1), cplx{3.843941076853527e-03, 3.346518046057283e-03}, 1e-13);
    check_close(u(1, 0), cplx{-3.827160507178925e-03, 3.365695839971112e-03}, 1e-13);
    check_close(u(1, 1), cplx{2.813317974096154e-01, -9.595970220359378e-01}, 1e-13);
}

TEST_CASE("factor structure: diagonal phase times unit-determinant rotation") {
    const CounterRng rng(11);
    std::uint64_t k = 0;
    for (int i = 0; i < 25; ++i) {
        FieldParams p;
        p.omega_x = rng.uniform(k++, -1e4, 1e4);
        p.omega_y = rng.uniform(k++, -1e4, 1e4);
        p.omega_z = rng.uniform(k++, -1e5, 1e5);
        p.k_rest = rng.uniform(k++, -1e3, 1e3);
        const double t = rng.uniform(k++, 0.0, 1e-3);
        const EvolutionPair u = general_propagator(p, t);

        CHECK(u.e_part(0, 1) == cplx{0.0, 0.0});
        CHECK(u.e_part(1, 0) == cplx{0.0, 0.0});
        CHECK(std::abs(u.r_part.det2() - cplx{1.0, 0.0}) < 1e-13);
        CHECK(u.product().unitary_deviation() < 1e-13);
        CHECK(u.product().max_abs_diff(u.e_part * u.r_part) == 0.0);
    }
}

TEST_CASE("resonant drive rotates about x in the co-rotating factor") {
    const double w0 = 2.0 * pi * 4.2e5;
    const double w1 = 2.0 * pi * 900.0;
    const double t = 3.7e-4;
    const EvolutionPair u = rf_propagator(w0, w0, w1, t);
    const double c = std::cos(0.5 * w1 * t);
    const double s = std::sin(0.5 * w1 * t);
    check_close(u.r_part(0, 0), cplx{c, 0.0}, 1e-15);
    check_close(u.r_part(0, 1), cplx{0.0, -s}, 1e-15);
    check_close(u.r_part(1, 0), cplx{0.0, -s}, 1e-15);
    check_close(u.r_part(1, 1), cplx{c, 0.0}, 1e-15);
    // the diagonal factor carries the carrier phase
    check_close(u.e_part(0, 0), std::polar(1.0, -0.5 * w0 * t), 1e-15);
}

TEST_CASE("zero drive amplitude reduces to free precession") {
    const CounterRng rng(12);
    for (std::uint64_t k = 0; k < 20; ++k) {
        const double w0 = rng.uniform(4 * k, -1e6, 1e6);
        const double omega = rng.uniform(4 * k + 1, -1e6, 1e6);
        const double t = rng.uniform(4 * k + 2, 0.0, 1e-3);
        const EvolutionPair u = rf_propagator(omega, w0, 0.0, t);
        CHECK(u.product().max_abs_diff(static_propagator(w0, t)) < 1e-12);
    }
}

TEST_CASE("rest coupling with zero constant reduces to free precession") {
    for (double w0 : {3.0e5, -7.5e4, 12.0}) {
        const double t = 1.7e-4;
        CHECK(rest_propagator(w0, 0.0, t).product().max_abs_diff(
                  static_propagator(w0, t)) < 1e-15);
    }
}

TEST_CASE("rest coupling agrees with the full-field builder") {
    const CounterRng rng(13);
    for (std::uint64_t k = 0; k < 20; ++k) {
        const double w0 = rng.uniform(3 * k, -1e5, 1e5);
        const double kc = rng.uniform(3 * k + 1, -1e4, 1e4);
        const double t = rng.uniform(3 * k + 2, 0.0, 1e-3);
        FieldParams p;
        p.omega_z = w0;
        p.k_rest = kc;
        CHECK(rest_propagator(w0, kc, t).product().max_abs_diff(
                  general_propagator(p, t).product()) < 1e-14);
    }
}

TEST_CASE("axis-angle rotation") {
    CHECK_THROWS_AS(rotation_matrix({0.0, 0.0, 1.1}, 0.3), NonUnitAxis);
    CHECK_THROWS_AS(rotation_matrix({1.0, 1.0, 1.0}, 0.3), NonUnitAxis);

    // z rotation is a pure phase pair
    const double th = 0.77;
    const ComplexMatrix rz = rotation_matrix({0.0, 0.0, 1.0}, th);
    check_close(rz(0, 0), std::polar(1.0, -0.5 * th), 1e-15);
    check_close(rz(1, 1), std::polar(1.0, 0.5 * th), 1e-15);
    CHECK(rz(0, 1) == cplx{0.0, 0.0});

    // x rotation by pi swaps levels up to phase
    const ComplexMatrix rx = rotation_matrix({1.0, 0.0, 0.0}, pi);
    check_close(rx(0, 1), cplx{0.0, -1.0}, 1e-15);
    check_close(rx(0, 0), cplx{0.0, 0.0}, 1e-15);

    // same-axis composition adds angles
    const std::array<double, 3> u{0.6, 0.0, 0.8};
    const ComplexMatrix a = rotation_matrix(u, 0.4);
    const ComplexMatrix b = rotation_matrix(u, 1.1);
    CHECK((b * a).max_abs_diff(rotation_matrix(u, 1.5)) < 1e-15);
    CHECK(std::abs(a.det2() - cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("drive coefficients satisfy the closure identities") {
    const CounterRng rng(14);
    for (std::uint64_t k = 0; k < 30; ++k) {
        const double a = rng.uniform(6 * k, 0.0, 1.0);
        const PolarState p(std::sqrt(1.0 - a * a), a, rng.uniform_phase(6 * k + 1),
                           rng.uniform_phase(6 * k + 2));
        const double w0 = rng.uniform(6 * k + 3, -1e5, 1e5);
        const double omega = rng.uniform(6 * k + 4, -1e5, 1e5);
        const double w1 = rng.uniform(6 * k + 5, 1e-3, 1e4);
        const RfCoefficients c = rf_coefficients(p, omega, w0, w1);

        const cplx a2 = std::polar(p.r2, p.phi2);
        const cplx a1 = std::polar(p.r1, p.phi1);
        const double big_omega = w0 - omega;
        const double delta = std::hypot(big_omega, w1);
        check_close(c.c1 + c.c2, a2, 1e-14);
        check_close(c.c3 + c.c4, a1, 1e-14);
        check_close((delta + big_omega) * c.c1 + w1 * c.c3, cplx{0.0, 0.0}, 1e-9);
        check_close((delta - big_omega) * c.c2 - w1 * c.c4, cplx{0.0, 0.0}, 1e-9);
    }
}

TEST_CASE("drive coefficients expand the propagated state") {
    const CounterRng rng(15);
    for (std::uint64_t k = 0; k < 20; ++k) {
        const double a = rng.uniform(7 * k, 0.1, 0.9);
        const PolarState p(std::sqrt(1.0 - a * a), a, rng.uniform_phase(7 * k + 1),
                           rng.uniform_phase(7 * k + 2));
        const double w0 = rng.uniform(7 * k + 3, -1e5, 1e5);
        const double omega = rng.uniform(7 * k + 4, -1e5, 1e5);
        const double w1 = rng.uniform(7 * k + 5, 1e-3, 1e4);
        const double t = rng.uniform(7 * k + 6, 0.0, 1e-3);

        const SpinState evolved = rf_propagator(omega, w0, w1, t).apply(make_state(p));

        const RfCoefficients c = rf_coefficients(p, omega, w0, w1);
        const double delta = std::hypot(w0 - omega, w1);
        const cplx up = std::polar(1.0, 0.5 * delta * t);
        const cplx dn = std::conj(up);
        const cplx x2 = std::polar(1.0, -0.5 * omega * t) * (c.c1 * up + c.c2 * dn);
        const cplx x1 = std::polar(1.0, 0.5 * omega * t) * (c.c3 * up + c.c4 * dn);
        check_close(evolved.x2, x2, 1e-13);
        check_close(evolved.x1, x1, 1e-13);
    }
}

TEST_CASE("degenerate detuning is rejected for coefficients, closed for operators") {
    const PolarState p(1.0, 0.0, 0.0, 0.0);
    CHECK_THROWS_AS(rf_coefficients(p, 5.0, 5.0, 0.0), DegenerateDelta);

    // operator side: delta = 0 leaves only the diagonal phase
    FieldParams f;
    f.omega_x = -5.0;
    f.k_rest = 5.0;
    const double t = 0.3;
    const EvolutionPair u = general_propagator(f, t);
    CHECK(u.r_part.max_abs_diff(ComplexMatrix::identity(2)) == 0.0);
    check_close(u.product()(0, 0), std::polar(1.0, -0.5 * 5.0 * t), 1e-15);
}

TEST_CASE("segment composition multiplies right to left") {
    const ComplexMatrix a = static_propagator(1e4, 1e-5);
    const ComplexMatrix b = rotation_matrix({1.0, 0.0, 0.0}, 0.5);
    const ComplexMatrix c = static_propagator(-3e4, 2e-5);
    const ComplexMatrix u = compose_segments({{a, 1e-5}, {b, 0.0}, {c, 2e-5}});
    CHECK(u.max_abs_diff(c * (b * a)) < 1e-15);

    CHECK_THROWS_AS(compose_segments({}), Error);
    CHECK_THROWS_AS(compose_segments({{a, 0.0}, {ComplexMatrix::identity(4), 0.0}}),
                    DimensionMismatch);
}

TEST_CASE("propagator inputs are validated") {
    CHECK_THROWS_AS(static_propagator(std::nan(""), 1.0), Error);
    CHECK_THROWS_AS(rf_propagator(1.0, 1.0, -2.0, 1.0), Error);
    FieldParams bad;
    bad.omega_x = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(general_propagator(bad, 1.0), Error);
}
