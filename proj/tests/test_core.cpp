#include <catch2/catch_amalgamated.hpp>

#include "spinor/matrix.hpp"
#include "spinor/rng.hpp"
#include "spinor/state.hpp"

using namespace spinor;

TEST_CASE("wrap_phase maps into (-pi, pi]") {
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(pi) == Catch::Approx(pi));
    CHECK(wrap_phase(-pi) == Catch::Approx(pi));
    CHECK(wrap_phase(3.0 * pi) == Catch::Approx(pi));
    CHECK(wrap_phase(2.0 * pi + 0.25) == Catch::Approx(0.25));
    CHECK(wrap_phase(-7.5 * pi) == Catch::Approx(0.5 * pi));
}

TEST_CASE("PolarState validates and renormalizes") {
    CHECK_THROWS_AS(PolarState(0.8, 0.8, 0.0, 0.0), NormViolation);
    CHECK_THROWS_AS(PolarState(-0.6, 0.8, 0.0, 0.0), NormViolation);
    CHECK_THROWS_AS(PolarState(std::nan(""), 1.0, 0.0, 0.0), NormViolation);

    const double r = std::sqrt(0.5);
    const PolarState p(r, r, 5.0 * pi, -0.5);
    CHECK(p.r1 * p.r1 + p.r2 * p.r2 == Catch::Approx(1.0).margin(1e-15));
    CHECK(p.phi1 == Catch::Approx(pi));
    CHECK(p.phi2 == Catch::Approx(-0.5));
}

TEST_CASE("state component order: upper amplitude first") {
    const SpinState g = ground_state();
    CHECK(g.x2 == cplx{0.0, 0.0});
    CHECK(g.x1 == cplx{1.0, 0.0});
    CHECK(g.population_lower() == 1.0);
    CHECK(g.column()[1] == cplx{1.0, 0.0});

    const SpinState e = excited_state();
    CHECK(e.population_upper() == 1.0);
    CHECK(e.column()[0] == cplx{1.0, 0.0});
}

TEST_CASE("polar and complex forms round-trip") {
    const PolarState p(0.6, 0.8, 0.3, -1.2);
    const SpinState s = make_state(p);
    CHECK(std::abs(s.x1) == Catch::Approx(0.6));
    CHECK(std::abs(s.x2) == Catch::Approx(0.8));
    CHECK(std::arg(s.x1) == Catch::Approx(0.3));
    CHECK(std::arg(s.x2) == Catch::Approx(-1.2));

    const PolarState back = to_polar(s);
    CHECK(back.r1 == Catch::Approx(p.r1));
    CHECK(back.r2 == Catch::Approx(p.r2));
    CHECK(back.phi1 == Catch::Approx(p.phi1));
    CHECK(back.phi2 == Catch::Approx(p.phi2));
}

TEST_CASE("ComplexMatrix basics") {
    const ComplexMatrix a{cplx{1.0, 0.0}, cplx{2.0, 1.0}, cplx{0.0, -3.0}, cplx{4.0, 0.0}};
    CHECK(a.dim() == 2);
    CHECK(a(0, 1) == cplx{2.0, 1.0});

    const ComplexMatrix ad = a.dagger();
    CHECK(ad(1, 0) == std::conj(a(0, 1)));
    CHECK(ad(0, 1) == std::conj(a(1, 0)));

    const ComplexMatrix eye = ComplexMatrix::identity(4);
    CHECK(eye(2, 2) == cplx{1.0, 0.0});
    CHECK(eye(0, 1) == cplx{0.0, 0.0});
    CHECK_THROWS_AS(ComplexMatrix::identity(3), DimensionMismatch);

    CHECK(a.det2() == cplx{1.0, 0.0} * cplx{4.0, 0.0} - cplx{2.0, 1.0} * cplx{0.0, -3.0});
    CHECK_THROWS_AS(ComplexMatrix(2, {cplx{1.0, 0.0}}), DimensionMismatch);
}

TEST_CASE("matrix product against a hand-computed case") {
    const ComplexMatrix a{cplx{1.0, 1.0}, cplx{2.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, -1.0}};
    const ComplexMatrix b{cplx{3.0, 0.0}, cplx{0.0, 1.0}, cplx{1.0, 0.0}, cplx{0.0, 0.0}};
    const ComplexMatrix c = a * b;
    CHECK(c(0, 0) == cplx{1.0, 1.0} * cplx{3.0, 0.0} + cplx{2.0, 0.0} * cplx{1.0, 0.0});
    CHECK(c(0, 1) == cplx{1.0, 1.0} * cplx{0.0, 1.0});
    CHECK(c(1, 0) == cplx{1.0, -1.0} * cplx{1.0, 0.0});
    CHECK(c(1, 1) == cplx{0.0, 0.0});
}

TEST_CASE("tensor product is first-factor-slow") {
    const ComplexMatrix a{cplx{1.0, 0.0}, cplx{2.0, 0.0}, cplx{3.0, 0.0}, cplx{4.0, 0.0}};
    const ComplexMatrix b{cplx{10.0, 0.0}, cplx{20.0, 0.0}, cplx{30.0, 0.0},
                          cplx{40.0, 0.0}};
    const ComplexMatrix k = tensor_product(a, b);
    REQUIRE(k.dim() == 4);
    // block (i,j) of the result is a(i,j) * b
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(k(i, j) == a(i / 2, j / 2) * b(i % 2, j % 2));

    const std::vector<cplx> va{cplx{1.0, 0.0}, cplx{2.0, 0.0}};
    const std::vector<cplx> vb{cplx{5.0, 0.0}, cplx{7.0, 0.0}};
    const std::vector<cplx> vk = tensor_product(va, vb);
    REQUIRE(vk.size() == 4);
    CHECK(vk[0] == cplx{5.0, 0.0});
    CHECK(vk[1] == cplx{7.0, 0.0});
    CHECK(vk[2] == cplx{10.0, 0.0});
    CHECK(vk[3] == cplx{14.0, 0.0});
}

TEST_CASE("pauli matrices square to identity and anticommute") {
    const ComplexMatrix x = pauli_x();
    const ComplexMatrix y = pauli_y();
    const ComplexMatrix z = pauli_z();
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    CHECK((x * x).max_abs_diff(eye) == 0.0);
    CHECK((y * y).max_abs_diff(eye) == 0.0);
    CHECK((z * z).max_abs_diff(eye) == 0.0);
    CHECK((x * y + y * x).max_abs() == 0.0);
    CHECK((x * y).max_abs_diff(cplx{0.0, 1.0} * z) == 0.0);
}

TEST_CASE("deviation metrics") {
    const ComplexMatrix h{cplx{1.0, 0.0}, cplx{2.0, 1.0}, cplx{2.0, -1.0}, cplx{-1.0, 0.0}};
    CHECK(h.hermitian_deviation() == 0.0);
    const ComplexMatrix nh{cplx{1.0, 0.0}, cplx{2.0, 1.0}, cplx{2.0, 1.0}, cplx{-1.0, 0.0}};
    CHECK(nh.hermitian_deviation() > 1.0);

    const double c = std::cos(0.3), s = std::sin(0.3);
    const ComplexMatrix u{cplx{c, 0.0}, cplx{-s, 0.0}, cplx{s, 0.0}, cplx{c, 0.0}};
    CHECK(u.unitary_deviation() < 1e-15);
    CHECK((cplx{2.0, 0.0} * u).unitary_deviation() > 1.0);
}

TEST_CASE("counter rng is deterministic and order-free") {
    const CounterRng a(42);
    const CounterRng b(42);
    const CounterRng c(43);

    // same seed, same counter: identical; different seed: different stream
    CHECK(a.uniform01(7) == b.uniform01(7));
    CHECK(a.uniform01(7) != c.uniform01(7));

    // evaluation order does not matter
    const double late = a.uniform01(1000);
    (void)a.uniform01(3);
    CHECK(a.uniform01(1000) == late);

    for (std::uint64_t k = 0; k < 2000; ++k) {
        const double u = a.uniform01(k);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }

    const double lo = 3.0, hi = 9.0;
    for (std::uint64_t k = 0; k < 500; ++k) {
        const double v = a.uniform(k, lo, hi);
        CHECK(v >= lo);
        CHECK(v <= hi);
        const double g = a.log_uniform(k, 1e-3, 1e3);
        CHECK(g >= 1e-3);
        CHECK(g <= 1e3);
        const double ph = a.uniform_phase(k);
        CHECK(ph > -pi);
        CHECK(ph <= pi);
    }
}

TEST_CASE("counter rng covers both halves of log range") {
    const CounterRng r(7);
    std::size_t low = 0;
    for (std::uint64_t k = 0; k < 4000; ++k)
        if (r.log_uniform(k, 1e-2, 1e2) < 1.0) ++low;
    // log-uniform median is the geometric mean
    CHECK(low > 1600);
    CHECK(low < 2400);
}
