#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gskdet/contour.hpp"
#include "gskdet/quadrature.hpp"
#include "oracles.hpp"

using namespace gskdet;

TEST_CASE("gauss_legendre classical values and exactness") {
  QuadratureRule r = gauss_legendre(2, -1.0, 1.0);
  CHECK(r.nodes[0].real() == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.nodes[1].real() == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.weights[0].real() == doctest::Approx(1.0).epsilon(1e-15));

  QuadratureRule r01 = gauss_legendre(2, 0.0, 1.0);
  cplx cubic = r01.integrate([](cplx z) { return z * z * z; });
  CHECK(std::abs(cubic - 0.25) < 2e-16);

  QuadratureRule r20 = gauss_legendre(20, -1.0, 1.0);
  cplx ex = r20.integrate([](cplx z) { return std::exp(z); });
  CHECK(std::abs(ex - 2.0 * std::sinh(1.0)) < 1e-14);
}

TEST_CASE("circle rule residues") {
  cplx c(0.4, -0.3);
  QuadratureRule circ = circle_rule(c, 1.0, 64, +1);
  CHECK(std::abs(circ.integrate([](cplx z) { return z; })) < 1e-14);
  CHECK(std::abs(circ.integrate([&](cplx z) { return 1.0 / (z - c); }) - 2.0 * pi * iunit) <
        1e-12);
  // residue of a derivative: e^z/(z-c)^2 -> 2 pi i e^c
  cplx d2 = circ.integrate([&](cplx z) { return std::exp(z) / ((z - c) * (z - c)); });
  CHECK(std::abs(d2 - 2.0 * pi * iunit * std::exp(c)) < 1e-12);
  // reversed orientation flips the sign
  QuadratureRule cw = circle_rule(c, 1.0, 64, -1);
  CHECK(std::abs(cw.integrate([&](cplx z) { return 1.0 / (z - c); }) + 2.0 * pi * iunit) < 1e-12);
}

TEST_CASE("build_CE geometry") {
  Contour ce = build_CE(1.0, 5.0, 12.0, 0.25);
  REQUIRE(ce.segments.size() == 3);
  const Segment& axis = ce.segments[1];
  CHECK(axis.on_axis);
  CHECK(axis.a.real() <= -1.0);
  CHECK(axis.b.real() >= 6.0);
  CHECK(ce.start().imag() == doctest::Approx(0.25));
  CHECK(ce.end().imag() == doctest::Approx(-0.25));
  // on-axis portion contains [-q, q] and the saddle
  CHECK(ce.locate_on_piece(cplx(0.3, 0.0)) == 1);
  CHECK(ce.locate_on_piece(cplx(5.0, 0.0)) == 1);
  CHECK_THROWS_AS(build_CE(1.0, 5.0, 6.0, 0.25), numeric_error);
  CHECK_THROWS_AS(build_CE(1.0, 5.0, 12.0, 0.8), numeric_error);
  // integral of zero vanishes
  KahanSum s;
  for (const Segment& seg : ce.segments) {
    QuadratureRule r = gauss_legendre_segment(32, seg.a, seg.b);
    s.add(r.integrate([](cplx) { return cplx(0.0); }));
  }
  CHECK(std::abs(s.value()) == 0.0);
}

TEST_CASE("cauchy transform on closed circles") {
  QuadratureRule circ = circle_rule(cplx(0.0), 1.0, 64, +1);
  CHECK(std::abs(cauchy_transform([](cplx) { return cplx(1.0); }, circ, cplx(0.2, 0.1)) - 1.0) <
        1e-12);
  CHECK(std::abs(cauchy_transform([](cplx) { return cplx(1.0); }, circ, cplx(2.0, 1.0))) < 1e-12);
}

TEST_CASE("cauchy boundary values on a segment") {
  Contour path;
  path.segments.push_back({cplx(-2.0, 0.0), cplx(2.0, 0.0), true});
  auto f = [](cplx z) { return std::exp(z) * std::cos(z / 2.0); };
  for (double t : {-1.2, 0.0, 0.7}) {
    cplx lam(t, 0.0);
    cplx plus = cauchy_transform_sided(f, path, lam, +1);
    cplx minus = cauchy_transform_sided(f, path, lam, -1);
    CHECK(std::abs(plus - minus - f(lam)) < 1e-9);
    // sided values agree with the Richardson-extrapolated off-path limit
    cplx c1 = cauchy_transform(f, path, lam + cplx(0.0, 0.2), 512);
    cplx c2 = cauchy_transform(f, path, lam + cplx(0.0, 0.1), 512);
    cplx c3 = cauchy_transform(f, path, lam + cplx(0.0, 0.05), 512);
    cplx extrap = (8.0 * c3 - 6.0 * c2 + c1) / 3.0;  // quadratic in eps
    CHECK(std::abs(plus - extrap) < 2e-3);
  }
}

TEST_CASE("cauchy transform against a partial-fraction closed form") {
  Contour path;
  path.segments.push_back({cplx(-2.0, 0.0), cplx(2.0, 0.0), true});
  cplx pole(0.0, 3.0);
  auto f = [&](cplx z) { return 1.0 / (z - pole); };
  cplx lam(0.5, 0.1);
  // int_{-2}^{2} ds/((s-pole)(s-lam)) = [log((2-w)/(-2-w))]-difference combo
  auto seg_log = [&](cplx w) { return std::log((cplx(2.0) - w) / (cplx(-2.0) - w)); };
  cplx closed = (seg_log(lam) - seg_log(pole)) / (lam - pole) / (2.0 * iunit * pi);
  CHECK(std::abs(cauchy_transform(f, path, lam, 512) - closed) < 1e-10);
}

TEST_CASE("principal value basics") {
  Contour path;
  path.segments.push_back({cplx(-1.0, 0.0), cplx(1.0, 0.0), true});
  // f == 1, symmetric point: PV = 0
  CHECK(std::abs(principal_value([](cplx) { return cplx(1.0); }, path, cplx(0.0))) < 1e-13);
  // f(s) = s: integrand s/(s-0) == 1, integral = length
  CHECK(std::abs(principal_value([](cplx z) { return z; }, path, cplx(0.0)) - 2.0) < 1e-13);
  // f(s) = e^s at lam = 0.3 against the Ei-based closed form
  double lam = 0.3;
  double expected = std::exp(lam) * (oracles::ei(1.0 - lam) - oracles::ei(-1.0 - lam));
  cplx got = principal_value([](cplx z) { return std::exp(z); }, path, cplx(lam), 256);
  CHECK(std::abs(got - expected) < 1e-10);
}

TEST_CASE("principal value is split-invariant") {
  auto f = [](cplx z) { return std::exp(0.7 * z) / (z - cplx(0.0, 2.0)); };
  Contour one;
  one.segments.push_back({cplx(-1.5, 0.0), cplx(1.5, 0.0), true});
  Contour two;
  two.segments.push_back({cplx(-1.5, 0.0), cplx(0.9, 0.0), true});
  two.segments.push_back({cplx(0.9, 0.0), cplx(1.5, 0.0), true});
  cplx lam(0.2, 0.0);
  CHECK(std::abs(principal_value(f, one, lam, 256) - principal_value(f, two, lam, 256)) < 1e-9);
}

TEST_CASE("node doubling changes the transform below tolerance") {
  Contour path;
  path.segments.push_back({cplx(-2.0, 0.1), cplx(1.0, -0.2), false});
  auto f = [](cplx z) { return std::sin(z) / (z + cplx(0.0, 4.0)); };
  cplx lam(0.4, 0.9);  // distance >= 0.1 from the path
  cplx a = cauchy_transform(f, path, lam, 128);
  cplx b = cauchy_transform(f, path, lam, 256);
  CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("jump difference converges spectrally on circles") {
  // C_in - C_out on a circle equals f at the boundary point (radial limits)
  cplx c(0.0, 0.0);
  auto f = [](cplx z) { return std::exp(z); };
  cplx at(1.0, 0.0);
  std::vector<double> ns = {16, 32, 64}, errs;
  for (int n : {16, 32, 64}) {
    QuadratureRule circ = circle_rule(c, 1.0, n, +1);
    cplx inner = cauchy_transform(f, circ, 0.8 * at);
    cplx outer = cauchy_transform(f, circ, 1.25 * at);
    // compare against exact interior/exterior values: C f = f inside, 0 outside
    errs.push_back(std::abs(inner - f(0.8 * at)) + std::abs(outer));
  }
  CHECK(errs[2] < errs[1]);
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < 1e-5);
}
