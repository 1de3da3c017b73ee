#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gskdet/kernel.hpp"
#include "oracles.hpp"

using namespace gskdet;

namespace {

ProblemSpec benchmark(double x, const char* g = "0") {
  return ProblemSpec::make(AnalyticExpr::parse("0.1 + 0.05*lambda"),
                           AnalyticExpr::parse("lambda - 0.1*lambda^2"),
                           AnalyticExpr::parse(g), 1.0, x, 0.0);
}

ProblemSpec free_point(double x) {
  return ProblemSpec::make(AnalyticExpr::parse("0"),
                           AnalyticExpr::parse("lambda - 0.1*lambda^2"),
                           AnalyticExpr::parse("0"), 1.0, x, 0.0);
}

}  // namespace

TEST_CASE("detect_saddle") {
  auto [l1, r1] = detect_saddle(AnalyticExpr::parse("lambda - 0.1*lambda^2"), 4.0, 1.0);
  CHECK(l1 == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(r1 == Regime::SpaceLike);
  auto [l2, r2] = detect_saddle(AnalyticExpr::parse("lambda - lambda^2"), 0.0, 1.0);
  CHECK(l2 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r2 == Regime::TimeLike);
  CHECK_THROWS_AS(detect_saddle(AnalyticExpr::parse("lambda"), 0.0, 1.0), numeric_error);
  // minimum-type stationary point rejected
  CHECK_THROWS_AS(detect_saddle(AnalyticExpr::parse("lambda^2"), 0.5, 1.0), numeric_error);
  // excluded regime lambda0 < -q
  CHECK_THROWS_AS(detect_saddle(AnalyticExpr::parse("0-lambda-0.1*lambda^2"), -4.0, 1.0),
                  numeric_error);
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(ProblemSpec::make(AnalyticExpr::parse("0.5"),
                                    AnalyticExpr::parse("lambda - 0.1*lambda^2"),
                                    AnalyticExpr::parse("0"), 1.0, 100.0, 0.0),
                  numeric_error);
  // sin(pi nu) root inside [-q,q] rejected unless nu is identically zero
  CHECK_THROWS_AS(ProblemSpec::make(AnalyticExpr::parse("0.3*lambda"),
                                    AnalyticExpr::parse("lambda - 0.1*lambda^2"),
                                    AnalyticExpr::parse("0"), 1.0, 100.0, 0.0),
                  numeric_error);
  CHECK_NOTHROW(free_point(50.0));
}

TEST_CASE("e function") {
  auto spec = benchmark(100.0);
  // x = 0 not allowed by construction; instead g == 0 makes e a pure phase
  for (double t : {-0.7, 0.2}) {
    cplx z(t, 0.0);
    CHECK(std::abs(spec.e_fn(z) * spec.einv2(z) * spec.e_fn(z) - 1.0) < 1e-13);
    CHECK(std::abs(std::abs(spec.e_fn(z)) - 1.0) < 1e-13);
  }
  // the definition at u = lambda, x = pi, lambda = 1: e = exp(-i pi/2) = -i
  cplx e = std::exp(-0.5 * iunit * pi * cplx(1.0));
  CHECK(std::abs(e - cplx(0.0, -1.0)) < 1e-15);
}

TEST_CASE("E is independent of the contour shape") {
  auto s1 = benchmark(100.0);
  s1.ce_height = 0.2;
  auto s2 = benchmark(100.0);
  s2.ce_height = 0.3;
  auto s3 = benchmark(100.0);
  s3.ce_width = s3.ce_width + 3.0;
  EEvaluator e1(s1), e2(s2), e3(s3);
  for (double t : {-0.8, -0.1, 0.6}) {
    CHECK(std::abs(e1.E(t) - e2.E(t)) < 1e-8);
    CHECK(std::abs(e1.E(t) - e3.E(t)) < 1e-8);
  }
  CHECK(e1.tail_magnitude() < std::exp(-100.0 * 0.2 * 1.2));
}

TEST_CASE("E derivative matches finite differences") {
  auto spec = benchmark(60.0);
  EEvaluator ev(spec);
  for (double t : {-0.5, 0.3}) {
    auto v = ev.E_with_derivative(t);
    double h = 1e-5;
    cplx fd = (ev.E(t + h) - ev.E(t - h)) / (2.0 * h);
    CHECK(std::abs(v.E1 - fd) <= 1e-5 * (1.0 + std::abs(fd)));
  }
}

TEST_CASE("E rejects evaluation at a cot pole") {
  auto spec = free_point(50.0);
  EEvaluator ev(spec);
  CHECK_THROWS_AS(ev.E(0.1), numeric_error);
  // the sine-weighted combination stays finite: i e f cos(pi nu)/2
  CHECK(std::abs(ev.Es(0.1)) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("V kernel properties") {
  auto spec = benchmark(40.0);
  spec.n_nodes = 64;
  EEvaluator ev(spec);
  // symmetry
  for (auto [a, b] : {std::pair{-0.6, 0.2}, {0.1, 0.7}, {-0.9, -0.3}}) {
    CHECK(std::abs(V_kernel(ev, a, b) - V_kernel(ev, b, a)) < 1e-12);
  }
  // diagonal limit vs symmetric average
  for (double t : {-0.4, 0.5}) {
    cplx diag = V_kernel(ev, t, t);
    double h = 1e-4;
    cplx avg = 0.5 * (V_kernel(ev, t, t + h) + V_kernel(ev, t, t - h));
    CHECK(std::abs(diag - avg) < 1e-6 * (1.0 + std::abs(diag)));
  }
  // nu == 0 kills the kernel
  auto fp = free_point(50.0);
  EEvaluator evf(fp);
  CHECK(std::abs(V_kernel(evf, 0.3, -0.2)) < 1e-12);
  CHECK(std::abs(V_kernel(evf, 0.3, 0.3)) < 1e-12);
}

TEST_CASE("fredholm determinant") {
  // free point: exactly 1
  auto fp = free_point(100.0);
  fp.n_nodes = 64;
  cplx d0 = fredholm_det(fp);
  CHECK(d0.real() == 1.0);
  CHECK(d0.imag() == 0.0);
  CHECK_THROWS_AS([] {
    auto s = benchmark(100.0);
    s.n_nodes = 16;
    return fredholm_det(s);
  }(), numeric_error);

  // node doubling self-convergence at the benchmark
  auto s160 = benchmark(100.0);
  s160.n_nodes = 160;
  auto s320 = benchmark(100.0);
  s320.n_nodes = 320;
  cplx a = fredholm_det(s160), b = fredholm_det(s320);
  CHECK(std::abs(a - b) < 1e-8);
  CHECK(std::abs(a) > 1e-8);  // det stays away from zero

  // contour-shape invariance
  auto sh = benchmark(100.0);
  sh.n_nodes = 160;
  sh.ce_height = 0.3;
  CHECK(std::abs(fredholm_det(sh) - a) < 1e-9);
}

TEST_CASE("log_det_sweep") {
  auto fp = free_point(80.0);
  fp.n_nodes = 64;
  auto zeros = log_det_sweep(fp, {80.0, 90.0, 100.0});
  for (cplx v : zeros) CHECK(std::abs(v) < 1e-12);

  auto spec = benchmark(100.0);
  spec.n_nodes = 128;
  auto rep = log_det_sweep(spec, {100.0, 100.0});
  CHECK(rep[0].real() == rep[1].real());
  CHECK(rep[0].imag() == rep[1].imag());

  CHECK_THROWS_AS(log_det_sweep(spec, {100.0, 90.0}), numeric_error);
  // a phase step close to pi is refused as ambiguous
  CHECK_THROWS_AS(log_det_sweep(spec, {100.0, 113.0}), numeric_error);

  // growth trend against the leading coefficient of d/dx log det
  std::vector<double> xs;
  for (double x = 200.0; x <= 240.0; x += 10.0) xs.push_back(x);
  auto spec2 = benchmark(200.0);
  spec2.n_nodes = 192;
  auto lg = log_det_sweep(spec2, xs);
  cplx slope = (lg.back() - lg.front()) / (xs.back() - xs.front());
  // a_{-1} = i int u' nu = 0.193333... i for the benchmark
  cplx am1(0.0, 0.19333333333333333);
  CHECK(std::abs(slope - am1) < 0.05 * std::abs(am1));
}
