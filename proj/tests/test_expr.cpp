#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gskdet/expr.hpp"

using namespace gskdet;

TEST_CASE("parse and evaluate basics") {
  CHECK(AnalyticExpr::parse("lambda^2")(cplx(2.0)).real() == doctest::Approx(4.0));
  CHECK(std::abs(AnalyticExpr::parse("sin(lambda)")(cplx(0.0))) < 1e-15);
  CHECK(AnalyticExpr::parse("lambda - 0.1*lambda^2")(cplx(5.0)).real() ==
        doctest::Approx(2.5).epsilon(1e-14));
  // complex literal
  cplx v = AnalyticExpr::parse("(1.5,-2)*lambda")(cplx(0.0, 1.0));
  CHECK(v.real() == doctest::Approx(2.0));
  CHECK(v.imag() == doctest::Approx(1.5));
  // precedence and unary minus
  CHECK(AnalyticExpr::parse("-lambda^2 + 2*3")(cplx(2.0)).real() == doctest::Approx(2.0));
}

TEST_CASE("parse errors carry byte offsets") {
  CHECK_THROWS_AS(AnalyticExpr::parse("2*^lambda"), parse_error);
  try {
    AnalyticExpr::parse("2*^lambda");
  } catch (const parse_error& e) {
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(AnalyticExpr::parse("foo(lambda)"), parse_error);
  CHECK_THROWS_AS(AnalyticExpr::parse("lambda^2.5"), parse_error);
  CHECK_THROWS_AS(AnalyticExpr::parse("lambda + "), parse_error);
}

TEST_CASE("evaluation errors are reported") {
  AnalyticExpr pole = AnalyticExpr::parse("1/(lambda-1)");
  CHECK_THROWS_AS(pole(cplx(1.0)), eval_error);
  AnalyticExpr lg = AnalyticExpr::parse("log(lambda)");
  CHECK_THROWS_AS(lg(cplx(0.0)), eval_error);
}

TEST_CASE("exact derivatives") {
  CHECK(AnalyticExpr::parse("lambda^3").derivative(1)(cplx(2.0)).real() ==
        doctest::Approx(12.0));
  CHECK(AnalyticExpr::parse("lambda - 0.1*lambda^2").derivative(2)(cplx(1.7, 0.4)).real() ==
        doctest::Approx(-0.2).epsilon(1e-14));
  CHECK(AnalyticExpr::parse("sin(lambda)").derivative(1)(cplx(pi)).real() ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(AnalyticExpr::parse("exp(lambda)").derivative(1)(cplx(0.0)).real() ==
        doctest::Approx(1.0));
}

namespace {

// 4-point centered difference, step 1e-4
cplx fd4(const AnalyticExpr& f, cplx z) {
  const double h = 1e-4;
  return (-f(z + 2 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2 * h)) / (12.0 * h);
}

std::string random_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, depth <= 0 ? 2 : 9);
  std::uniform_real_distribution<double> num(-3.0, 3.0);
  switch (kind(rng)) {
    case 0: return "lambda";
    case 1: case 2: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", num(rng));
      return buf;
    }
    case 3: return "(" + random_expr(rng, depth - 1) + "+" + random_expr(rng, depth - 1) + ")";
    case 4: return "(" + random_expr(rng, depth - 1) + "-" + random_expr(rng, depth - 1) + ")";
    case 5: return "(" + random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1) + ")";
    case 6: return "sin(" + random_expr(rng, depth - 1) + ")";
    case 7: return "cos(" + random_expr(rng, depth - 1) + ")";
    case 8: return "(" + random_expr(rng, depth - 1) + ")^2";
    default: return "exp(0.3*" + random_expr(rng, depth - 1) + ")";
  }
}

}  // namespace

TEST_CASE("derivative matches finite differences on random points") {
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> re(-1.5, 1.5), im(-1.5, 1.5);
  const char* builtins[] = {"exp(lambda)", "sin(lambda)", "cos(lambda)",
                            "log(lambda+5)", "lambda^3", "1/(lambda+4)"};
  for (const char* text : builtins) {
    AnalyticExpr f = AnalyticExpr::parse(text);
    AnalyticExpr d = f.derivative(1);
    for (int k = 0; k < 20; ++k) {
      cplx z(re(rng), im(rng));
      cplx fd = fd4(f, z);
      CHECK(std::abs(d(z) - fd) <= 1e-6 * (1.0 + std::abs(fd)));
    }
  }
}

TEST_CASE("print/parse round trip is evaluation-equivalent") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> re(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    std::string text = random_expr(rng, 6);
    AnalyticExpr f = AnalyticExpr::parse(text);
    AnalyticExpr g = AnalyticExpr::parse(f.to_string());
    for (int j = 0; j < 5; ++j) {
      cplx z(re(rng), re(rng));
      CHECK(std::abs(f(z) - g(z)) <= 1e-12 * (1.0 + std::abs(f(z))));
    }
  }
}

TEST_CASE("evaluation is deterministic") {
  AnalyticExpr f = AnalyticExpr::parse("exp(sin(lambda)*cos(lambda) - 0.25*lambda^3)");
  cplx z(0.7, -0.3);
  cplx a = f(z), b = f(z);
  CHECK(a.real() == b.real());
  CHECK(a.imag() == b.imag());
}
