#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "magneto/expr.hpp"

using namespace magneto;

TEST_CASE("precedence and unary minus") {
    auto e = Expression::parse("2 + 3*4^2 - -1");
    CHECK(e.eval({}) == doctest::Approx(51.0));
    CHECK(Expression::parse("-2^2").eval({}) == doctest::Approx(-4.0));
    CHECK(Expression::parse("2^-1").eval({}) == doctest::Approx(0.5));
    CHECK(Expression::parse("2^3^2").eval({}) == doctest::Approx(512.0));  // right assoc
}

TEST_CASE("variables and functions") {
    ExprEnv env;
    env.r = 0.5;
    env.q1 = 0.3;
    env.q2 = -0.4;
    CHECK(Expression::parse("exp(-r) - 2/r").eval(env) ==
          doctest::Approx(std::exp(-0.5) - 4.0).epsilon(1e-15));
    CHECK(Expression::parse("sqrt(q1^2 + q2^2)").eval(env) ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK(Expression::parse("arcsin(q2)").eval(env) ==
          doctest::Approx(std::asin(-0.4)).epsilon(1e-15));
    CHECK(Expression::parse("pi").eval({}) == doctest::Approx(pi));
}

TEST_CASE("figure caption formulas parse") {
    auto fig1 = Expression::parse(
        "1/(1-sqrt(q1^2+q2^2)) + sin(arcsin(q2)/(1-sqrt(q1^2+q2^2))) + 5*q1^3 - 7*q2");
    CHECK(fig1.eval({}) == doctest::Approx(1.0));  // at the origin
    CHECK(fig1.uses("q1"));
    CHECK(!fig1.uses("r"));

    auto fig2 = Expression::parse(
        "(1/2 - sin(1/(1-sqrt(q1^2+q2^2))))/(1-sqrt(q1^2+q2^2))^2 + 10*q1 - 2*q1^2 - 10*q2^2");
    CHECK(fig2.eval({}) == doctest::Approx(0.5 - std::sin(1.0)));
}

TEST_CASE("variable usage is tracked") {
    auto e = Expression::parse("1/n + sin(s/n)");
    CHECK(e.uses("n"));
    CHECK(e.uses("s"));
    CHECK(!e.uses("q1"));
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_AS(Expression::parse("1 + bogus(2)"), ConfigError);
    CHECK_THROWS_AS(Expression::parse("1 + "), ConfigError);
    CHECK_THROWS_AS(Expression::parse("(1 + 2"), ConfigError);
    CHECK_THROWS_AS(Expression::parse("x + 1"), ConfigError);
    try {
        Expression::parse("1 + )");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
}
