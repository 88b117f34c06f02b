#include <doctest.h>

#include "bifix/model.hpp"
#include "support/problem_gen.hpp"

using namespace bifix;
using bifix_test::binary_problem;
using bifix_test::split_sequences;

TEST_SUITE("model") {

TEST_CASE("worked example validates") {
  const Problem p = binary_problem(0.5, {"010", "100"});
  CHECK(p.alphabet_size() == 2);
  CHECK(p.num_sequences() == 2);
  CHECK(p.sequence_length() == 3);
  CHECK(p.sequence(0) == std::vector<int>{0, 1, 0});
  CHECK(p.sequence(1) == std::vector<int>{1, 0, 0});
}

TEST_CASE("validation rejections") {
  const auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const ValidationError& e) {
      return e.code();
    }
    FAIL("expected ValidationError");
    return ValidationCode::BadDistribution;
  };

  CHECK(code_of([] { binary_problem(0.5, {"010", "10"}); }) == ValidationCode::UnequalLengths);
  CHECK(code_of([] { binary_problem(0.5, {"010", "010"}); }) == ValidationCode::DuplicateSequence);
  CHECK(code_of([] {
          Problem::validate({"0", "1"}, {0.6, 0.6}, split_sequences({"01"}));
        }) == ValidationCode::BadDistribution);
  CHECK(code_of([] {
          Problem::validate({"0", "1"}, {-0.5, 1.5}, split_sequences({"01"}));
        }) == ValidationCode::BadDistribution);
  CHECK(code_of([] {
          Problem::validate({"0", "0"}, {0.5, 0.5}, split_sequences({"00"}));
        }) == ValidationCode::BadDistribution);
  CHECK(code_of([] { binary_problem(0.5, {"012"}); }) == ValidationCode::UnknownSymbol);
  CHECK(code_of([] { binary_problem(0.5, {}); }) == ValidationCode::EmptySet);
  CHECK(code_of([] { binary_problem(0.5, {""}); }) == ValidationCode::EmptySet);
}

TEST_CASE("zero-probability sequences are unreachable") {
  // Pr{"1"} = 1: sequence "1" is reachable, no error.
  CHECK_NOTHROW(binary_problem(1.0, {"1"}));
  // Pr{"1"} = 0: the only sequence never occurs.
  CHECK_THROWS_AS(binary_problem(0.0, {"1"}), ValidationError);
  // Mixed: one reachable sequence keeps the set valid.
  CHECK_NOTHROW(binary_problem(1.0, {"1", "11"}));

  try {
    binary_problem(0.0, {"1", "11"});
    FAIL("expected UnreachableSet");
  } catch (const ValidationError& e) {
    CHECK(e.code() == ValidationCode::UnreachableSet);
  }
}

TEST_CASE("sequence probability") {
  const Problem even = binary_problem(0.5, {"010", "100"});
  CHECK(sequence_probability<double>(even, 0) == doctest::Approx(0.125).epsilon(1e-15));

  const Problem skew = binary_problem(0.3, {"010", "100"});
  CHECK(sequence_probability<double>(skew, 0) == doctest::Approx(0.147).epsilon(1e-12));
  CHECK(sequence_probability<double>(skew, 1) == doctest::Approx(0.147).epsilon(1e-12));

  const Problem exact = bifix_test::binary_problem_exact(Rational(3, 10), {"010", "100"});
  CHECK(sequence_probability<Rational>(exact, 0) == Rational(147, 1000));
  CHECK(sequence_probability<Rational>(exact, 1) == Rational(147, 1000));
}

TEST_CASE("exact probabilities derived from dyadic doubles") {
  const Problem p = binary_problem(0.5, {"10"});
  const auto exact = p.exact_probs();
  CHECK(exact[0] == Rational(1, 2));
  CHECK(exact[1] == Rational(1, 2));

  // 0.3 + 0.7 as binary doubles is not exactly 1.
  const Problem skew = binary_problem(0.3, {"10"});
  CHECK_THROWS_AS(skew.exact_probs(), ValidationError);
}

TEST_CASE("rational literal parsing") {
  CHECK(rational_from_string("3/10") == Rational(3, 10));
  CHECK(rational_from_string("0.3") == Rational(3, 10));
  CHECK(rational_from_string("-1.25e-2") == Rational(-1, 80));
  CHECK(rational_from_string("2") == Rational(2));
  CHECK(rational_from_string("1e3") == Rational(1000));
  CHECK_THROWS_AS(rational_from_string("abc"), std::invalid_argument);
  CHECK_THROWS_AS(rational_from_string("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(rational_from_string(""), std::invalid_argument);
  CHECK(format_rational(Rational(3, 10)) == "3/10");
  CHECK(format_rational(Rational(4)) == "4");
}

}  // TEST_SUITE
