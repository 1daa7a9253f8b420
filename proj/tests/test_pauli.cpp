#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hamforge/pauli.hpp"
#include "test_util.hpp"

using namespace hamforge;

TEST_CASE("parse_pauli letter mapping") {
  auto id4 = PauliString::parse("IIII");
  CHECK(id4.n == 4);
  CHECK(id4.is_identity());

  auto p = PauliString::parse("XYYX");
  CHECK(p.x == 0b1111u);
  CHECK(p.z == 0b0110u);
  CHECK(p.letter_phase() == std::complex<double>(1, 0));

  auto q = PauliString::parse("XZ");
  CHECK(q.x == 0b01u);  // qubit 0 = leftmost letter = bit 0
  CHECK(q.z == 0b10u);

  CHECK_THROWS_AS(PauliString::parse("XA"), ParseError);
  CHECK_THROWS_AS(PauliString::parse(""), ParseError);
}

TEST_CASE("parse/format round trip") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    int n = 1 + int(rng() % 8);
    auto p = testutil::random_pauli(n, rng);
    auto q = PauliString::parse(p.format());
    CHECK(q.same_letters(p));
    CHECK(q.format() == p.format());
  }
}

TEST_CASE("commutes examples") {
  CHECK(PauliString::parse("XYYX").commutes_with(PauliString::parse("YXXY")));
  CHECK_FALSE(PauliString::parse("X").commutes_with(PauliString::parse("Z")));
  auto p = PauliString::parse("YZXI");
  CHECK(p.commutes_with(p));
}

TEST_CASE("commutes agrees with dense commutator") {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    int n = 1 + int(rng() % 5);
    auto a = testutil::random_pauli(n, rng);
    auto b = testutil::random_pauli(n, rng);
    Eigen::MatrixXcd A = a.dense(), B = b.dense();
    double comm = (A * B - B * A).cwiseAbs().maxCoeff();
    if (a.commutes_with(b)) {
      CHECK(comm < 1e-12);
    } else {
      CHECK(comm > 1e-6);
    }
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("multiplication matches dense product and is associative") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    int n = 1 + int(rng() % 4);
    auto a = testutil::random_pauli(n, rng);
    auto b = testutil::random_pauli(n, rng);
    auto c = testutil::random_pauli(n, rng);
    CHECK(((a * b) * c) == (a * (b * c)));
    Eigen::MatrixXcd prod = a.dense() * b.dense();
    CHECK((prod - (a * b).dense()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("dense single-qubit matrices") {
  auto Z = PauliString::parse("Z").dense();
  CHECK(Z(0, 0) == std::complex<double>(1, 0));
  CHECK(Z(1, 1) == std::complex<double>(-1, 0));
  CHECK(Z(0, 1) == std::complex<double>(0, 0));
  auto Y = PauliString::parse("Y").dense();
  CHECK(Y(0, 1) == std::complex<double>(0, -1));
  CHECK(Y(1, 0) == std::complex<double>(0, 1));
  // Identity Hamiltonian c*I.
  auto h = Hamiltonian::parse("2.5 II");
  CHECK((h.dense() - 2.5 * Eigen::MatrixXcd::Identity(4, 4))
            .cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("qubit 0 is the most significant basis bit") {
  // ZI: phase of |00>,|01> is +1; |10>,|11> is -1.
  auto zi = PauliString::parse("ZI").dense();
  CHECK(zi(0, 0).real() == 1.0);
  CHECK(zi(1, 1).real() == 1.0);
  CHECK(zi(2, 2).real() == -1.0);
  CHECK(zi(3, 3).real() == -1.0);
}

TEST_CASE("parse_hamiltonian") {
  auto h = Hamiltonian::parse(
      "0.0492 XYYX\n0.0492 YXXY\n-0.0492 YYXX\n-0.0492 XXYY\n");
  CHECK(h.n == 4);
  CHECK(h.terms.size() == 4);
  CHECK(h.one_norm() == Catch::Approx(4 * 0.0492));

  auto merged = Hamiltonian::parse("1.0 Z\n1.0 Z");
  CHECK(merged.terms.size() == 1);
  CHECK(merged.terms[0].coeff == 2.0);

  auto two = Hamiltonian::parse("0.5 XX\n-0.3 ZZ\n# comment\n\n");
  CHECK(two.terms.size() == 2);
  CHECK(two.one_norm() == Catch::Approx(0.8));

  CHECK_THROWS_AS(Hamiltonian::parse("abc XX"), ParseError);
  CHECK_THROWS_AS(Hamiltonian::parse("0.5 XX\n0.5 XXX"), ParseError);
  CHECK_THROWS_AS(Hamiltonian::parse("# nothing\n"), ParseError);
}

TEST_CASE("identity terms flagged, excluded from one_norm") {
  auto h = Hamiltonian::parse("-0.25 II\n0.5 XX");
  CHECK(h.identity_coeff == -0.25);
  CHECK(h.terms.size() == 1);
  CHECK(h.one_norm() == Catch::Approx(0.5));
}

TEST_CASE("one_norm invariant under order and merge") {
  auto a = Hamiltonian::parse("0.5 XX\n-0.3 ZZ\n0.2 XX");
  auto b = Hamiltonian::parse("-0.3 ZZ\n0.7 XX");
  CHECK(a.one_norm() == Catch::Approx(b.one_norm()));
  CHECK(Hamiltonian::parse("0 II\n1e-20 XX\n0.1 YY").terms.size() == 1);
}

TEST_CASE("hamiltonian format round trip") {
  auto h = Hamiltonian::parse("-0.25 II\n0.5 XY\n-0.125 ZZ");
  auto h2 = Hamiltonian::parse(h.format());
  CHECK(h2.identity_coeff == h.identity_coeff);
  REQUIRE(h2.terms.size() == h.terms.size());
  for (size_t i = 0; i < h.terms.size(); ++i) {
    CHECK(h2.terms[i].coeff == h.terms[i].coeff);
    CHECK(h2.terms[i].pauli.same_letters(h.terms[i].pauli));
  }
}

TEST_CASE("fragment commuting check and hamiltonian view") {
  Fragment f;
  f.n = 2;
  f.scale = 0.5;
  f.paulis = {Term{1.0, PauliString::parse("XX")},
              Term{-1.0, PauliString::parse("YY")},
              Term{1.0, PauliString::parse("ZZ")}};
  CHECK(f.commuting());
  auto h = f.to_hamiltonian();
  CHECK(h.one_norm() == Catch::Approx(1.5));

  f.paulis.push_back(Term{1.0, PauliString::parse("XZ")});
  CHECK_FALSE(f.commuting());
}
