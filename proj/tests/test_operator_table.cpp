#include <doctest.h>

#include <sstream>

#include "upsbp/operators.hpp"

using namespace upsbp;

TEST_CASE("operator tables round-trip bit for bit") {
  const auto op = make_order2_bounded(10, 0.0, 1.0);
  std::stringstream buf;
  save_operator_table(op, buf);
  const auto back = load_operator_table(buf);
  CHECK(back.dplus == op.dplus);
  CHECK(back.dminus == op.dminus);
  CHECK(back.mass == op.mass);
  CHECK(back.grid.nodes == op.grid.nodes);
  CHECK(back.interior_order == op.interior_order);
  CHECK(back.interior_row == op.interior_row);
  CHECK_FALSE(back.periodic);
}

TEST_CASE("perturbed tables are rejected with the failed residual named") {
  const auto op = make_order2_bounded(10, 0.0, 1.0);
  std::stringstream buf;
  save_operator_table(op, buf);
  std::string text = buf.str();
  // bump D+[0][0] by 1e-3: the table lists it as "0 0 -27"; 10 nodes on [0,1]
  const auto pos = text.find("0 0 -27");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 7, "0 0 -26.999");
  std::stringstream bad(text);
  try {
    load_operator_table(bad);
    FAIL("expected VerificationError");
  } catch (const VerificationError& e) {
    CHECK(e.residual_name() == "sbp_residual");
  }
}

TEST_CASE("hand-encoded order-1 table reproduces the constructor") {
  // 4 nodes on [0, 3]: dx = 1, M = diag(1/2, 1, 1, 1/2)
  const char* text = R"(# first-order upwind pair
kind: bounded
order: 1
nodes: 4
xmin: 0
xmax: 3
mass:
1/2
1
1
1/2
dplus:
0 0 -2
0 1 2
1 1 -1
1 2 1
2 2 -1
2 3 1
dminus:
1 0 -1
1 1 1
2 1 -1
2 2 1
3 2 -2
3 3 2
)";
  std::stringstream in(text);
  const auto op = load_operator_table(in);
  const auto ref = make_order1_bounded(4, 0.0, 3.0);
  CHECK(op.dplus == ref.dplus);
  CHECK(op.dminus == ref.dminus);
  for (int i = 0; i < 4; ++i) CHECK(op.mass[i] == doctest::Approx(ref.mass[i]));
  CHECK(verify(op).pass);
}

TEST_CASE("parse errors carry line information") {
  SUBCASE("missing header") {
    std::stringstream in("mass:\n1\n");
    CHECK_THROWS_AS(load_operator_table(in), TableParseError);
  }
  SUBCASE("bad value") {
    std::stringstream in("kind: bounded\norder: x\n");
    CHECK_THROWS_AS(load_operator_table(in), TableParseError);
  }
  SUBCASE("index out of range") {
    std::stringstream in(
        "kind: bounded\norder: 1\nnodes: 3\nxmin: 0\nxmax: 1\nmass:\n1/2\n1\n1/2\n"
        "dplus:\n0 7 1\n");
    CHECK_THROWS_AS(load_operator_table(in), TableParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_operator_table_file("/nonexistent/op.txt"), TableParseError);
  }
}

TEST_CASE("derived stencil tables load back as valid periodic operators") {
  std::stringstream buf;
  save_derived_stencil_table(5, 32, -1.0, 1.0, buf);
  const auto op = load_operator_table(buf);
  CHECK(op.periodic);
  CHECK(op.interior_order == 5);
  CHECK(op.size() == 32);
  const auto ref = derive_periodic_upwind(5, 32, -1.0, 1.0);
  CHECK(op.dplus == ref.dplus);
  CHECK(op.dminus == ref.dminus);
}
