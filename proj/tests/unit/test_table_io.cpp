#include <doctest.h>

#include <sstream>

#include "ars/errors.hpp"
#include "ars/table.hpp"

using namespace ars;

TEST_CASE("minimal file parses") {
    std::istringstream in("y,x1\n1.0,2.0\n");
    const LabeledTable t = parse_table(in);
    REQUIRE(t.rows() == 1);
    REQUIRE(t.cols() == 2);
    CHECK(t.names[0] == "y");
    CHECK(t.values(0, 1) == 2.0);
    CHECK(t.column("x1") == 1);
    CHECK(t.has_column("y"));
    CHECK_FALSE(t.has_column("z"));
    CHECK_THROWS_AS(t.column("z"), DataError);
}

TEST_CASE("scientific notation and signs are accepted") {
    std::istringstream in("a,b\n1e3,-2.5E-2\n+4,.5\n");
    const LabeledTable t = parse_table(in);
    CHECK(t.values(0, 0) == 1000.0);
    CHECK(t.values(0, 1) == -0.025);
    CHECK(t.values(1, 0) == 4.0);
    CHECK(t.values(1, 1) == 0.5);
}

TEST_CASE("missing header is a parse error at line 1") {
    std::istringstream in("1.0,2.0\n3.0,4.0\n");
    CHECK_THROWS_WITH_AS(parse_table(in), doctest::Contains("line 1"), DataError);
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_table(empty), DataError);
}

TEST_CASE("malformed rows are rejected with their line numbers") {
    std::istringstream bad_cell("y,x\n1.0,oops\n");
    CHECK_THROWS_WITH_AS(parse_table(bad_cell), doctest::Contains("line 2"), DataError);

    std::istringstream empty_cell("y,x\n1.0,\n");
    CHECK_THROWS_WITH_AS(parse_table(empty_cell), doctest::Contains("empty cell"), DataError);

    std::istringstream ragged("y,x\n1.0\n");
    CHECK_THROWS_WITH_AS(parse_table(ragged), doctest::Contains("line 2"), DataError);

    std::istringstream dup("y,y\n1.0,2.0\n");
    CHECK_THROWS_WITH_AS(parse_table(dup), doctest::Contains("duplicate"), DataError);
}

TEST_CASE("tab delimiter") {
    std::istringstream in("y\tx\n1.5\t2.5\n");
    const LabeledTable t = parse_table(in, '\t');
    CHECK(t.values(0, 0) == 1.5);
    CHECK(t.values(0, 1) == 2.5);
}

TEST_CASE("row order is preserved and CRLF tolerated") {
    std::istringstream in("v\r\n3\r\n1\r\n2\r\n");
    const LabeledTable t = parse_table(in);
    REQUIRE(t.rows() == 3);
    CHECK(t.values(0, 0) == 3.0);
    CHECK(t.values(1, 0) == 1.0);
    CHECK(t.values(2, 0) == 2.0);
}

TEST_CASE("missing file raises IoError") {
    CHECK_THROWS_AS(read_table("/nonexistent/nowhere.csv"), IoError);
}
