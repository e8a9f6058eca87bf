#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "xxring/table_io.hpp"

using namespace xxring;

namespace {

SweepTable sample_table() {
  GridSpec g;
  g.b = Axis::linspace(-1.3, 1.7, 7);
  g.t = Axis::list({0.013, 0.7});
  g.delta = Axis::list({-0.25, 0.3});
  g.quantities = {Quantity::c_alternate, Quantity::energy, Quantity::z};
  return run_sweep(g);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(FormatDouble, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(TableFormat, Parse) {
  EXPECT_EQ(parse_table_format("csv"), TableFormat::csv);
  EXPECT_EQ(parse_table_format("json-lines"), TableFormat::json_lines);
  EXPECT_EQ(parse_table_format("jsonl"), TableFormat::json_lines);
  EXPECT_THROW(parse_table_format("xml"), std::invalid_argument);
}

TEST(WriteCsv, HeaderWithoutErrors) {
  std::ostringstream out;
  write_csv(out, sample_table());
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "j,b,t,delta,quantity,value");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 3 * 2 * 2 * 7);
}

TEST(WriteCsv, ErrorColumnWhenRowsFail) {
  GridSpec g;
  g.b = Axis::list({0.2, 0.7});
  g.zero_temperature = true;
  g.quantities = {Quantity::c_alternate, Quantity::z};
  std::ostringstream out;
  write_csv(out, run_sweep(g));
  std::istringstream lines(out.str());
  std::string header, first, z_row;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header, "j,b,t,delta,quantity,value,error");
  EXPECT_EQ(first.back(), ',');  // empty error field on a good row
  std::getline(lines, z_row);
  std::getline(lines, z_row);
  EXPECT_NE(z_row.find(",Z,nan,"), std::string::npos);
}

TEST(ReadCsv, RoundTripIsBitExact) {
  const auto table = sample_table();
  std::stringstream io;
  write_csv(io, table);
  const auto back = read_csv(io);
  ASSERT_EQ(back.rows.size(), table.rows.size());
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& a = table.rows[k];
    const auto& b = back.rows[k];
    EXPECT_TRUE(same_bits(a.j, b.j));
    EXPECT_TRUE(same_bits(a.b, b.b));
    EXPECT_TRUE(same_bits(a.t, b.t));
    EXPECT_TRUE(same_bits(a.delta, b.delta));
    EXPECT_TRUE(same_bits(a.value, b.value)) << k;
    EXPECT_EQ(a.quantity, b.quantity);
  }
}

TEST(ReadCsv, RandomValuesRoundTrip) {
  std::mt19937_64 rng(73);
  std::uniform_int_distribution<std::uint64_t> bits;
  SweepTable table;
  while (table.rows.size() < 500) {
    double v;
    const auto raw = bits(rng);
    std::memcpy(&v, &raw, sizeof v);
    if (!std::isfinite(v)) continue;
    table.rows.push_back({1.0, v, 0.5, 0.0, "energy", -v, ""});
  }
  std::stringstream io;
  write_csv(io, table);
  const auto back = read_csv(io);
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    EXPECT_TRUE(same_bits(table.rows[k].b, back.rows[k].b));
    EXPECT_TRUE(same_bits(table.rows[k].value, back.rows[k].value));
  }
}

TEST(ReadCsv, ErrorsRoundTrip) {
  SweepTable table;
  table.rows.push_back({1.0, 0.0, 0.0, 0.0, "Z", std::nan(""), "Z is undefined, at \"T = 0\""});
  std::stringstream io;
  write_csv(io, table);
  const auto back = read_csv(io);
  ASSERT_EQ(back.rows.size(), 1u);
  EXPECT_TRUE(std::isnan(back.rows[0].value));
  EXPECT_EQ(back.rows[0].error, table.rows[0].error);
}

TEST(ReadCsv, Malformed) {
  std::istringstream empty("");
  EXPECT_THROW(read_csv(empty), std::runtime_error);
  std::istringstream header("a,b,c\n");
  EXPECT_THROW(read_csv(header), std::runtime_error);
  std::istringstream short_row("j,b,t,delta,quantity,value\n1,2,3\n");
  EXPECT_THROW(read_csv(short_row), std::runtime_error);
  std::istringstream bad_number("j,b,t,delta,quantity,value\n1,2,3,4,Q,abc\n");
  EXPECT_THROW(read_csv(bad_number), std::runtime_error);
}

TEST(WriteJsonLines, OneObjectPerRow) {
  const auto table = sample_table();
  std::ostringstream out;
  write_table(out, table, TableFormat::json_lines);
  std::istringstream lines(out.str());
  std::string line;
  std::size_t k = 0;
  while (std::getline(lines, line)) {
    const auto obj = nlohmann::json::parse(line);
    const auto& row = table.rows[k++];
    EXPECT_EQ(obj.at("quantity").get<std::string>(), row.quantity);
    EXPECT_TRUE(same_bits(obj.at("value").get<double>(), row.value));
    EXPECT_TRUE(same_bits(obj.at("b").get<double>(), row.b));
  }
  EXPECT_EQ(k, table.rows.size());
}

TEST(WriteJsonLines, NanIsNull) {
  SweepTable table;
  table.rows.push_back({1.0, 0.0, 0.0, 0.0, "Z", std::nan(""), "undefined"});
  std::ostringstream out;
  write_json_lines(out, table);
  const auto obj = nlohmann::json::parse(out.str());
  EXPECT_TRUE(obj.at("value").is_null());
  EXPECT_EQ(obj.at("error").get<std::string>(), "undefined");
}

TEST(WriteBoundary, Columns) {
  BoundaryCurve curve;
  curve.points = {{0.7, 0.5, Branch::upper}, {1.2, 0.03, Branch::lower}};
  std::ostringstream out;
  write_boundary_csv(out, curve);
  EXPECT_EQ(out.str(), "b,t_c,branch\n0.69999999999999996,0.5,upper\n1.2,0.029999999999999999,lower\n");
  std::ostringstream contours;
  write_contours_csv(contours, {{0.3, 0.5, 0.25}});
  EXPECT_EQ(contours.str(), "level,b,t\n0.29999999999999999,0.5,0.25\n");
}
