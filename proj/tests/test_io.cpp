#include <cmath>
#include <bit>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "tlab/io.hpp"

using namespace tlab;

namespace {

std::string grid_text(const GridFunction& u) {
  std::ostringstream os;
  write_grid(os, u);
  return os.str();
}

GridFunction parse_grid(const std::string& text) {
  std::istringstream is(text);
  return read_grid(is);
}

std::string report_text(const ReportFile& r) {
  std::ostringstream os;
  write_report(os, r);
  return os.str();
}

ReportFile parse_report(const std::string& text) {
  std::istringstream is(text);
  return read_report(is);
}

ReportFile sample_report() {
  const SolitonParams p(2.0);
  const GridFunction u = sample_to_grid(GrimCylinderSurface{p}, {-2, 2, -1, 1}, 41, 21);
  ReportFile r;
  r.inputs = Json{{"solution", "u.grid"}, {"lambda", 2.0}, {"tilt", "+"}};
  r.run_id = run_id_for(r.inputs);
  r.checks = run_suite(u, std::vector<std::string>{"convexity", "gradient_bounds", "soliton_identities"}, {});
  return r;
}

}  // namespace

TEST(Reals, FormatParseRoundTrip) {
  for (double v : {0.0, -0.0, 1.0 / 3.0, 1e-300, -2.5e17, std::numbers::pi, 4.9e-324}) {
    const std::string s = format_real(v);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(parse_real(s, "t")), std::bit_cast<std::uint64_t>(v)) << s;
  }
  EXPECT_THROW(parse_real("1.0x", "t"), FormatError);
  EXPECT_THROW(parse_real("", "t"), FormatError);
  EXPECT_THROW(parse_real("nan", "t"), FormatError);
}

TEST(GridFile, WriteReadWriteIsByteIdentical) {
  const GridFunction u =
      sample_to_grid([](double x1, double x2) { return std::sin(7 * x1) * std::exp(x2) / 3; }, {-1.1, 0.7, 2, 5}, 17, 9);
  const std::string first = grid_text(u);
  const GridFunction v = parse_grid(first);
  EXPECT_EQ(v.spec(), u.spec());
  for (std::size_t k = 0; k < u.values().size(); ++k) EXPECT_EQ(v.values()[k], u.values()[k]);
  EXPECT_EQ(grid_text(v), first);
}

TEST(GridFile, HeaderLayout) {
  const GridFunction u(GridSpec({0, 1, -1, 1}, 3, 3));
  EXPECT_EQ(grid_text(u), "TLAB-GRID v1 3 3 0 1 -1 1\n0 0 0\n0 0 0\n0 0 0\n");
}

TEST(GridFile, MalformedInputs) {
  const std::string good = "TLAB-GRID v1 3 2 0 1 -1 1\n0 0 0\n0 0 0\n";
  EXPECT_THROW(parse_grid(good), FormatError);  // fewer than 3 rows
  EXPECT_NO_THROW(parse_grid("TLAB-GRID v1 3 3 0 1 -1 1\n0 0 0\n0 0 0\n0 0 0\n"));
  EXPECT_THROW(parse_grid(""), FormatError);
  EXPECT_THROW(parse_grid("TLAB-GRID v2 3 2 0 1 -1 1\n0 0 0\n0 0 0\n"), FormatError);
  EXPECT_THROW(parse_grid("TLAB-GRID v1 3 2 0 1 -1\n0 0 0\n0 0 0\n"), FormatError);
  EXPECT_THROW(parse_grid("TLAB-GRID v1 3 2 0 1 -1 1\n0 0 0\n"), FormatError);
  EXPECT_THROW(parse_grid("TLAB-GRID v1 3 2 0 1 -1 1\n0 0\n0 0 0\n"), FormatError);
  EXPECT_THROW(parse_grid("TLAB-GRID v1 3 2 0 1 -1 1\n0 0 0\n0 nan 0\n"), FormatError);
  EXPECT_THROW(parse_grid("TLAB-GRID v1 3 2 0 1 -1 1\n0 0 0\n0 0 0\n1\n"), FormatError);
  EXPECT_THROW(parse_grid("TLAB-GRID v1 -3 2 0 1 -1 1\n0 0 0\n0 0 0\n"), FormatError);
  EXPECT_THROW(parse_grid("TLAB-GRID v1 3 2 1 0 -1 1\n0 0 0\n0 0 0\n"), FormatError);
}

TEST(GridFile, MissingPath) { EXPECT_THROW(load_grid("/nonexistent/dir/u.grid"), FormatError); }

TEST(ReportFile, WriteReadWriteIsByteIdentical) {
  ReportFile r = sample_report();
  r.checks.push_back(CheckReport{"symmetry", "input refused", std::numeric_limits<double>::infinity(), 0.0, false,
                                 {0, 0}, "refused: test"});
  const std::string first = report_text(r);
  const ReportFile back = parse_report(first);
  EXPECT_EQ(back.run_id, r.run_id);
  ASSERT_EQ(back.checks.size(), r.checks.size());
  for (std::size_t k = 0; k < r.checks.size(); ++k) {
    const double w = r.checks[k].worst_violation;
    if (std::isfinite(w)) {
      EXPECT_EQ(back.checks[k].worst_violation, w);
    } else {
      EXPECT_TRUE(std::isnan(back.checks[k].worst_violation));  // non-finite values are stored as null
    }
    EXPECT_EQ(back.checks[k].worst_location, r.checks[k].worst_location);
  }
  EXPECT_EQ(report_text(back), first);
}

TEST(ReportFile, SummaryMatchesChecks) {
  const ReportFile r = sample_report();
  const Json j = report_to_json(r);
  EXPECT_EQ(j["summary"]["passed"].get<std::size_t>() + j["summary"]["failed"].get<std::size_t>(), r.checks.size());
  EXPECT_EQ(j.begin().key(), "run_id");
}

TEST(ReportFile, MalformedInputs) {
  EXPECT_THROW(parse_report("{"), FormatError);
  EXPECT_THROW(parse_report("{}"), FormatError);
  Json j = report_to_json(sample_report());
  j["summary"]["passed"] = 99;
  EXPECT_THROW(report_from_json(j), FormatError);
  j = report_to_json(sample_report());
  j["checks"][0]["worst_location"] = Json::array({1});
  EXPECT_THROW(report_from_json(j), FormatError);
  j = report_to_json(sample_report());
  j["checks"][0].erase("pass");
  EXPECT_THROW(report_from_json(j), FormatError);
}

TEST(ReportFile, RunIdIsDeterministic) {
  const Json a{{"solution", "u.grid"}, {"lambda", 2.0}};
  const Json b{{"solution", "u.grid"}, {"lambda", 2.5}};
  EXPECT_EQ(run_id_for(a), run_id_for(Json{{"solution", "u.grid"}, {"lambda", 2.0}}));
  EXPECT_NE(run_id_for(a), run_id_for(b));
  EXPECT_EQ(run_id_for(a).size(), 16u);
  EXPECT_EQ(report_text(sample_report()), report_text(sample_report()));
}

TEST(ProfileCsv, FirstRowAndRoundTrip) {
  const BowlProfile b = bowl_profile_solve(3.0, 1e-2);
  const ProfileTable t = profile_table(b);
  std::ostringstream os;
  write_profile_csv(os, t);
  const std::string first = os.str();
  EXPECT_EQ(first.substr(0, first.find('\n', first.find('\n') + 1) + 1), "r,f,fp,asymptote_gap\n0,0,0,\n");
  std::istringstream is(first);
  const ProfileTable back = read_profile_csv(is);
  ASSERT_EQ(back.r.size(), t.r.size());
  std::ostringstream again;
  write_profile_csv(again, back);
  EXPECT_EQ(again.str(), first);
  EXPECT_TRUE(std::isnan(back.gap[0]));
  EXPECT_FALSE(std::isnan(back.gap.back()));
}

TEST(ProfileCsv, StrideAndErrors) {
  const BowlProfile b = bowl_profile_solve(1.0, 1e-2);
  EXPECT_EQ(profile_table(b, 10).r.size(), (b.size() + 9) / 10);
  EXPECT_THROW(profile_table(b, 0), ArgumentError);
  std::istringstream no_header("0,0,0,\n");
  EXPECT_THROW(read_profile_csv(no_header), FormatError);
  std::istringstream short_row("r,f,fp,asymptote_gap\n0,0,0\n");
  EXPECT_THROW(read_profile_csv(short_row), FormatError);
}
