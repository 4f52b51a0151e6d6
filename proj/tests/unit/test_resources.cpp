#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qbm/error.hpp"
#include "qbm/io.hpp"
#include "qbm/resources.hpp"

using namespace qbm;

namespace {

ArithParams params(int n, int p = 4, int d = 1, int M = 32) { return {n, p, d, M}; }

// Independent oracles: the closed forms evaluated in floating point.
double mul_oracle(double n, double p) {
  return 1.5 * n * n + 3 * n * p + 1.5 * n - 3 * p * p + 3 * p;
}
double add_depth_oracle(double n) {
  return std::floor(std::log2(n)) + std::floor(std::log2(n - 1)) +
         std::floor(std::log2(n / 3)) + std::floor(std::log2((n - 1) / 3)) + 8;
}
double poly_oracle(double n, double p, double d, double M) {
  return 1.5 * n * n * d + 3 * n * p * d + 3.5 * n * d - 3 * p * p * d + 3 * p * d - d +
         2 * M * d * (4 * std::ceil(std::log2(M)) - 8) + 4 * M * n;
}

}  // namespace

TEST(Resources, TcountMulExamples) {
  EXPECT_EQ(tcount_mul(10, 4), 249);
  EXPECT_EQ(tcount_mul(12, 4), 342);
  EXPECT_EQ(tcount_mul(19, 4), 762);
}

TEST(Resources, TdepthAddExamples) {
  EXPECT_EQ(tdepth_add(10), 16);
  EXPECT_EQ(tdepth_add(19), 20);
  // Negative floors honoured: 1 + 0 + (-1) + (-2) + 8.
  EXPECT_EQ(tdepth_add(2), 6);
}

TEST(Resources, TdepthMulExamples) {
  EXPECT_EQ(tdepth_mul(10, 4), 220);
  EXPECT_EQ(tdepth_mul(17, 4), 442);
  EXPECT_EQ(tdepth_mul(19, 4), 494);
}

TEST(Resources, PolyExamples) {
  EXPECT_EQ(tcount_poly(params(10)), 2316);
  EXPECT_EQ(tcount_poly(params(12)), 2669);
  EXPECT_EQ(tcount_poly(params(19)), 3999);
  EXPECT_EQ(tdepth_poly(params(10)), 588);
  EXPECT_EQ(tdepth_poly(params(17)), 878);
  EXPECT_EQ(tdepth_poly(params(19)), 930);
}

TEST(Resources, ClosedFormsMatchFloatingOracle) {
  for (int n = 2; n <= 40; ++n) {
    EXPECT_EQ(static_cast<double>(tdepth_add(n)), add_depth_oracle(n)) << n;
    for (int p = 1; p < n; ++p) {
      EXPECT_EQ(static_cast<double>(tcount_mul(n, p)), mul_oracle(n, p)) << n << "," << p;
      for (int d : {1, 2, 4}) {
        for (int M : {1, 2, 8, 32, 64}) {
          EXPECT_EQ(static_cast<double>(tcount_poly(params(n, p, d, M))), poly_oracle(n, p, d, M));
        }
      }
    }
  }
}

TEST(Resources, FloorLog2RatioIsExact) {
  EXPECT_EQ(floor_log2_ratio(2, 3), -1);
  EXPECT_EQ(floor_log2_ratio(1, 3), -2);
  EXPECT_EQ(floor_log2_ratio(8, 1), 3);
  EXPECT_EQ(floor_log2_ratio(9, 3), 1);
  EXPECT_EQ(floor_log2_ratio(1, 1024), -10);
  EXPECT_EQ(ceil_log2(1), 0);
  EXPECT_EQ(ceil_log2(32), 5);
  EXPECT_EQ(ceil_log2(33), 6);
}

TEST(Resources, FitModeExamples) {
  auto e = boxmuller_resources(params(10), ResourceMode::PaperFit);
  EXPECT_EQ(e.t_count, 8193);
  EXPECT_EQ(e.t_depth, 588);
  EXPECT_EQ(e.qubits, 78);
  e = boxmuller_resources(params(12), ResourceMode::PaperFit);
  EXPECT_EQ(e.t_count, 9717);
  EXPECT_EQ(e.t_depth, 645);
  EXPECT_EQ(e.qubits, 90);
  // Known one-off against the published 8942.
  EXPECT_EQ(boxmuller_resources(params(11), ResourceMode::PaperFit).t_count, 8943);
  EXPECT_EQ(published_row(11)->t_count, 8942);
}

TEST(Resources, PublishedRowsReproduced) {
  const auto rows = table2(ResourceMode::PaperFit);
  ASSERT_EQ(rows.size(), 10u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.estimate.t_depth, r.published.t_depth) << r.n;
    EXPECT_EQ(r.estimate.qubits, r.published.qubits) << r.n;
    if (r.n == 11) {
      EXPECT_EQ(r.estimate.t_count - r.published.t_count, 1);
    } else {
      EXPECT_EQ(r.estimate.t_count, r.published.t_count) << r.n;
    }
  }
  EXPECT_EQ(rows[3].n, 13);
  EXPECT_EQ(rows[3].estimate.t_count, 10515);
  EXPECT_EQ(rows[3].estimate.t_depth, 682);
  EXPECT_EQ(rows[3].estimate.qubits, 96);
  EXPECT_EQ(rows[6].estimate.t_count, 13053);
  EXPECT_EQ(rows[6].estimate.t_depth, 771);
  EXPECT_EQ(rows[6].estimate.qubits, 114);
}

TEST(Resources, QubitColumnFit) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto& rows = published_table2();
  for (const auto& r : rows) {
    sx += r.n, sy += static_cast<double>(r.qubits);
    sxx += r.n * r.n, sxy += r.n * static_cast<double>(r.qubits);
  }
  const double k = static_cast<double>(rows.size());
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  EXPECT_NEAR(slope, 6.0, 1e-12);
  EXPECT_NEAR((sy - slope * sx) / k, 18.0, 1e-10);
}

TEST(Resources, MonotoneInWordBits) {
  for (auto mode : {ResourceMode::PaperFit, ResourceMode::Compositional}) {
    for (int d : {1, 3}) {
      ResourceEstimate prev = boxmuller_resources(params(6, 4, d, 16), mode);
      for (int n = 7; n <= 40; ++n) {
        const auto e = boxmuller_resources(params(n, 4, d, 16), mode);
        EXPECT_GE(e.t_count, prev.t_count) << n;
        EXPECT_GE(e.t_depth, prev.t_depth) << n;
        EXPECT_GE(e.qubits, prev.qubits) << n;
        EXPECT_GE(e.t_count, 0);
        prev = e;
      }
    }
  }
}

TEST(Resources, CompositionalBreakdown) {
  const auto a = params(14);
  const auto e = boxmuller_resources(a, ResourceMode::Compositional);
  ASSERT_EQ(e.breakdown.size(), 5u);
  const auto poly = tcount_poly(a), mul = tcount_mul(14, 4);
  EXPECT_EQ(e.t_count, 2 * poly + 2 * (poly + 2 * mul) + 2 * mul);
  std::int64_t sum = 0;
  for (const auto& it : e.breakdown) sum += it.t_count;
  EXPECT_EQ(sum, e.t_count);
  EXPECT_EQ(e.breakdown[4].component, "final_products");
  EXPECT_EQ(e.breakdown[4].t_count, 2 * mul);
  EXPECT_EQ(e.t_depth, tdepth_poly(a));
  EXPECT_TRUE(boxmuller_resources(a, ResourceMode::PaperFit).breakdown.empty());
}

TEST(Resources, SerialDepthExceedsSingleEvaluation) {
  const auto a = params(12);
  const auto single = boxmuller_resources(a, ResourceMode::PaperFit);
  const auto serial = boxmuller_resources(a, ResourceMode::PaperFit, true);
  EXPECT_EQ(serial.t_depth, 4 * tdepth_poly(a) + 6 * tdepth_mul(12, 4));
  EXPECT_GT(serial.t_depth, single.t_depth);
  EXPECT_EQ(serial.t_count, single.t_count);
}

TEST(Resources, ModeNames) {
  EXPECT_EQ(resource_mode_from_string("paper_fit"), ResourceMode::PaperFit);
  EXPECT_EQ(resource_mode_from_string("compositional"), ResourceMode::Compositional);
  EXPECT_THROW(resource_mode_from_string("bogus"), Error);
  EXPECT_EQ(to_string(ResourceMode::Compositional), "compositional");
}

TEST(Resources, InvalidParamsRejected) {
  EXPECT_THROW(boxmuller_resources(params(10, 4, 1, 30), ResourceMode::PaperFit), Error);
  EXPECT_THROW(boxmuller_resources(params(4, 4, 1, 32), ResourceMode::PaperFit), Error);
  EXPECT_THROW(boxmuller_resources(params(10, 4, 0, 32), ResourceMode::PaperFit), Error);
}

TEST(Resources, CsvAndJsonExport) {
  const auto rows = table2(ResourceMode::PaperFit);
  std::ostringstream os;
  write_table2_csv(os, rows);
  const auto t = io::parse_csv(os.str());
  EXPECT_EQ(t.header, (std::vector<std::string>{"n", "t_count", "t_count_published", "t_depth",
                                                "t_depth_published", "qubits", "qubits_published"}));
  ASSERT_EQ(t.rows.size(), 10u);
  EXPECT_EQ(t.rows[0][t.column("t_count")], "8193");
  EXPECT_EQ(t.rows[1][t.column("t_count_published")], "8942");

  const auto j = table2_to_json(table2(ResourceMode::Compositional));
  ASSERT_TRUE(j.is_array() || j.is_object());
  EXPECT_NE(j.dump().find("final_products"), std::string::npos);
}
