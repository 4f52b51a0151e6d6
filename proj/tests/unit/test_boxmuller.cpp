#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qbm/boxmuller.hpp"
#include "qbm/error.hpp"

using namespace qbm;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double variance(const Eigen::VectorXd& v) {
  const double m = v.mean();
  return (v.array() - m).square().mean();
}

}  // namespace

TEST(TransformPoint, Examples) {
  for (double v : {0.0, 0.3, 0.77}) {
    const auto [a, b] = transform_point(1.0, v);
    EXPECT_EQ(a, 0.0);
    EXPECT_EQ(std::fabs(b), 0.0);
  }
  const double u = std::exp(-2.0);
  auto [a, b] = transform_point(u, 0.25);
  EXPECT_NEAR(a, 2.0, 1e-12);
  EXPECT_NEAR(b, 0.0, 1e-12);
  std::tie(a, b) = transform_point(u, 0.0);
  EXPECT_NEAR(a, 0.0, 1e-12);
  EXPECT_NEAR(b, 2.0, 1e-12);
  EXPECT_THROW(transform_point(0.0, 0.5), Error);
}

TEST(GridConfig, Conventions) {
  GridConfig g;
  g.grid_qubits = 2;
  g.u_min = 0.2;
  g.u_max = 0.6;
  EXPECT_DOUBLE_EQ(g.u_at(0), 0.25);
  EXPECT_DOUBLE_EQ(g.u_at(3), 0.55);
  g.convention = GridConvention::Endpoint;
  EXPECT_DOUBLE_EQ(g.u_at(0), 0.2);
  EXPECT_DOUBLE_EQ(g.u_at(3), 0.6);
  EXPECT_DOUBLE_EQ(g.v_at(3), 1.0);
  g.u_min = 0.7;
  EXPECT_THROW(g.validate(), Error);
}

TEST(GenerateSamples, NarrowBandHasRadiusTwo) {
  GridConfig g;
  g.grid_qubits = 1;
  g.u_min = std::exp(-2.0) * 0.999;
  g.u_max = std::exp(-2.0) * 1.001;
  const auto s = generate_samples(g);
  ASSERT_EQ(s.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(std::hypot(s.z1[i], s.z2[i]), 2.0, 1e-3);
  }
}

TEST(GenerateSamples, MatchesElementwiseOracle) {
  GridConfig g;
  g.grid_qubits = 5;
  g.u_min = 1.0 / 32;
  g.u_max = 31.0 / 32;
  g.convention = GridConvention::Endpoint;
  const auto s = generate_samples(g);
  ASSERT_EQ(s.size(), 1024u);
  for (std::size_t j = 0; j < 32; ++j) {
    for (std::size_t k = 0; k < 32; ++k) {
      const double u = 1.0 / 32 + j * (30.0 / 32) / 31;
      const double v = k / 31.0;
      const double r = std::sqrt(-2.0 * std::log(u));
      EXPECT_NEAR(s.z1[j * 32 + k], r * std::sin(kTwoPi * v), 1e-12);
      EXPECT_NEAR(s.z2[j * 32 + k], r * std::cos(kTwoPi * v), 1e-12);
    }
  }
}

TEST(GenerateSamples, LengthIsFourToTheM) {
  for (int m = 1; m <= 6; ++m) {
    GridConfig g;
    g.grid_qubits = m;
    EXPECT_EQ(generate_samples(g).size(), std::size_t{1} << (2 * m));
  }
}

TEST(GenerateSamples, ZeroUIsRejected) {
  GridConfig g;
  g.convention = GridConvention::Endpoint;
  EXPECT_THROW(generate_samples(g), Error);
}

TEST(GenerateSamples, RadiusIdentityExact) {
  GridConfig g;
  g.grid_qubits = 6;
  const auto s = generate_samples(g);
  const std::size_t n = g.points_per_axis();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double u = s.u[i / n];
    EXPECT_NEAR(s.z1[i] * s.z1[i] + s.z2[i] * s.z2[i], -2.0 * std::log(u), 1e-12);
  }
}

TEST(GenerateSamples, MidpointMeanIsZero) {
  GridConfig g;
  g.grid_qubits = 7;
  const auto s = generate_samples(g);
  double m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < s.size(); ++i) m1 += s.z1[i], m2 += s.z2[i];
  EXPECT_NEAR(m1 / s.size(), 0.0, 1e-10);
  EXPECT_NEAR(m2 / s.size(), 0.0, 1e-10);
}

TEST(GenerateSamples, FixedPointTracksExact) {
  GridConfig g;
  g.grid_qubits = 6;
  const FixedPointFormat f(32, 4);
  const auto fx = generate_samples(g, FixedPointPipeline::standard(f, 32, 3));
  const auto ex = generate_samples(g);
  ASSERT_TRUE(fx.fixed_point());
  ASSERT_EQ(fx.z1_raw.size(), fx.size());
  const std::size_t n = g.points_per_axis();
  for (std::size_t i = 0; i < fx.size(); ++i) {
    EXPECT_NEAR(fx.z1[i], ex.z1[i], 1e-4);
    EXPECT_NEAR(fx.z2[i], ex.z2[i], 1e-4);
    EXPECT_DOUBLE_EQ(fx.z1[i], fx.z1_raw[i] * f.resolution());
    const double u = fx.u[i / n];
    EXPECT_NEAR(fx.z1[i] * fx.z1[i] + fx.z2[i] * fx.z2[i], -2.0 * std::log(u), 1e-3);
  }
}

TEST(GenerateSamples, FixedPointOverflowPropagates) {
  GridConfig g;
  g.grid_qubits = 12;  // smallest u = 2^-13: -ln u > 8 leaves p = 4
  EXPECT_THROW(generate_samples(g, FixedPointPipeline::standard(FixedPointFormat(20, 4), 32, 1)),
               Error);
}

TEST(GenerateSamples, IndependentOfThreadCount) {
  GridConfig g;
  g.grid_qubits = 7;
  const auto pipe = FixedPointPipeline::standard(FixedPointFormat(20, 4), 32, 2);
  ::setenv("QBM_THREADS", "1", 1);
  const auto a = generate_samples(g, pipe);
  ::setenv("QBM_THREADS", "5", 1);
  const auto b = generate_samples(g, pipe);
  ::unsetenv("QBM_THREADS");
  EXPECT_EQ(a.z1_raw, b.z1_raw);
  EXPECT_EQ(a.z2_raw, b.z2_raw);
  EXPECT_EQ(samples_to_json(a).dump(), samples_to_json(b).dump());
}

TEST(Correlate, IdentityAndComonotone) {
  GridConfig g;
  g.grid_qubits = 4;
  const auto s = generate_samples(g);
  const auto same = correlate(s, 0.0);
  EXPECT_EQ(same.z1, s.z1);
  EXPECT_EQ(same.z2, s.z2);
  const auto one = correlate(s, 1.0);
  EXPECT_EQ(one.z2, s.z1);
  EXPECT_THROW(correlate(s, 1.5), Error);
}

TEST(Correlate, PearsonNearRho) {
  GridConfig g;
  g.grid_qubits = 7;
  g.u_min = 1e-6;
  g.u_max = 1 - 1e-6;
  const auto s = correlate(generate_samples(g), 0.6);
  EXPECT_NEAR(pearson(s.z1, s.z2), 0.6, 0.05);
  // Classical oracle: pseudo-random normals through the same map.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  std::vector<double> x(1000000), y(1000000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = nd(rng), b = nd(rng);
    x[i] = a;
    y[i] = 0.6 * a + 0.8 * b;
  }
  EXPECT_NEAR(pearson(s.z1, s.z2), pearson(x, y), 0.05);
}

TEST(Multivariate, Examples) {
  GridConfig g;
  g.grid_qubits = 3;
  const auto s = generate_samples(g);
  MultivariateSpec id{Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)};
  const auto x = multivariate({s}, id);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(x(static_cast<Eigen::Index>(i), 0), s.z1[i]);
    EXPECT_EQ(x(static_cast<Eigen::Index>(i), 1), s.z2[i]);
  }
  MultivariateSpec one{Eigen::VectorXd::Constant(1, 3.0), Eigen::MatrixXd::Constant(1, 1, 2.0)};
  const auto y = multivariate({s}, one);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_DOUBLE_EQ(y(static_cast<Eigen::Index>(i), 0), 3.0 + 2.0 * s.z1[i]);
  }
  EXPECT_THROW(multivariate({s, s}, id), Error);
}

TEST(Multivariate, DiagonalCovarianceVariances) {
  GridConfig g;
  g.grid_qubits = 7;
  g.u_min = 1e-6;
  g.u_max = 1 - 1e-6;
  const auto a = generate_samples(g);
  g.convention = GridConvention::Endpoint;  // a second, different pair set
  const auto b = generate_samples(g);
  Eigen::MatrixXd cov = Eigen::Vector3d(1, 4, 9).asDiagonal();
  const auto x = multivariate({a, b}, {Eigen::VectorXd::Zero(3), cholesky(cov)});
  EXPECT_NEAR(variance(x.col(0)), 1.0, 0.1);
  EXPECT_NEAR(variance(x.col(1)), 4.0, 0.4);
  EXPECT_NEAR(variance(x.col(2)), 9.0, 0.9);
}

TEST(Cholesky, Examples) {
  EXPECT_TRUE(cholesky(Eigen::MatrixXd::Identity(3, 3)).isApprox(Eigen::MatrixXd::Identity(3, 3)));
  Eigen::MatrixXd d(2, 2);
  d << 4, 0, 0, 9;
  Eigen::MatrixXd de(2, 2);
  de << 2, 0, 0, 3;
  EXPECT_TRUE(cholesky(d).isApprox(de, 1e-14));
  Eigen::MatrixXd c(2, 2);
  c << 1, 0.6, 0.6, 1;
  Eigen::MatrixXd ce(2, 2);
  ce << 1, 0, 0.6, 0.8;
  const auto l = cholesky(c);
  EXPECT_TRUE(l.isApprox(ce, 1e-14));
  EXPECT_LE((l * l.transpose() - c).norm() / c.norm(), 1e-12);
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;
  try {
    cholesky(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
  }
}

TEST(Jacobian, Examples) {
  EXPECT_NEAR(jacobian_check(0.5, 0.3, 0.0).analytic, 4 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(jacobian_check(0.5, 0.3, 1.0).analytic, 0.0, 1e-12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.01, 0.99), corr(-0.95, 0.95);
  for (int i = 0; i < 100; ++i) {
    const auto j = jacobian_check(unit(rng), unit(rng), corr(rng));
    EXPECT_LT(std::fabs(j.analytic - j.numeric) / std::fabs(j.analytic), 1e-5);
  }
}

TEST(Jacobian, ChangeOfVariablesProductIsOne) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(1e-3, 1 - 1e-3), corr(-0.99, 0.99);
  for (int i = 0; i < 100; ++i) {
    EXPECT_NEAR(change_of_variables_product(unit(rng), unit(rng), corr(rng)), 1.0, 1e-8);
  }
}

TEST(SampleExport, CsvHeaderAndJsonAgree) {
  GridConfig g;
  g.grid_qubits = 2;
  const auto s = generate_samples(g, FixedPointPipeline::standard(FixedPointFormat(16, 4), 8, 1));
  std::ostringstream os;
  write_samples_csv(os, s);
  const std::string csv = os.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "j,k,u,v,z1,z2,z1_raw,z2_raw");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  const auto j = samples_to_json(s);
  EXPECT_EQ(j.at("count"), 16);
  EXPECT_EQ(j.at("z1_raw").get<std::vector<std::int64_t>>(), s.z1_raw);
}
