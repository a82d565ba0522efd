#include <cmath>

#include <gtest/gtest.h>

#include "mrepp/errors.hpp"
#include "mrepp/gp_exact.hpp"
#include "mrepp/pp.hpp"
#include "mrepp/support_points.hpp"
#include "test_util.hpp"

namespace mrepp {
namespace {

const KernelParams kDefaults{1.5, 0.21, 1.5, 0.25};

TEST(PPFit, RejectsBadInput) {
  const auto locs = test::uniform_locations(5, 1);
  EXPECT_THROW(PPModel::fit(locs, Eigen::VectorXd::Zero(5), {}, kDefaults), InputError);
  EXPECT_THROW(PPModel::fit(locs, Eigen::VectorXd::Zero(5), test::uniform_locations(6, 2), kDefaults),
               InputError);
  EXPECT_THROW(PPModel::fit(locs, Eigen::VectorXd::Zero(4), test::uniform_locations(2, 2), kDefaults),
               InputError);
}

TEST(PPFit, CoincidentInducingPoints) {
  const auto locs = test::uniform_locations(30, 3);
  const LocationList twins{{0.1, 0.1}, {0.1, 0.1}, {1.0, -1.0}};
  EXPECT_NO_THROW(PPModel::fit(locs, test::normal_vector(30, 1), twins, kDefaults));
  EXPECT_THROW(PPModel::fit(locs, test::normal_vector(30, 1), twins, {1.5, 0.21, 1.5, 0.0}),
               SingularMatrixError);
}

TEST(PPPredict, ScalarExample) {
  const KernelParams p{1.0, 0.3, 1.5, 1.0};
  const LocationList s{{0.2, 0.2}};
  const auto model = PPModel::fit(s, Eigen::VectorXd::Constant(1, 2.0), s, p);
  const auto d = model.predict_one(s[0]);
  EXPECT_NEAR(d.mean, 1.0, 1e-9);
  EXPECT_NEAR(d.variance, 1.5, 1e-9);
}

TEST(PPPredict, SingleInducingPointScalarSystem) {
  const auto locs = test::uniform_locations(25, 4);
  const Eigen::VectorXd y = test::normal_vector(25, 5);
  const Location u{0.3, -0.1};
  const auto model = PPModel::fit(locs, y, {u}, kDefaults);
  double a = kDefaults.tau2 * kDefaults.eta2, b = 0.0;
  for (std::size_t i = 0; i < locs.size(); ++i) {
    const double c = test::matern_oracle(std::hypot(locs[i].x - u.x, locs[i].y - u.y), kDefaults.eta2,
                                         kDefaults.phi, kDefaults.nu);
    a += c * c;
    b += c * y(static_cast<Eigen::Index>(i));
  }
  const Location t{0.5, 0.5};
  const double ct = test::matern_oracle(std::hypot(t.x - u.x, t.y - u.y), kDefaults.eta2, kDefaults.phi,
                                        kDefaults.nu);
  EXPECT_NEAR(model.mean_at(t), ct * b / a, 1e-10);
}

TEST(PPPredict, MatchesExplicitInverseFormulas) {
  const auto locs = test::uniform_locations(150, 6);
  const auto inducing = test::uniform_locations(20, 7);
  const auto targets = test::uniform_locations(10, 8);
  const Eigen::VectorXd y = test::normal_vector(150, 9);
  const auto pred = PPModel::fit(locs, y, inducing, kDefaults).predict(targets);

  const Eigen::MatrixXd cmm = test::cov_oracle(inducing, inducing, kDefaults);
  const Eigen::MatrixXd cnm = test::cov_oracle(locs, inducing, kDefaults);
  const Eigen::MatrixXd ainv = (kDefaults.tau2 * cmm + cnm.transpose() * cnm).fullPivLu().inverse();
  const Eigen::MatrixXd cmminv = cmm.fullPivLu().inverse();
  const Eigen::MatrixXd ct = test::cov_oracle(inducing, targets, kDefaults);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Eigen::VectorXd c = ct.col(static_cast<Eigen::Index>(t));
    EXPECT_NEAR(pred[t].mean, c.dot(ainv * (cnm.transpose() * y)), 1e-8);
    const double var = kDefaults.eta2 - c.dot(cmminv * c) + kDefaults.tau2 * c.dot(ainv * c) + kDefaults.tau2;
    EXPECT_NEAR(pred[t].variance, var, 1e-6);
    EXPECT_GE(pred[t].variance, kDefaults.tau2);
  }
}

TEST(PPPredict, FullRankEqualsExactGP) {
  const auto locs = test::uniform_locations(120, 10);
  const auto targets = test::uniform_locations(30, 11);
  const Eigen::VectorXd y = test::normal_vector(120, 12);
  const auto pp = PPModel::fit(locs, y, locs, kDefaults).predict(targets);
  const auto gp = GPFit::fit(locs, y, kDefaults).predict(targets);
  EXPECT_LT((pp.means() - gp.means()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((pp.variances() - gp.variances()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(PPPredict, LinearInValues) {
  const auto locs = test::uniform_locations(90, 13);
  const auto inducing = test::uniform_locations(12, 14);
  const auto targets = test::uniform_locations(9, 15);
  const auto y1 = test::normal_vector(90, 16), y2 = test::normal_vector(90, 17);
  const auto model = PPModel::fit(locs, y1, inducing, kDefaults);
  const auto m = [&](const Eigen::VectorXd& y) { return model.with_values(y).predict(targets).means(); };
  EXPECT_LT((m(y1 + y2) - m(y1) - m(y2)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_EQ(m(Eigen::VectorXd::Zero(90)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(PPInfluence, ScalarExample) {
  const KernelParams p{1.0, 0.3, 1.5, 1.0};
  const LocationList s{{0.0, 0.0}};
  const auto r = PPModel::fit(s, Eigen::VectorXd::Constant(1, 2.0), s, p).influence(s[0]);
  EXPECT_NEAR(r.influence(0), 0.5, 1e-9);
  EXPECT_NEAR(r.e_min, 1.0, 1e-9);
  EXPECT_NEAR(r.bound, 1.0, 1e-9);
  EXPECT_TRUE(r.bound_satisfied());
}

TEST(PPInfluence, MatchesFiniteDifferences) {
  const auto locs = test::uniform_locations(200, 18);
  const auto inducing = support_points(locs, 15, {100, 1e-6, 3}).points;
  const auto model = PPModel::fit(locs, test::normal_vector(200, 19), inducing, kDefaults);
  const Location target{-0.3, 0.7};
  const auto r = model.influence(target);
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < 200; i += 9) {
    Eigen::VectorXd up = model.values(), down = model.values();
    up(i) += h;
    down(i) -= h;
    const double fd = (model.with_values(up).mean_at(target) - model.with_values(down).mean_at(target)) /
                      (2 * h);
    EXPECT_LT(std::abs(fd - r.influence(i)) / r.max_abs(), 1e-4);
  }
}

TEST(PPInfluence, DegenerateDesignReportsInfiniteBound) {
  // Inducing points far from every observation: C_nm is numerically zero.
  const auto locs = test::uniform_locations(50, 20, -1.0, 1.0);
  const LocationList far{{100.0, 100.0}, {-100.0, 100.0}};
  const auto r = PPModel::fit(locs, test::normal_vector(50, 21), far, kDefaults).influence({0.0, 0.0});
  EXPECT_LE(r.e_min, 1e-12);
  EXPECT_TRUE(std::isinf(r.bound));
}

TEST(PPInfluence, BoundHoldsAndBeatsGP) {
  int pp_smaller = 0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    const auto locs = test::uniform_locations(500, 300 + t);
    const auto y = test::normal_vector(500, 400 + t);
    const auto inducing = support_points(locs, 20, {50, 1e-6, static_cast<std::uint64_t>(t)}).points;
    const Location target = test::uniform_locations(1, 500 + t, -2.0, 2.0)[0];
    const auto pp = PPModel::fit(locs, y, inducing, kDefaults).influence(target);
    const auto gp = GPFit::fit(locs, y, kDefaults).influence(target);
    EXPECT_TRUE(pp.bound_satisfied());
    EXPECT_TRUE(gp.bound_satisfied());
    pp_smaller += pp.max_abs() <= gp.max_abs() ? 1 : 0;
  }
  EXPECT_GE(pp_smaller, 45);
}

}  // namespace
}  // namespace mrepp
