#include <gtest/gtest.h>

#include "greencube/error.hpp"
#include "greencube/green_kernel.hpp"
#include "oracle.hpp"

using namespace greencube;

namespace {

std::vector<MonotoneFamily> test_families(int m) {
  std::vector<MonotoneFamily> out{MonotoneFamily::empty(m), MonotoneFamily::all_nonempty(m),
                                  MonotoneFamily::top(m)};
  for (std::uint32_t v = 0; v < (1u << m); ++v) {
    out.push_back(family_for_known_margins(SubsetMask(v, m), m));
  }
  return out;
}

std::vector<std::uint32_t> bits(const MonotoneFamily& f) {
  std::vector<std::uint32_t> b;
  for (const auto& u : f.members()) b.push_back(u.bits());
  return b;
}

}  // namespace

TEST(Coefficients, Examples) {
  const GreenKernel top(MonotoneFamily::top(2));
  EXPECT_EQ(top.coefficient(SubsetMask::full(2)), 1);

  const GreenKernel m0(family_for_known_margins(SubsetMask::empty(3), 3));
  EXPECT_EQ(m0.coefficient(SubsetMask::full(3)), -2);
  for (int j = 1; j <= 3; ++j) {
    EXPECT_EQ(m0.coefficient(SubsetMask::from_coordinates({j}, 3).complement()), 1);
  }

  const GreenKernel pillow(MonotoneFamily::all_nonempty(2));
  EXPECT_EQ(pillow.coefficient(SubsetMask::from_coordinates({1}, 2)), 1);
  EXPECT_EQ(pillow.coefficient(SubsetMask::from_coordinates({2}, 2)), 1);
  EXPECT_EQ(pillow.coefficient(SubsetMask::full(2)), -1);
  EXPECT_THROW(top.coefficient(SubsetMask::from_coordinates({1}, 2)), ValidationError);
}

TEST(Coefficients, RecurrenceResidualIsZero) {
  for (int m = 2; m <= 6; ++m) {
    for (const auto& f : test_families(m)) {
      const GreenKernel k(f);
      const auto members = f.members();
      for (std::size_t i = 0; i < members.size(); ++i) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < members.size(); ++j) {
          if (members[j].is_subset_of(members[i])) s += k.coefficients()[j];
        }
        EXPECT_EQ(s, 1);
      }
      const auto brute = oracle::coefficients(bits(f), m);
      for (std::size_t i = 0; i < members.size(); ++i) {
        EXPECT_EQ(brute.at(members[i].bits()), k.coefficients()[i]);
      }
    }
  }
}

TEST(Coefficients, EveryEnumeratedFamily) {
  for (int m = 2; m <= 4; ++m) {
    for (const auto& f : enumerate_monotone_families(m)) {
      const GreenKernel k(f);
      const auto brute = oracle::coefficients(bits(f), m);
      for (std::size_t i = 0; i < f.size(); ++i) {
        EXPECT_EQ(brute.at(f.members()[i].bits()), k.coefficients()[i]);
      }
    }
  }
}

TEST(Evaluate, Examples) {
  EXPECT_DOUBLE_EQ(evaluate(GreenKernel(MonotoneFamily::empty(2)), std::vector{0.3, 0.7},
                            std::vector{0.5, 0.2}),
                   0.06);
  EXPECT_EQ(evaluate(GreenKernel(MonotoneFamily::top(2)), std::vector{1.0, 1.0},
                     std::vector{1.0, 1.0}),
            0.0);
  EXPECT_DOUBLE_EQ(evaluate(GreenKernel(MonotoneFamily::all_nonempty(2)), std::vector{0.5, 0.5},
                            std::vector{0.5, 0.5}),
                   0.0625);
  const GreenKernel k(MonotoneFamily::empty(2));
  EXPECT_THROW(k(std::vector{0.5}, std::vector{0.5, 0.5}), ValidationError);
  EXPECT_THROW(k(std::vector{1.5, 0.5}, std::vector{0.5, 0.5}), ValidationError);
}

TEST(Evaluate, ClosedFormsOfTheClassicalFields) {
  std::mt19937_64 g(7);
  for (int m = 2; m <= 5; ++m) {
    const GreenKernel sheet(MonotoneFamily::empty(m)), pillow(MonotoneFamily::all_nonempty(m)),
        tucked(MonotoneFamily::top(m));
    for (int t = 0; t < 1000; ++t) {
      const auto x = oracle::random_point(g, m), xi = oracle::random_point(g, m);
      double pmin = 1, pprod = 1, pbridge = 1;
      for (int j = 0; j < m; ++j) {
        pmin *= std::min(x[j], xi[j]);
        pprod *= x[j] * xi[j];
        pbridge *= std::min(x[j], xi[j]) - x[j] * xi[j];
      }
      EXPECT_NEAR(sheet(x, xi), pmin, 1e-14);
      EXPECT_NEAR(pillow(x, xi), pbridge, 1e-14);
      EXPECT_NEAR(tucked(x, xi), pmin - pprod, 1e-14);
    }
  }
}

TEST(Evaluate, SymmetryAndBoundaries) {
  std::mt19937_64 g(11);
  for (int m = 2; m <= 5; ++m) {
    for (const auto& f : test_families(m)) {
      const GreenKernel k(f);
      const auto a = oracle::coefficients(bits(f), m);
      for (int t = 0; t < 200; ++t) {
        auto x = oracle::random_point(g, m), xi = oracle::random_point(g, m);
        EXPECT_EQ(k(x, xi), k(xi, x));
        EXPECT_NEAR(k(x, xi), oracle::green(a, x, xi), 1e-14);
        auto left = x;
        left[t % m] = 0.0;
        EXPECT_EQ(k(left, xi), 0.0);
        for (const auto& u : vanishing_faces(k)) {
          auto face = x;
          for (int j = 0; j < m; ++j) {
            if (u.contains(j)) face[j] = 1.0;
          }
          EXPECT_LE(std::abs(k(face, xi)), 1e-14);
        }
      }
    }
  }
}

TEST(VanishingFaces, AreTheMembers) {
  EXPECT_EQ(vanishing_faces(GreenKernel(MonotoneFamily::top(3))).size(), 1u);
  EXPECT_EQ(vanishing_faces(GreenKernel(family_for_known_margins(SubsetMask::empty(3), 3))).size(),
            4u);
  EXPECT_TRUE(vanishing_faces(GreenKernel(MonotoneFamily::empty(3))).empty());
}

TEST(GramMatrix, Examples) {
  const GreenKernel top(MonotoneFamily::top(3));
  PointSet one(3, 1);
  one.set_point(0, std::vector{1.0, 1.0, 1.0});
  EXPECT_EQ(gram_matrix(top, one)(0, 0), 0.0);

  const GreenKernel sheet(MonotoneFamily::empty(2));
  PointSet twin(2, 2);
  twin.set_point(0, std::vector{0.4, 0.6});
  twin.set_point(1, std::vector{0.4, 0.6});
  const auto g2 = gram_matrix(sheet, twin);
  EXPECT_EQ(g2(0, 0), g2(0, 1));
  EXPECT_EQ(g2(1, 0), g2(1, 1));

  std::mt19937_64 rng(3);
  const GreenKernel pillow(MonotoneFamily::all_nonempty(2));
  PointSet three(2, 3);
  for (int i = 0; i < 3; ++i) three.set_point(i, oracle::random_point(rng, 2));
  const auto g3 = gram_matrix(pillow, three);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double e = 1;
      for (int c = 0; c < 2; ++c) {
        e *= std::min(three(i, c), three(j, c)) - three(i, c) * three(j, c);
      }
      EXPECT_NEAR(g3(i, j), e, 1e-15);
    }
  }
}

TEST(GramMatrix, PositiveSemidefinite) {
  std::mt19937_64 g(5);
  for (int m = 2; m <= 4; ++m) {
    for (const auto& f : test_families(m)) {
      const GreenKernel k(f);
      for (int trial = 0; trial < 20; ++trial) {
        const int size = 2 + trial % 11;
        PointSet pts(m, size);
        for (int i = 0; i < size; ++i) pts.set_point(i, oracle::random_point(g, m, 0.01, 0.99));
        const Eigen::MatrixXd a = gram_matrix(k, pts);
        EXPECT_TRUE((a.array() == a.transpose().array()).all());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
      }
    }
  }
}

TEST(GramMatrix, ThreadCountDoesNotChangeEntries) {
  std::mt19937_64 g(9);
  const GreenKernel k(family_for_known_margins(SubsetMask::empty(3), 3));
  PointSet pts(3, 50);
  for (int i = 0; i < 50; ++i) pts.set_point(i, oracle::random_point(g, 3));
  const auto a1 = gram_matrix(k, pts, 1);
  const auto a4 = gram_matrix(k, pts, 4);
  EXPECT_TRUE((a1.array() == a4.array()).all());
}
