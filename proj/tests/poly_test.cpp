#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "zforge/errors.hpp"
#include "zforge/poly.hpp"
#include "support/vanishing_oracle.hpp"

namespace zforge {
namespace {

using testsupport::ipow;
using testsupport::random_points;
using testsupport::vanish_by_rank;

Monomial mono(std::vector<std::uint32_t> e) { return Monomial{std::move(e)}; }

TEST(MonomialCount, Examples) {
  EXPECT_EQ(monomial_count(2, 3), 10u);
  for (std::uint32_t d = 0; d < 10; ++d) EXPECT_EQ(monomial_count(1, d), d + 1);
  EXPECT_EQ(monomial_count(3, 0), 1u);
  for (std::size_t nv = 1; nv <= 4; ++nv) {
    for (std::uint32_t d = 0; d <= 5; ++d) EXPECT_EQ(monomial_basis(nv, d).size(), monomial_count(nv, d));
  }
}

TEST(MonomialBasis, GradedLexOrder) {
  const auto b = monomial_basis(2, 2);
  const std::vector<Monomial> expected = {mono({0, 0}), mono({1, 0}), mono({0, 1}),
                                          mono({2, 0}), mono({1, 1}), mono({0, 2})};
  EXPECT_EQ(b, expected);
  GradedLexLess less;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) EXPECT_TRUE(less(b[i], b[i + 1]));
}

TEST(MultiPoly, CanonicalForm) {
  const auto f5 = field_make(5, 1);
  MultiPoly f(f5, 2, 2);
  f.set(mono({1, 0}), 3);
  f.set(mono({1, 0}), 0);
  EXPECT_TRUE(f.is_zero());
  EXPECT_EQ(f, MultiPoly(f5, 2, 2));
  EXPECT_THROW(f.set(mono({2, 1}), 1), InvalidArgument);
  EXPECT_THROW(f.set(mono({1}), 1), ArityMismatch);
  const std::vector<Value> dense{1, 0, 2, 0, 0, 4};
  EXPECT_EQ(MultiPoly::from_dense(f5, 2, 2, dense).dense(), dense);
  EXPECT_EQ(MultiPoly::from_dense(f5, 2, 2, dense).terms().size(), 3u);
}

TEST(PolyEval, Examples) {
  const auto f5 = field_make(5, 1);
  MultiPoly f(f5, 2, 2);
  f.set(mono({2, 0}), 1);
  f.set(mono({0, 1}), 2);
  const std::vector<FieldElem> pt{make_elem(f5, 3), make_elem(f5, 1)};
  EXPECT_EQ(poly_eval(f, pt).value, 1u);
  EXPECT_EQ(poly_eval(MultiPoly(f5, 2, 2), pt).value, 0u);

  // X1 + X2 over F_2 at the F_4 point (x, x)
  const auto f2 = field_make(2, 1);
  const auto f4 = field_make(2, 2);
  MultiPoly g(f2, 2, 1);
  g.set(mono({1, 0}), 1);
  g.set(mono({0, 1}), 1);
  const std::vector<FieldElem> ext{make_elem(f4, 2), make_elem(f4, 2)};
  const auto v = poly_eval(g, ext);
  EXPECT_EQ(v.value, 0u);
  EXPECT_TRUE(same_field(v.field, f4));
}

TEST(PolyEval, ErrorPaths) {
  const auto f5 = field_make(5, 1);
  MultiPoly f(f5, 2, 1);
  const std::vector<FieldElem> short_pt{make_elem(f5, 1)};
  EXPECT_THROW(poly_eval(f, short_pt), ArityMismatch);
  const auto f7 = field_make(7, 1);
  const std::vector<FieldElem> wrong{make_elem(f7, 1), make_elem(f7, 1)};
  EXPECT_THROW(poly_eval(f, wrong), IncompatibleField);
  // coefficients in a non-prime field cannot be embedded in another extension
  MultiPoly h(field_make(2, 2), 1, 1);
  const std::vector<FieldElem> f16{make_elem(field_make(2, 4), 3)};
  EXPECT_THROW(poly_eval(h, f16), IncompatibleField);
}

TEST(PolySub, Examples) {
  const auto f3 = field_make(3, 1);
  Rng rng(5);
  const auto f = poly_random(f3, 2, 2, rng);
  EXPECT_TRUE(poly_sub(f, f).is_zero());
  MultiPoly a(f3, 1, 1), b(f3, 1, 1);
  a.set(mono({1}), 1);
  a.set(mono({0}), 1);
  b.set(mono({1}), 1);
  MultiPoly one(f3, 1, 1);
  one.set(mono({0}), 1);
  EXPECT_EQ(poly_sub(a, b), one);
  EXPECT_THROW(poly_sub(a, MultiPoly(field_make(5, 1), 1, 1)), SpecMismatch);
}

TEST(PolyEval, HomomorphismAtRandomPoints) {
  struct Case {
    Field coeff;
    Field points;
  };
  const std::vector<Case> cases = {
      {field_make(2, 1), field_make(2, 1)}, {field_make(3, 1), field_make(3, 1)},
      {field_make(5, 1), field_make(5, 1)}, {field_make(7, 1), field_make(7, 1)},
      {field_make(2, 2), field_make(2, 2)}, {field_make(3, 2), field_make(3, 2)},
      {field_make(2, 1), field_make(2, 3)}, {field_make(5, 1), field_make(5, 2)},
  };
  Rng rng(2024);
  for (const auto& c : cases) {
    const auto f = poly_random(c.coeff, 3, 3, rng);
    const auto g = poly_random(c.coeff, 3, 3, rng);
    const auto sum = poly_add(f, g);
    const auto diff = poly_sub(f, g);
    const FieldSpec& pf = *c.points;
    for (int i = 0; i < 100; ++i) {
      std::vector<Value> x(3);
      for (auto& v : x) v = static_cast<Value>(rng.below(pf.order()));
      const Value fx = poly_eval(f, pf, x);
      const Value gx = poly_eval(g, pf, x);
      ASSERT_EQ(poly_eval(sum, pf, x), pf.add(fx, gx));
      ASSERT_EQ(poly_eval(diff, pf, x), pf.sub(fx, gx));
    }
  }
}

TEST(PolyRandom, DeterministicUnderSeed) {
  const auto f7 = field_make(7, 1);
  Rng a(99), b(99);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(poly_random(f7, 2, 3, a), poly_random(f7, 2, 3, b));
}

TEST(PolyRandom, SampleSpaceOfF2LinearBivariate) {
  const auto f2 = field_make(2, 1);
  EXPECT_EQ(ipow(2, monomial_count(2, 1)), 8u);
  Rng rng(1);
  std::set<std::vector<Value>> seen;
  for (int i = 0; i < 2000; ++i) seen.insert(poly_random(f2, 2, 1, rng).dense());
  EXPECT_EQ(seen.size(), 8u);
}

TEST(PolyRandom, CoefficientHistogramIsUniform) {
  const auto f5 = field_make(5, 1);
  Rng rng(12345);
  constexpr int kDraws = 100000;
  std::vector<std::uint64_t> hist(5, 0);
  for (int i = 0; i < kDraws; ++i) {
    // a single coefficient per draw keeps the counts independent
    hist[poly_random(f5, 1, 0, rng).dense()[0]]++;
  }
  const double expected = kDraws / 5.0;
  const double sigma = std::sqrt(kDraws * 0.2 * 0.8);
  double chi2 = 0;
  for (auto h : hist) {
    EXPECT_LT(std::abs(static_cast<double>(h) - expected), 3 * sigma);
    chi2 += (h - expected) * (h - expected) / expected;
  }
  // 4 degrees of freedom; 18.47 is the 0.999 quantile
  EXPECT_LT(chi2, 18.47);
}

TEST(PolyRandom, BudgetExceeded) {
  Rng rng(0);
  EXPECT_EQ(monomial_count(3, 6), 84u);
  EXPECT_THROW(poly_random(field_make(2, 1), 3, 6, rng), BudgetExceeded);
  EXPECT_NO_THROW(poly_random(field_make(2, 1), 3, 5, rng));
}

TEST(CommonZeros, Examples) {
  const auto f5 = field_make(5, 1);
  EXPECT_EQ(common_zeros({}, f5, 2).size(), 25u);

  MultiPoly sq(f5, 1, 2);
  sq.set(mono({2}), 1);
  sq.set(mono({0}), 4);  // X^2 - 1
  const std::vector<MultiPoly> one{sq};
  const auto z = common_zeros(one, f5, 1);
  ASSERT_EQ(z.size(), 2u);
  EXPECT_EQ(z[0][0], 1u);
  EXPECT_EQ(z[1][0], 4u);

  MultiPoly a(f5, 2, 1), b(f5, 2, 1);
  a.set(mono({1, 0}), 1);
  a.set(mono({0, 1}), 1);
  b.set(mono({1, 0}), 1);
  b.set(mono({0, 1}), 4);
  const std::vector<MultiPoly> two{a, b};
  const auto origin = common_zeros(two, f5, 2);
  ASSERT_EQ(origin.size(), 1u);
  EXPECT_EQ(origin.points()[0], (std::vector<Value>{0, 0}));

  EXPECT_THROW(common_zeros({}, f5, 11), BudgetExceeded);
}

TEST(CommonZeros, RootBoundForUnivariates) {
  for (std::uint64_t q : {2, 3, 5, 7}) {
    const auto f = field_make(q, 1);
    for (std::uint64_t code = 1; code < ipow(q, 5); ++code) {
      std::vector<Value> c(5);
      std::uint64_t r = code;
      std::uint32_t degree = 0;
      for (std::uint32_t i = 0; i < 5; ++i) {
        c[i] = static_cast<Value>(r % q);
        r /= q;
        if (c[i] != 0) degree = i;
      }
      const std::vector<MultiPoly> one{MultiPoly::from_dense(f, 1, 4, c)};
      ASSERT_LE(common_zeros(one, f, 1).size(), degree);
    }
  }
}

TEST(PointSet, RejectsDuplicates) {
  const auto f3 = field_make(3, 1);
  EXPECT_THROW(PointSet(f3, 2, {{0, 1}, {0, 1}}), DuplicatePoints);
  EXPECT_THROW(PointSet(f3, 2, {{0, 3}}), InvalidArgument);
}

TEST(VanishExact, HandPickedF2Cases) {
  const auto f2 = field_make(2, 1);
  // Direct enumeration of a + b X1 + c X2.
  auto brute = [&](const std::vector<std::vector<Value>>& pts) {
    std::uint64_t hits = 0;
    for (Value a = 0; a < 2; ++a)
      for (Value b = 0; b < 2; ++b)
        for (Value c = 0; c < 2; ++c) {
          bool all = true;
          for (const auto& p : pts) all = all && ((a + b * p[0] + c * p[1]) % 2 == 0);
          hits += all;
        }
    return hits;
  };
  const std::vector<std::vector<Value>> diag{{0, 0}, {1, 1}};
  const std::vector<std::vector<Value>> col{{0, 0}, {0, 1}};
  ASSERT_EQ(brute(diag), 2u);
  ASSERT_EQ(brute(col), 2u);

  const auto r1 = vanish_probability_exact(PointSet(f2, 2, diag), f2, 2, 1);
  EXPECT_EQ(r1.probability, Fraction::make(1, 4));
  EXPECT_EQ(r1.vanishing, 2u);
  EXPECT_EQ(r1.visited, 8u);
  const auto r2 = vanish_probability_exact(PointSet(f2, 2, col), f2, 2, 1);
  EXPECT_EQ(r2.probability, Fraction::make(1, 4));
}

TEST(VanishExact, OriginConstrainsOnlyTheConstant) {
  for (std::uint64_t q : {2, 3, 5}) {
    const auto f = field_make(q, 1);
    for (std::size_t nv : {1, 2}) {
      const auto r = vanish_probability_exact(PointSet(f, nv, {std::vector<Value>(nv, 0)}), f, nv, 2);
      EXPECT_EQ(r.probability, Fraction::make(1, q));
    }
  }
}

TEST(VanishExact, VisitsExactlyQToTheMonomialCount) {
  for (std::uint64_t q : {2, 3}) {
    const auto f = field_make(q, 1);
    for (std::uint32_t d : {1, 2}) {
      const auto r = vanish_probability_exact(PointSet(f, 2, {{1, 1}}), f, 2, d);
      EXPECT_EQ(r.visited, ipow(q, monomial_count(2, d)));
    }
  }
}

TEST(VanishExact, MatchesLinearAlgebraAndTheBound) {
  // Grid q in {2,3,5}, nvars in {1,2}, d in {1,2,3}, m in {1,2,3} restricted
  // to q > C(m,2), d >= m - 1; three point sets per configuration in each of
  // F_q and F_{q^2}.
  Rng rng(77);
  for (std::uint64_t q : {2, 3, 5}) {
    const auto coeff = field_make(q, 1);
    const auto ext = field_make(q, 2);
    for (std::size_t nv : {1, 2}) {
      for (std::uint32_t d : {1, 2, 3}) {
        for (std::size_t m : {1, 2, 3}) {
          if (q <= m * (m - 1) / 2 || d + 1 < m) continue;
          if (ipow(q, monomial_count(nv, d)) > kDefaultEnumerationBudget) continue;
          for (const Field& pf : {coeff, ext}) {
            if (ipow(pf->order(), nv) < m) continue;
            for (int rep = 0; rep < 3; ++rep) {
              const auto pts = random_points(pf, nv, m, rng);
              const auto exact = vanish_probability_exact(pts, coeff, nv, d);
              ASSERT_EQ(exact.probability, vanish_by_rank(pts, coeff, nv, d));
              ASSERT_LE(exact.probability, Fraction::make(1, ipow(q, m)));
            }
          }
        }
      }
    }
  }
}

TEST(VanishExact, BudgetExceeded) {
  const auto f5 = field_make(5, 1);
  EXPECT_THROW(vanish_probability_exact(PointSet(f5, 2, {{0, 0}}), f5, 2, 4), BudgetExceeded);
}

TEST(VanishMonteCarlo, RejectsZeroTrials) {
  const auto f2 = field_make(2, 1);
  EXPECT_THROW(vanish_probability_mc(PointSet(f2, 2, {{0, 0}}), f2, 2, 1, 0, Rng(1)), InvalidArgument);
}

TEST(VanishMonteCarlo, AgreesWithExactOnF2) {
  const auto f2 = field_make(2, 1);
  const PointSet pts(f2, 2, {{0, 0}, {1, 1}});
  const auto est = vanish_probability_mc(pts, f2, 2, 1, 100000, Rng(3));
  const double exact = vanish_probability_exact(pts, f2, 2, 1).probability.to_double();
  const double sigma = std::sqrt(exact * (1 - exact) / 100000.0);
  EXPECT_LT(std::abs(est.estimate - exact), 5 * sigma);
}

TEST(VanishMonteCarlo, RespectsTheBoundForQ7) {
  const auto f7 = field_make(7, 1);
  const PointSet pts(f7, 2, {{1, 2}, {3, 5}, {6, 0}});
  constexpr std::uint64_t kTrials = 1'000'000;
  const auto est = vanish_probability_mc(pts, f7, 2, 2, kTrials, Rng(11));
  const double bound = 1.0 / 343.0;
  const double sigma = std::sqrt(bound * (1 - bound) / kTrials);
  EXPECT_LE(est.estimate, bound + 5 * sigma);
  EXPECT_EQ(est.trials, kTrials);
}

TEST(VanishMonteCarlo, IndependentOfThreadCount) {
  const auto f3 = field_make(3, 1);
  const PointSet pts(f3, 2, {{0, 1}, {2, 2}});
  setenv("ZFORGE_THREADS", "1", 1);
  const auto one = vanish_probability_mc(pts, f3, 2, 2, 20000, Rng(8));
  setenv("ZFORGE_THREADS", "4", 1);
  const auto four = vanish_probability_mc(pts, f3, 2, 2, 20000, Rng(8));
  unsetenv("ZFORGE_THREADS");
  EXPECT_EQ(one.hits, four.hits);
}

}  // namespace
}  // namespace zforge
