#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace gonb;
using namespace testing_support;

namespace {

std::vector<double> facet_lengths(const HPolytope& p) {
  std::vector<double> out;
  for (const auto& f : facets(p)) out.push_back(f.volume_dm1);
  std::sort(out.begin(), out.end());
  return out;
}

HPolytope from_raw(std::vector<std::pair<std::vector<double>, double>> raw, int d) {
  std::vector<HalfSpace> hs;
  for (auto& [n, b] : raw) hs.push_back({to_vector(n), b});
  return normalize(hs, d);
}

void expect_error(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << error_name(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace

// --- normalize ----------------------------------------------------------------

TEST(Normalize, DropsDominatedConstraint) {
  const auto p = from_raw({{{1}, 1}, {{1}, 2}, {{-1}, 0}}, 1);
  ASSERT_EQ(p.halfspaces().size(), 2u);
  EXPECT_DOUBLE_EQ(p.halfspaces()[0].normal[0] * p.halfspaces()[0].offset + p.halfspaces()[1].normal[0] * p.halfspaces()[1].offset, 1.0);
  EXPECT_TRUE(p.contains(make_vector({1.0})));
  EXPECT_FALSE(p.contains(make_vector({1.5})));
}

TEST(Normalize, CanonicalSquareIsUnchanged) {
  const auto p = from_raw({{{1, 0}, 1}, {{-1, 0}, 0}, {{0, 1}, 1}, {{0, -1}, 0}}, 2);
  ASSERT_EQ(p.halfspaces().size(), 4u);
  const auto q = normalize(p.halfspaces(), 2);
  ASSERT_EQ(q.halfspaces().size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(p.halfspaces()[i].normal, q.halfspaces()[i].normal);
    EXPECT_EQ(p.halfspaces()[i].offset, q.halfspaces()[i].offset);
  }
}

TEST(Normalize, ScalesNormalsAndMergesDuplicates) {
  const auto p = from_raw({{{2, 0}, 2}, {{3, 0}, 6}, {{-1, 0}, 0}, {{0, 1}, 1}, {{0, -5}, 0}}, 2);
  ASSERT_EQ(p.halfspaces().size(), 4u);
  for (const auto& h : p.halfspaces()) EXPECT_NEAR(h.normal.norm(), 1.0, 1e-15);
  EXPECT_NEAR(volume(p), 1.0, 1e-12);
}

TEST(Normalize, Errors) {
  expect_error(ErrorKind::UnboundedPolytope, [] { from_raw({{{1}, 1}}, 1); });
  expect_error(ErrorKind::UnboundedPolytope, [] { from_raw({{{1, 0}, 1}, {{-1, 0}, 0}, {{0, 1}, 1}}, 2); });
  expect_error(ErrorKind::EmptyPolytope, [] { from_raw({{{1}, 0}, {{-1}, -1}}, 1); });
  expect_error(ErrorKind::InvalidArgument, [] { from_raw({{{0, 0}, 1}}, 2); });
}

// --- vertices / volume / facets ----------------------------------------------

TEST(Vertices, Examples) {
  EXPECT_TRUE(same_point_set(vertices(unit_square()), {v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)}, 1e-12));
  EXPECT_TRUE(same_point_set(vertices(pentagon()), {v2(0, 0), v2(2, 0), v2(2, 2), v2(1, 2), v2(0, 1)}, 1e-12));
  EXPECT_TRUE(same_point_set(vertices(simplex2()), {v2(0, 0), v2(1, 0), v2(0, 1)}, 1e-12));
  // the same pentagon from an explicit H-representation
  const auto h = from_raw({{{0, -1}, 0}, {{1, 0}, 2}, {{0, 1}, 2}, {{-1, 1}, 1}, {{-1, 0}, 0}}, 2);
  EXPECT_TRUE(same_point_set(vertices(h), vertices(pentagon()), 1e-12));
}

TEST(Vertices, DegenerateThrows) {
  const auto seg = translate_intersection(unit_square(), v2(1, 0));  // the edge x = 1
  EXPECT_TRUE(seg.is_degenerate());
  expect_error(ErrorKind::DegeneratePolytope, [&] { vertices(seg); });
  const auto none = translate_intersection(unit_square(), v2(2, 0));
  EXPECT_TRUE(none.is_empty());
  expect_error(ErrorKind::EmptyPolytope, [&] { vertices(none); });
}

TEST(Volume, Examples) {
  EXPECT_NEAR(volume(unit_square()), 1.0, 1e-14);
  EXPECT_NEAR(volume(pentagon()), 3.5, 1e-14);
  EXPECT_NEAR(volume(pentagon()), shoelace(vertices(pentagon())), 1e-14);
  EXPECT_EQ(volume(translate_intersection(unit_square(), v2(3, 3))), 0.0);
  EXPECT_EQ(volume(translate_intersection(unit_square(), v2(1, 0))), 0.0);
  EXPECT_NEAR(volume(unit_cube(3)), 1.0, 1e-13);
  EXPECT_NEAR(volume(unit_cube(4)), 1.0, 1e-12);
}

TEST(Volume, MatchesShoelaceOnRandomPolygons) {
  auto g = rng(1);
  for (int k = 0; k < 50; ++k) {
    const auto p = random_polygon(g, 9, 2.0);
    EXPECT_NEAR(volume(p), shoelace(vertices(p)), 1e-12);
  }
}

TEST(Volume, RandomSimplexIn3dMatchesDeterminant) {
  auto g = rng(2);
  for (int k = 0; k < 20; ++k) {
    std::vector<Vector> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(random_vector(g, 3, 1.0));
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i) m.col(i) = pts[static_cast<std::size_t>(i + 1)] - pts[0];
    if (std::abs(m.determinant()) < 1e-3) continue;
    EXPECT_NEAR(volume(from_vertices(pts, 3)), std::abs(m.determinant()) / 6.0, 1e-12);
  }
}

TEST(Facets, Examples) {
  EXPECT_EQ(facet_lengths(unit_square()), std::vector<double>({1, 1, 1, 1}));
  const auto pl = facet_lengths(pentagon());
  const std::vector<double> want{1, 1, std::sqrt(2.0), 2, 2};
  ASSERT_EQ(pl.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(pl[i], want[i], 1e-12);
  const auto sl = facet_lengths(simplex2());
  ASSERT_EQ(sl.size(), 3u);
  EXPECT_NEAR(sl[0], 1.0, 1e-12);
  EXPECT_NEAR(sl[1], 1.0, 1e-12);
  EXPECT_NEAR(sl[2], std::sqrt(2.0), 1e-12);
  for (double a : facet_lengths(unit_cube(3))) EXPECT_NEAR(a, 1.0, 1e-12);
  for (double a : facet_lengths(unit_cube(4))) EXPECT_NEAR(a, 1.0, 1e-12);
}

TEST(Facets, VerticesLieOnSupportingHyperplane) {
  auto g = rng(3);
  for (int k = 0; k < 10; ++k) {
    const auto p = random_polytope(g, 3);
    EXPECT_EQ(facets(p).size(), p.halfspaces().size());
    for (const auto& f : facets(p)) {
      EXPECT_GT(f.volume_dm1, kGeomTol);
      for (const auto& v : f.vertices) EXPECT_NEAR(f.normal().dot(v), f.supporting.offset, kGeomTol);
    }
  }
}

TEST(Facets, DegenerateHasNone) {
  EXPECT_TRUE(facets(translate_intersection(unit_square(), v2(1, 0))).empty());
}

// --- parallel facets and symmetry ---------------------------------------------

TEST(ParallelFacet, Examples) {
  const auto sq = unit_square();
  const auto* bottom = find_facet(sq, v2(0, -1));
  ASSERT_NE(bottom, nullptr);
  const auto top = parallel_facet(sq, *bottom);
  ASSERT_TRUE(top.has_value());
  EXPECT_NEAR(top->normal()[1], 1.0, 1e-15);

  const auto tri = simplex2();
  const auto* hyp = find_facet(tri, v2(1, 1) / std::sqrt(2.0));
  ASSERT_NE(hyp, nullptr);
  EXPECT_FALSE(parallel_facet(tri, *hyp).has_value());

  const auto pent = pentagon();
  const auto* pb = find_facet(pent, v2(0, -1));
  ASSERT_NE(pb, nullptr);
  EXPECT_NEAR(pb->volume_dm1, 2.0, 1e-12);
  const auto pt = parallel_facet(pent, *pb);
  ASSERT_TRUE(pt.has_value());
  EXPECT_NEAR(pt->volume_dm1, 1.0, 1e-12);
}

TEST(ParallelFacet, ForeignFacetThrows) {
  const auto pent = pentagon();
  const auto* diag = find_facet(pent, v2(-1, 1) / std::sqrt(2.0));
  ASSERT_NE(diag, nullptr);
  const Facet f = *diag;
  expect_error(ErrorKind::FacetNotInPolytope, [&] { parallel_facet(unit_square(), f); });
}

TEST(Symmetry, PentagonWitness) {
  const auto r = is_symmetric(pentagon());
  EXPECT_FALSE(r.symmetric);
  ASSERT_TRUE(r.witness.has_value());
  ASSERT_TRUE(r.witness->second.has_value());
  EXPECT_NEAR(r.witness->first.volume_dm1, 2.0, 1e-12);
  EXPECT_NEAR(r.witness->second->volume_dm1, 1.0, 1e-12);
  EXPECT_NEAR(r.margin, 1.0, 1e-12);
}

TEST(Symmetry, TranslateIntersectionBecomesSquare) {
  const auto q = translate_intersection(pentagon(), v2(-1, -1));
  const auto r = is_symmetric(q);
  EXPECT_TRUE(r.symmetric);
  EXPECT_FALSE(r.witness.has_value());
  EXPECT_EQ(r.margin, 0.0);
}

TEST(Symmetry, SimplexHasEmptyParallel) {
  const auto r = is_symmetric(simplex2());
  EXPECT_FALSE(r.symmetric);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_FALSE(r.witness->second.has_value());
  EXPECT_GT(r.margin, 0.9);
  EXPECT_FALSE(is_symmetric(from_vertices({v2(0, 0), v2(1, 0), v2(0, 1)}, 2)).symmetric);
  EXPECT_TRUE(is_symmetric(unit_cube(3)).symmetric);
}

TEST(Symmetry, AgreesWithCentroidReflectionOracle) {
  auto g = rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int sym = 0;
  for (int k = 0; k < 60; ++k) {
    // symmetrized random polygon: hull of {c + x, c - x}; half of them perturbed
    std::vector<Vector> pts;
    const Vector c = v2(u(g), u(g));
    for (int i = 0; i < 4; ++i) {
      const Vector x = v2(u(g), u(g));
      pts.push_back(c + x);
      pts.push_back(c - x);
    }
    if (k % 2 == 1) pts.push_back(c + v2(1.5 + u(g), 1.5 + u(g)));
    const auto p = from_vertices(pts, 2);
    const bool oracle = centroid_reflection_symmetric(vertices(p), 1e-7);
    EXPECT_EQ(is_symmetric(p, 1e-9).symmetric, oracle) << "polygon " << k;
    sym += oracle ? 1 : 0;
  }
  EXPECT_GT(sym, 10);
  EXPECT_LT(sym, 50);
}

// --- translate intersection --------------------------------------------------

TEST(TranslateIntersection, Examples) {
  const auto q = translate_intersection(pentagon(), v2(-1, -1));
  EXPECT_TRUE(same_point_set(vertices(q), {v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)}, 1e-9));
  const auto p = pentagon();
  EXPECT_TRUE(same_point_set(vertices(translate_intersection(p, v2(0, 0))), vertices(p), 1e-12));
  const auto h = translate_intersection(unit_square(), v2(0.5, 0));
  EXPECT_TRUE(same_point_set(vertices(h), {v2(0.5, 0), v2(1, 0), v2(0.5, 1), v2(1, 1)}, 1e-12));
}

TEST(TranslateIntersection, MatchesConcatenatedHRep) {
  auto g = rng(5);
  for (int k = 0; k < 40; ++k) {
    const int d = k % 4 == 3 ? 3 : 2;
    const auto p = random_polytope(g, d);
    const Vector t = random_vector(g, d, 0.3);
    std::vector<HalfSpace> both = p.halfspaces();
    for (const auto& h : p.halfspaces()) both.push_back({h.normal, h.offset + h.normal.dot(t)});
    const auto q = translate_intersection(p, t);
    if (!q.is_full()) {
      EXPECT_ANY_THROW(normalize(both, d));
      continue;
    }
    const auto oracle = normalize(both, d);
    EXPECT_TRUE(same_point_set(vertices(q), vertices(oracle), kGeomTol)) << "case " << k;
  }
}

TEST(TranslateIntersection, ContainmentAndReflection) {
  auto g = rng(6);
  for (int k = 0; k < 40; ++k) {
    const auto p = random_polygon(g, 7);
    const Vector t = random_vector(g, 2, 0.6);
    const auto q = translate_intersection(p, t);
    if (!q.is_full()) continue;
    const auto pt = translate(p, t);
    for (const auto& v : vertices(q)) {
      EXPECT_TRUE(p.contains(v));
      EXPECT_TRUE(pt.contains(v));
    }
    std::vector<Vector> shifted;
    for (const auto& v : vertices(q)) shifted.push_back(v - t);
    EXPECT_TRUE(same_point_set(vertices(translate_intersection(p, -t)), shifted, kGeomTol));
  }
}

// --- Hausdorff distance -----------------------------------------------------------

TEST(Hausdorff, Examples) {
  const auto sq = unit_square();
  EXPECT_NEAR(hausdorff_distance(sq, sq), 0.0, 1e-15);
  EXPECT_NEAR(hausdorff_distance(sq, translate(sq, v2(0.5, 0))), 0.5, 1e-12);
  EXPECT_NEAR(hausdorff_distance(pentagon(), translate_intersection(pentagon(), v2(-1, -1))), std::sqrt(2.0), 1e-12);
}

TEST(Hausdorff, ThinTrianglesConvergeToSegment) {
  const Vector a = v2(0, 0), b = v2(2, 0), c = v2(1, 1);
  const auto seg = from_vertices({a, b}, 2);
  ASSERT_TRUE(seg.is_degenerate());
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {1, 2, 4, 8, 16, 64, 256}) {
    const Vector third = c / n + (1.0 - 1.0 / n) * a;
    const double dist = hausdorff_distance(from_vertices({a, b, third}, 2), seg);
    EXPECT_LT(dist, prev);
    EXPECT_NEAR(dist, 1.0 / n, 1e-12);
    prev = dist;
  }
  EXPECT_LT(prev, 0.01);
}

TEST(Hausdorff, MetricAxioms) {
  auto g = rng(7);
  for (int k = 0; k < 100; ++k) {
    const auto a = random_polygon(g, 6, 1.0, random_vector(g, 2, 1.0));
    const auto b = random_polygon(g, 6, 1.0, random_vector(g, 2, 1.0));
    const auto c = random_polygon(g, 6, 1.0, random_vector(g, 2, 1.0));
    const double ab = hausdorff_distance(a, b), bc = hausdorff_distance(b, c), ac = hausdorff_distance(a, c);
    EXPECT_NEAR(ab, hausdorff_distance(b, a), 1e-12);
    EXPECT_LE(ac, ab + bc + 1e-12);
    EXPECT_GT(ab, kGeomTol);
    EXPECT_NEAR(hausdorff_distance(a, a), 0.0, 1e-12);
  }
}

TEST(Hausdorff, EmptyThrows) {
  const auto none = translate_intersection(unit_square(), v2(5, 0));
  expect_error(ErrorKind::EmptyPolytope, [&] { hausdorff_distance(unit_square(), none); });
}

// --- facet convergence and margins ------------------------------------------------

TEST(FacetConvergence, PentagonAlongDiagonal) {
  const auto p = pentagon();
  const auto& base = facets(p);
  std::vector<double> prev(base.size(), std::numeric_limits<double>::infinity());
  for (int k = 1; k <= 64; k *= 2) {
    const Vector t = v2(1, 1) / (std::sqrt(2.0) * k);
    const auto q = translate_intersection(p, t);
    for (std::size_t i = 0; i < base.size(); ++i) {
      const auto* f = find_facet(q, base[i].normal());
      ASSERT_NE(f, nullptr);
      const double dh = hausdorff_distance(facet_polytope(*f), facet_polytope(base[i]));
      EXPECT_LE(dh, 2.0 * t.norm() + 1e-12);
      EXPECT_LE(dh, prev[i] + 1e-12);
      prev[i] = dh;
      EXPECT_LE(std::abs(f->volume_dm1 - base[i].volume_dm1), 2.0 * t.norm() + 1e-12);
    }
  }
  for (double x : prev) EXPECT_LT(x, 0.05);
}

TEST(Margin, Examples) {
  const auto p = pentagon();
  EXPECT_NEAR(nonsymmetry_margin(p, 0.0, 4), 1.0, 1e-12);
  const double m = nonsymmetry_margin(p, 0.25, 4);
  EXPECT_GT(m, 0.0);
  EXPECT_LE(m, 1.0 + 1e-12);
  EXPECT_NEAR(nonsymmetry_margin(p, std::sqrt(2.0), 4), 0.0, 1e-9);
  expect_error(ErrorKind::SymmetricInput, [] { nonsymmetry_margin(unit_square(), 0.1, 4); });
}

TEST(Margin, PersistenceRadiusIsPositive) {
  const auto p = pentagon();
  const double eps = persistence_radius(p, 1.0, 4);
  EXPECT_GT(eps, 0.0);
  EXPECT_GT(nonsymmetry_margin(p, eps, 4), 0.0);
  for (const auto& t : ball_samples(2, eps, 4)) EXPECT_FALSE(is_symmetric(translate_intersection(p, t)).symmetric);
}

TEST(BallSamples, InsideBallAndDeterministic) {
  const auto a = ball_samples(3, 0.7, 4);
  const auto b = ball_samples(3, 0.7, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_LE(a[i].norm(), 0.7 + 1e-12);
    EXPECT_EQ(a[i], b[i]);
  }
  EXPECT_EQ(a.front().norm(), 0.0);
}

// --- from_vertices -------------------------------------------------------------------

TEST(FromVertices, InteriorPointsIgnoredAndDegenerateInputs) {
  const auto p = from_vertices({v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1), v2(0.5, 0.5), v2(0.5, 0)}, 2);
  EXPECT_EQ(p.halfspaces().size(), 4u);
  EXPECT_TRUE(from_vertices({v2(0, 0), v2(1, 1), v2(2, 2)}, 2).is_degenerate());
  std::vector<Vector> flat{make_vector({0, 0, 0}), make_vector({1, 0, 0}), make_vector({0, 1, 0}), make_vector({1, 1, 0})};
  expect_error(ErrorKind::DegeneratePolytope, [&] { from_vertices(flat, 3); });
  const auto seg = from_vertices({make_vector({2.0}), make_vector({-1.0}), make_vector({0.5})}, 1);
  EXPECT_NEAR(volume(seg), 3.0, 1e-15);
}
