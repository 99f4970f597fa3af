#include <gtest/gtest.h>

#include "ovt/initialization.hpp"

using namespace ovt;

namespace {

const Rect kUnit{0, 0, 1, 1};

void expect_rect(const Rect& got, const Rect& want) {
  EXPECT_NEAR(got.x0, want.x0, 1e-12);
  EXPECT_NEAR(got.y0, want.y0, 1e-12);
  EXPECT_NEAR(got.width, want.width, 1e-12);
  EXPECT_NEAR(got.height, want.height, 1e-12);
}

}  // namespace

TEST(Squarify, OneChildIsTheWholeRect) {
  const std::vector<double> v{3.0};
  const auto r = squarify(v, {2, 3, 40, 10});
  ASSERT_EQ(r.size(), 1u);
  expect_rect(r[0], {2, 3, 40, 10});
}

TEST(Squarify, TwoEqualChildren) {
  const std::vector<double> v{1.0, 1.0};
  const auto r = squarify(v, kUnit);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].area(), 0.5, 1e-12);
  EXPECT_NEAR(std::max(r[0].width, r[0].height) / std::min(r[0].width, r[0].height), 2.0, 1e-12);
  expect_rect(r[0], {0, 0, 0.5, 1});
  expect_rect(r[1], {0.5, 0, 0.5, 1});
}

TEST(Squarify, FourEqualChildrenMakeQuadrants) {
  const std::vector<double> v{1, 1, 1, 1};
  const auto r = squarify(v, kUnit);
  for (const Rect& q : r) {
    EXPECT_NEAR(q.width, 0.5, 1e-12);
    EXPECT_NEAR(q.height, 0.5, 1e-12);
  }
}

TEST(Squarify, AreasAndTiling) {
  const std::vector<double> v{6, 6, 4, 3, 2, 2, 1};
  const Rect box{0, 0, 6, 4};
  const auto r = squarify(v, box);
  double total = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    EXPECT_NEAR(r[k].area(), 24.0 * v[k] / 24.0, 1e-9);
    EXPECT_GE(r[k].x0, -1e-12);
    EXPECT_LE(r[k].x1(), 6 + 1e-12);
    EXPECT_LE(r[k].y1(), 4 + 1e-12);
    total += r[k].area();
  }
  EXPECT_NEAR(total, 24.0, 1e-9);
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = i + 1; j < r.size(); ++j) {
      const double w = std::min(r[i].x1(), r[j].x1()) - std::max(r[i].x0, r[j].x0);
      const double h = std::min(r[i].y1(), r[j].y1()) - std::max(r[i].y0, r[j].y0);
      EXPECT_FALSE(w > 1e-9 && h > 1e-9) << i << " overlaps " << j;
    }
  }
}

TEST(Squarify, RejectsBadValues) {
  EXPECT_THROW(squarify(std::vector<double>{}, kUnit), InitializationError);
  EXPECT_THROW(squarify(std::vector<double>{1, 0}, kUnit), InitializationError);
}

TEST(RelPos, EncodeExamples) {
  const RelPos a = encode_relpos({0, 0, 0.5, 1}, kUnit);
  EXPECT_DOUBLE_EQ(a.rx, 0.25);
  EXPECT_DOUBLE_EQ(a.ry, 0.5);
  const RelPos b = encode_relpos(kUnit, kUnit);
  EXPECT_DOUBLE_EQ(b.rx, 0.5);
  EXPECT_DOUBLE_EQ(b.ry, 0.5);
  const RelPos c = encode_relpos({0.5, 0.5, 1, 1}, kUnit);
  EXPECT_DOUBLE_EQ(c.rx, 1.0);
  EXPECT_DOUBLE_EQ(c.ry, 1.0);
}

TEST(RelPos, DecodeExamples) {
  const Point p = decode_relpos({0.5, 0.5}, RectilinearPolygon::from_rect({10, 20, 30, 40}));
  EXPECT_DOUBLE_EQ(p.x, 25.0);
  EXPECT_DOUBLE_EQ(p.y, 40.0);
  const Point q = decode_relpos({0.25, 0.5}, RectilinearPolygon::from_rect({0, 0, 208, 296}));
  EXPECT_DOUBLE_EQ(q.x, 52.0);
  EXPECT_DOUBLE_EQ(q.y, 148.0);
  const RectilinearPolygon l({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  const Point r = decode_relpos({0.9, 0.9}, l);
  EXPECT_NEAR(r.x, 0.9, 1e-12);
  EXPECT_NEAR(r.y, 1.8, 1e-12);
}

TEST(RelPos, BoundaryDecodesInside) {
  const auto cell = RectilinearPolygon::from_rect(kUnit);
  for (const RelPos rp : {RelPos{0, 0}, RelPos{1, 1}, RelPos{0, 1}, RelPos{1, 0.5}}) {
    EXPECT_TRUE(contains(cell, decode_relpos(rp, cell)));
  }
}

TEST(RelPos, RoundTripOnRectangles) {
  const Rect parent{3, 7, 50, 20};
  const std::vector<double> v{5, 3, 2, 2, 1};
  for (const Rect& child : squarify(v, parent)) {
    const Point p = decode_relpos(encode_relpos(child, parent), RectilinearPolygon::from_rect(parent));
    EXPECT_NEAR(p.x, child.center().x, 1e-9);
    EXPECT_NEAR(p.y, child.center().y, 1e-9);
  }
}

TEST(Initialize, SingleChild) {
  const std::vector<double> v{4.0};
  const auto cell = RectilinearPolygon::from_rect({0, 0, 10, 6});
  const auto s = initialize_sites(v, cell);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s[0].position.x, 5.0);
  EXPECT_DOUBLE_EQ(s[0].position.y, 3.0);
  EXPECT_DOUBLE_EQ(s[0].weight, 30.0);
}

TEST(Initialize, TwoEqualChildren) {
  const std::vector<double> v{1.0, 1.0};
  const auto s = initialize_sites(v, RectilinearPolygon::from_rect(kUnit));
  EXPECT_DOUBLE_EQ(s[0].position.x, 0.25);
  EXPECT_DOUBLE_EQ(s[0].position.y, 0.5);
  EXPECT_DOUBLE_EQ(s[1].position.x, 0.75);
  EXPECT_DOUBLE_EQ(s[1].position.y, 0.5);
  EXPECT_DOUBLE_EQ(s[0].weight, 0.25);
  EXPECT_DOUBLE_EQ(s[1].weight, 0.25);
  EXPECT_EQ(s[1].id, 1);
  EXPECT_DOUBLE_EQ(s[1].target_value, 1.0);
}

TEST(Initialize, SqrtWeightOption) {
  const std::vector<double> v{1.0, 1.0};
  InitOptions o;
  o.weight = InitWeight::half_sqrt_area;
  const auto s = initialize_sites(v, RectilinearPolygon::from_rect({0, 0, 4, 2}), o);
  EXPECT_DOUBLE_EQ(s[0].weight, 0.5 * std::sqrt(4.0));
}

TEST(Initialize, SitesInsideConcaveParent) {
  const RectilinearPolygon l({{0, 0}, {20, 0}, {20, 10}, {10, 10}, {10, 20}, {0, 20}});
  const std::vector<double> v{5, 4, 3, 3, 2, 1, 1, 1};
  for (InitMode m : {InitMode::squarified, InitMode::random}) {
    InitOptions o;
    o.mode = m;
    o.seed = 12;
    for (const Site& s : initialize_sites(v, l, o)) EXPECT_TRUE(contains(l, s.position));
  }
}

TEST(Initialize, RandomModeIsSeeded) {
  const std::vector<double> v{1, 2, 3, 4};
  const auto cell = RectilinearPolygon::from_rect({0, 0, 100, 100});
  InitOptions o;
  o.mode = InitMode::random;
  o.seed = 99;
  o.epsilon = 0.01;
  const auto a = initialize_sites(v, cell, o);
  const auto b = initialize_sites(v, cell, o);
  o.seed = 100;
  const auto c = initialize_sites(v, cell, o);
  for (std::size_t k = 0; k < v.size(); ++k) {
    EXPECT_EQ(a[k].position, b[k].position);
    EXPECT_DOUBLE_EQ(a[k].weight, 0.01);
  }
  EXPECT_NE(a[0].position, c[0].position);
}

TEST(Initialize, NoChildrenIsAnError) {
  EXPECT_THROW(initialize_sites(std::vector<double>{}, RectilinearPolygon::from_rect(kUnit)),
               InitializationError);
}
