#include <gtest/gtest.h>

#include "ovt/hierarchy.hpp"

using namespace ovt;

TEST(Hierarchy, ParsesAndSums) {
  const auto root = parse_hierarchy(
      R"({"name":"root","children":[{"name":"a","value":1},{"name":"b","value":3}]})");
  EXPECT_EQ(root.name, "root");
  EXPECT_DOUBLE_EQ(root.value, 4.0);
  ASSERT_EQ(root.children.size(), 2u);
  EXPECT_EQ(root.children[1].name, "b");
}

TEST(Hierarchy, SingleLeaf) {
  const auto root = parse_hierarchy(R"({"name":"leaf","value":2})");
  EXPECT_TRUE(root.is_leaf());
  EXPECT_DOUBLE_EQ(root.value, 2.0);
}

TEST(Hierarchy, RejectsBadLeaves) {
  EXPECT_THROW(parse_hierarchy(R"({"name":"x","value":-1})"), HierarchyError);
  EXPECT_THROW(parse_hierarchy(R"({"name":"x","value":0})"), HierarchyError);
  EXPECT_THROW(parse_hierarchy(R"({"name":"x"})"), HierarchyError);
  EXPECT_THROW(parse_hierarchy(R"({"name":"x","value":"3"})"), HierarchyError);
}

TEST(Hierarchy, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_hierarchy(R"({"name":"x","children":[]})"), HierarchyError);
  EXPECT_THROW(parse_hierarchy(R"({"name":"x","children":)"), HierarchyError);
  EXPECT_THROW(parse_hierarchy(R"([1,2])"), HierarchyError);
  EXPECT_THROW(parse_hierarchy(R"({"name":"x","children":{"a":1}})"), HierarchyError);
}

TEST(Hierarchy, ErrorNamesTheNodePath) {
  try {
    parse_hierarchy(R"({"name":"root","children":[{"name":"a","children":[{"name":"bad","value":-2}]}]})");
    FAIL() << "expected an error";
  } catch (const HierarchyError& e) {
    EXPECT_NE(std::string(e.what()).find("root/a/bad"), std::string::npos) << e.what();
  }
}

TEST(Hierarchy, InternalValuesAreRecomputed) {
  const auto root = parse_hierarchy(
      R"({"name":"r","value":100,"children":[{"name":"a","value":1},
          {"name":"m","value":50,"children":[{"name":"b","value":2},{"name":"c","value":3}]}]})");
  EXPECT_DOUBLE_EQ(root.value, 6.0);
  EXPECT_DOUBLE_EQ(root.children[1].value, 5.0);
}

TEST(Hierarchy, AggregateExamples) {
  HierarchyNode root{"r", 0.0, {{"a", 1.0, {}, {}, {}}, {"b", 2.0, {}, {}, {}}, {"c", 3.0, {}, {}, {}}}, {}, {}};
  EXPECT_DOUBLE_EQ(aggregate_values(root).value, 6.0);

  HierarchyNode single{"s", 7.0, {}, {}, {}};
  EXPECT_DOUBLE_EQ(aggregate_values(single).value, 7.0);
}

TEST(Hierarchy, AggregationIsIdempotent) {
  auto root = parse_hierarchy(
      R"({"name":"r","children":[{"name":"a","value":0.1},{"name":"m","children":[{"name":"b","value":0.2},{"name":"c","value":0.3}]}]})");
  const auto once = aggregate_values(root);
  const auto twice = aggregate_values(once);
  EXPECT_EQ(once.value, twice.value);
  EXPECT_EQ(once.children[1].value, twice.children[1].value);
  EXPECT_EQ(once.children[1].value, 0.2 + 0.3);
}

TEST(Hierarchy, CountsAndDepth) {
  const auto root = parse_hierarchy(
      R"({"name":"r","children":[{"name":"a","value":1},{"name":"m","children":[{"name":"b","value":2},{"name":"c","value":3}]}]})");
  EXPECT_EQ(leaf_count(root), 3u);
  EXPECT_EQ(depth(root), 3u);
}
