#include <gtest/gtest.h>

#include "hwid/canny.hpp"
#include "hwid/morphology.hpp"
#include "oracles.hpp"

using namespace hwid;

TEST(Canny, ConstantImageHasNoEdges) {
  EXPECT_EQ(canny_edges(GrayImage(40, 30, 128)).count_foreground(), 0u);
}

TEST(Canny, RejectsInvertedThresholds) {
  const GrayImage img(8, 8, 0);
  EXPECT_THROW(canny_edges(img, {1.0, 100.0, 50.0}), std::invalid_argument);
  EXPECT_THROW(canny_edges(img, {1.0, -1.0, 50.0}), std::invalid_argument);
  EXPECT_NO_THROW(canny_edges(img, {1.0, 50.0, 50.0}));
}

TEST(Canny, VerticalStepGivesOneThinLine) {
  const int step = 20;
  GrayImage img(40, 32, 255);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < step; ++x) img(x, y) = 0;
  const BinaryImage edges = canny_edges(img);
  for (int y = 0; y < 32; ++y) {
    int count = 0;
    for (int x = 0; x < 40; ++x) {
      if (!edges.foreground(x, y)) continue;
      ++count;
      EXPECT_LE(std::abs(x - step), 1) << "row " << y;
    }
    EXPECT_EQ(count, 1) << "row " << y;
  }
}

TEST(Canny, RectangleOutlineTracksPerimeter) {
  GrayImage img(60, 50, 230);
  const BoundingBox box{15, 12, 44, 37};
  for (int y = box.y_min; y <= box.y_max; ++y)
    for (int x = box.x_min; x <= box.x_max; ++x) img(x, y) = 20;
  const BinaryImage edges = canny_edges(img);

  BinaryImage perimeter(60, 50);
  for (int x = box.x_min; x <= box.x_max; ++x) perimeter(x, box.y_min) = perimeter(x, box.y_max) = 1;
  for (int y = box.y_min; y <= box.y_max; ++y) perimeter(box.x_min, y) = perimeter(box.x_max, y) = 1;
  const BinaryImage band = dilate(perimeter, StructuringElement::rect(3, 3));
  const BinaryImage edge_band = dilate(edges, StructuringElement::rect(3, 3));
  for (int y = 0; y < 50; ++y) {
    for (int x = 0; x < 60; ++x) {
      if (edges.foreground(x, y)) {
        EXPECT_TRUE(band.foreground(x, y)) << x << "," << y;
      }
      // Every straight perimeter pixel away from corners has an edge nearby.
      const bool corner = (x < box.x_min + 3 || x > box.x_max - 3) && (y < box.y_min + 3 || y > box.y_max - 3);
      if (perimeter.foreground(x, y) && !corner) {
        EXPECT_TRUE(edge_band.foreground(x, y)) << x << "," << y;
      }
    }
  }
}

TEST(Canny, WeakEdgesSurviveOnlyWhenLinkedToStrong) {
  // Left step is strong, right step is weak and isolated.
  GrayImage img(60, 20, 200);
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 15; ++x) img(x, y) = 0;
    for (int x = 45; x < 60; ++x) img(x, y) = 170;
  }
  const BinaryImage edges = canny_edges(img, {1.0, 40.0, 150.0});
  bool left = false, right = false;
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 60; ++x) {
      if (!edges.foreground(x, y)) continue;
      (x < 30 ? left : right) = true;
    }
  }
  EXPECT_TRUE(left);
  EXPECT_FALSE(right);
  const BinaryImage permissive = canny_edges(img, {1.0, 40.0, 40.0});
  EXPECT_GT(permissive.count_foreground(), edges.count_foreground());
}

TEST(Canny, DeterministicOnNoise) {
  RandomStream rng(3);
  const GrayImage img = oracle::random_gray(rng, 50, 40);
  EXPECT_EQ(canny_edges(img), canny_edges(img));
}
