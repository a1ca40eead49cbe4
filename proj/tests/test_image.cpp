#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "hwid/image_io.hpp"
#include "hwid/resample.hpp"
#include "oracles.hpp"

using namespace hwid;
namespace fs = std::filesystem;

TEST(Raster, RejectsEmptyAndMismatchedData) {
  EXPECT_THROW(GrayImage(0, 5), std::invalid_argument);
  EXPECT_THROW(GrayImage(3, 3, std::vector<std::uint8_t>(8)), std::invalid_argument);
  const GrayImage img(4, 2, std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6, 7, 8});
  EXPECT_EQ(img(3, 1), 8);
  EXPECT_EQ(img.row(1)[0], 5);
  EXPECT_EQ(img.size(), 8u);
}

TEST(Raster, InvertAndRender) {
  BinaryImage m(3, 1);
  m(1, 0) = 1;
  EXPECT_EQ(invert(m).count_foreground(), 2u);
  const GrayImage g = to_gray(m);
  EXPECT_EQ(g(0, 0), 255);
  EXPECT_EQ(g(1, 0), 0);
}

TEST(Resize, IdentityAtSameSize) {
  RandomStream rng(1);
  const GrayImage img = oracle::random_gray(rng, 224, 224);
  EXPECT_EQ(resize_bilinear(img, 224, 224), img);
}

TEST(Resize, ConstantStaysConstant) {
  const GrayImage img(13, 7, 91);
  for (auto [w, h] : {std::pair{1, 1}, {40, 3}, {5, 90}}) EXPECT_EQ(resize_bilinear(img, w, h), GrayImage(w, h, 91));
}

TEST(Resize, TwoPixelRowUpsamplesByHandComputedWeights) {
  const GrayImage img(2, 1, std::vector<std::uint8_t>{0, 100});
  const GrayImage out = resize_bilinear(img, 4, 1);
  // Centers map to -0.25, 0.25, 0.75, 1.25 in source space; ends clamp.
  EXPECT_EQ(out, GrayImage(4, 1, std::vector<std::uint8_t>({0, 25, 75, 100})));
}

TEST(Resize, PreservesRange) {
  RandomStream rng(2);
  for (int i = 0; i < 30; ++i) {
    GrayImage img(rng.between(1, 30), rng.between(1, 30));
    const int lo = rng.between(0, 200), hi = rng.between(lo, 255);
    for (auto& v : img.pixels()) v = static_cast<std::uint8_t>(rng.between(lo, hi));
    const GrayImage out = resize_bilinear(img, rng.between(1, 60), rng.between(1, 60));
    const auto [mn, mx] = std::minmax_element(img.pixels().begin(), img.pixels().end());
    for (auto v : out.pixels()) {
      EXPECT_GE(v, *mn);
      EXPECT_LE(v, *mx);
    }
  }
  EXPECT_THROW(resize_bilinear(GrayImage(2, 2), 0, 3), std::invalid_argument);
}

TEST(Crop, PointwiseCopy) {
  RandomStream rng(4);
  const GrayImage img = oracle::random_gray(rng, 31, 22);
  EXPECT_EQ(crop(img, img.bounds()), img);
  EXPECT_EQ(crop(img, BoundingBox{5, 6, 5, 6}), GrayImage(1, 1, img(5, 6)));
  for (int i = 0; i < 50; ++i) {
    const int x0 = rng.between(0, 30), y0 = rng.between(0, 21);
    const BoundingBox b{x0, y0, rng.between(x0, 30), rng.between(y0, 21)};
    const GrayImage c = crop(img, b);
    for (int y = 0; y < c.height(); ++y)
      for (int x = 0; x < c.width(); ++x) ASSERT_EQ(c(x, y), img(b.x_min + x, b.y_min + y));
  }
  EXPECT_THROW(crop(img, BoundingBox{0, 0, 31, 3}), std::out_of_range);
  EXPECT_THROW(crop(img, BoundingBox{-1, 0, 3, 3}), std::out_of_range);
  EXPECT_THROW(crop(img, BoundingBox{4, 0, 3, 3}), std::out_of_range);
}

TEST(Crop, MaskKeepsThreshold) {
  BinaryImage m(4, 4);
  m.otsu_threshold = 77;
  EXPECT_EQ(crop(m, BoundingBox{1, 1, 2, 2}).otsu_threshold, std::optional<std::uint8_t>(77));
}

TEST(Pad, CentersOnWhiteSquare) {
  const GrayImage img(4, 2, 0);
  const GrayImage sq = pad_to_square(img, 255);
  ASSERT_EQ(sq.width(), 4);
  ASSERT_EQ(sq.height(), 4);
  for (int x = 0; x < 4; ++x) {
    EXPECT_EQ(sq(x, 0), 255);
    EXPECT_EQ(sq(x, 1), 0);
    EXPECT_EQ(sq(x, 2), 0);
    EXPECT_EQ(sq(x, 3), 255);
  }
}

TEST(ImageIo, PngRoundTripIsExact) {
  RandomStream rng(6);
  const GrayImage img = oracle::random_gray(rng, 37, 19);
  const auto bytes = encode_png(img);
  EXPECT_EQ(decode_image(bytes, "mem"), img);
  EXPECT_EQ(encode_png(img), bytes);
}

TEST(ImageIo, ReadsBinaryPgmWithCommentsAndMaxval) {
  const std::string header = "P5\n# a comment\n3 2\n# another\n15\n";
  std::vector<unsigned char> bytes(header.begin(), header.end());
  for (unsigned char v : {0, 5, 15, 15, 10, 0}) bytes.push_back(v);
  const GrayImage img = decode_image(bytes, "mem.pgm");
  EXPECT_EQ(img.width(), 3);
  EXPECT_EQ(img.height(), 2);
  EXPECT_EQ(img(0, 0), 0);
  EXPECT_EQ(img(1, 0), 85);
  EXPECT_EQ(img(2, 0), 255);
  EXPECT_EQ(img(1, 1), 170);
}

TEST(ImageIo, CorruptInputsRaiseImageIoError) {
  const std::vector<unsigned char> junk = {'n', 'o', 't', ' ', 'a', 'n', ' ', 'i', 'm', 'a', 'g', 'e'};
  EXPECT_THROW(decode_image(junk, "junk"), ImageIoError);
  auto png = encode_png(GrayImage(20, 20, 9));
  png.resize(png.size() / 2);
  EXPECT_THROW(decode_image(png, "truncated.png"), ImageIoError);
  const std::string short_pgm = "P5\n4 4\n255\n\x01\x02";
  EXPECT_THROW(decode_image(std::vector<unsigned char>(short_pgm.begin(), short_pgm.end()), "short.pgm"),
               ImageIoError);
  EXPECT_THROW(read_image("/nonexistent/dir/file.png"), ImageIoError);
}

TEST(ImageIo, WritesAndReadsFiles) {
  const fs::path dir = fs::temp_directory_path() / "hwid_test_image_io";
  fs::create_directories(dir);
  const GrayImage img(5, 4, 123);
  write_png(dir / "a.png", img);
  EXPECT_EQ(read_image(dir / "a.png"), img);
  fs::remove_all(dir);
}
