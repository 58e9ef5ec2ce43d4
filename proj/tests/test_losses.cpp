#include <cmath>

#include <gtest/gtest.h>

#include "articugeo/recon_losses.hpp"

using namespace articugeo;

TEST(Photometric, ConstantImagesOracle) {
  // Flat patches: zero variance, so SSIM = (2 mx my + c1) / (mx^2 + my^2 + c1).
  const ImageBuffer a(6, 5, 1, 0.2);
  const ImageBuffer b(6, 5, 1, 0.5);
  const PixelMask all(6, 5, 1);
  const double c1 = 1e-4;
  const double ssim = (2 * 0.2 * 0.5 + c1) / (0.04 + 0.25 + c1);
  const double expected = 0.15 * 0.3 + 0.85 * (1.0 - ssim) / 2.0;
  const auto pe = photometric_error(a, b, all);
  EXPECT_NEAR(pe(0, 0), expected, 1e-13);
  EXPECT_NEAR(pe(3, 2), expected, 1e-13);
}

TEST(Photometric, MaskedPixelsReadZero) {
  const ImageBuffer a(4, 4, 3, 0.1);
  const ImageBuffer b(4, 4, 3, 0.9);
  PixelMask m(4, 4, 1);
  m(2, 2) = 0;
  EXPECT_EQ(photometric_error(a, b, m)(2, 2), 0.0);
  EXPECT_GT(photometric_error(a, b, m)(1, 1), 0.0);
}

TEST(Reduce, MinOverValidCandidates) {
  MaskedMap<double> a{Grid<double>(3, 1, 0.0), PixelMask(3, 1, 1)};
  MaskedMap<double> b{Grid<double>(3, 1, 0.0), PixelMask(3, 1, 1)};
  a.values[0] = 0.4, a.values[1] = 0.1, a.values[2] = 0.9;
  b.values[0] = 0.2, b.values[1] = 0.3, b.values[2] = 0.0;
  b.mask[2] = 0;
  a.mask[1] = 0;
  // Pixel 0: min(0.4, 0.2); pixel 1: only b; pixel 2: only a.
  const auto r = min_reduce(std::vector{a, b});
  EXPECT_EQ(r.count, 3u);
  EXPECT_NEAR(r.value, (0.2 + 0.3 + 0.9) / 3.0, 1e-15);
  EXPECT_THROW(min_reduce(std::vector<MaskedMap<double>>{}), Error);
}

TEST(Reduce, MaskedMean) {
  Grid<double> g(2, 2, 0.0);
  g[0] = 1.0, g[1] = 2.0, g[2] = 3.0, g[3] = 100.0;
  PixelMask m(2, 2, 1);
  m[3] = 0;
  const auto r = masked_mean(g, m);
  EXPECT_DOUBLE_EQ(r.value, 2.0);
  EXPECT_EQ(r.count, 3u);
  EXPECT_FALSE(masked_mean(g, PixelMask(2, 2, 0)).present());
}

TEST(Sdc, MeanAbsoluteDepthGap) {
  DepthMap t(2, 1, 3.0), r(2, 1, 0.0);
  r[0] = 2.5;
  r[1] = 0.0;  // invalid reprojection is skipped
  const auto v = loss_sdc(t, r, PixelMask(2, 1, 1));
  EXPECT_DOUBLE_EQ(v.value, 0.5);
  EXPECT_EQ(v.count, 1u);
}

TEST(Smoothness, ConstantDepthIsZero) {
  const DepthMap d(8, 6, 3.0);
  ImageBuffer img(8, 6, 1);
  for (int x = 0; x < 8; ++x) img(x, 2, 0) = 0.1 * x;
  EXPECT_EQ(loss_smoothness(d, img).value, 0.0);
}

TEST(Smoothness, StepOnFlatImage) {
  // Disparity 1 / 1 on the left half and 1 / 2 on the right: one horizontal
  // step per row, no vertical steps.
  const int w = 4, h = 2;
  DepthMap d(w, h, 1.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 2; x < w; ++x) d(x, y) = 2.0;
  }
  const ImageBuffer img(w, h, 1, 0.5);
  const double mean = 0.75;
  const double dx_mean = (0.5 / mean) * h / ((w - 1.0) * h);
  const auto v = loss_smoothness(d, img);
  EXPECT_NEAR(v.value, dx_mean, 1e-15);
}

TEST(Aggregate, WeightedTotalSkipsAbsentTerms) {
  LossWeights w;
  const LossReport r = aggregate({{LossTerm::kPhotoTemporal, {0.2, 10}},
                                  {LossTerm::kSdc, {0.5, 4}},
                                  {LossTerm::kVpc, {7.0, 0}}},
                                 w, {{"sdc.wv", {0.5, 4}}});
  EXPECT_NEAR(r.total, 1.0 * 0.2 + 0.1 * 0.5, 1e-15);
  ASSERT_NE(r.find("vpc"), nullptr);
  EXPECT_FALSE(r.find("vpc")->present());
  ASSERT_NE(r.find("sdc.wv"), nullptr);
  EXPECT_FALSE(r.find("sdc.wv")->weighted);
}

TEST(Aggregate, TextRoundTrip) {
  const LossReport r =
      aggregate({{LossTerm::kNc, {1.0 / 3.0, 9}}, {LossTerm::kCameraHeight, {0.125, 2}}}, LossWeights{});
  const LossReport back = LossReport::from_text(r.to_text());
  EXPECT_EQ(back.to_text(), r.to_text());
  EXPECT_EQ(back.find("nc")->value, 1.0 / 3.0);
}

TEST(Terms, ReportNames) {
  const std::vector<std::string> expected{"photo_T", "photo_S", "photo_ST", "photo_MVRC", "sdc",
                                          "smooth",  "nc",      "snc",      "pnc_T",      "pnc_S",
                                          "pnc_ST",  "pnc_MVRC", "ch",      "vpc"};
  for (int i = 0; i < static_cast<int>(expected.size()); ++i) {
    EXPECT_EQ(term_name(static_cast<LossTerm>(i)), expected[i]);
  }
}
