// Copyright 2026 The Silpan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "oracles.h"
#include "silpan/blend.h"
#include "silpan/interpolate.h"
#include "silpan/rng.h"

namespace silpan {
namespace {

std::vector<double> RandomVector(Rng& rng, std::size_t n, double lo,
                                 double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.Uniform(lo, hi);
  return v;
}

TEST(AttentionScoresTest, SingleBasisIsAllOnes) {
  Rng rng(30);
  auto s = AttentionScores(RandomVector(rng, 9, -5, 5), 1, 3, 7);
  ASSERT_TRUE(s.ok());
  for (double v : s->data()) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(AttentionScoresTest, EqualChannelsGiveOneHalf) {
  std::vector<double> att(2 * 16);
  for (int i = 0; i < 16; ++i) att[i] = att[16 + i] = 0.1 * i;
  auto s = AttentionScores(att, 2, 4, 8);
  ASSERT_TRUE(s.ok());
  for (double v : s->data()) EXPECT_DOUBLE_EQ(v, 0.5);
}

TEST(AttentionScoresTest, ChannelSumsAndOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int a = rng.UniformInt(1, 6);
    const int out = a + rng.UniformInt(0, 10);
    const auto att = RandomVector(rng, 4 * a * a, -8, 8);
    auto s = AttentionScores(att, 4, a, out);
    ASSERT_TRUE(s.ok());
    const DenseGrid3 want = oracle::Attention(att, 4, a, out);
    for (int y = 0; y < out; ++y) {
      for (int x = 0; x < out; ++x) {
        double sum = 0.0;
        for (int k = 0; k < 4; ++k) {
          sum += s->at(k, y, x);
          EXPECT_NEAR(s->at(k, y, x), want.at(k, y, x), 1e-12);
        }
        EXPECT_NEAR(sum, 1.0, 1e-6);
      }
    }
  }
}

TEST(AttentionScoresTest, RejectsBadShapes) {
  EXPECT_FALSE(AttentionScores(std::vector<double>(10), 2, 2, 4).ok());
  EXPECT_FALSE(AttentionScores(std::vector<double>(8), 2, 2, 1).ok());
  EXPECT_FALSE(AttentionScores(std::vector<double>(8), 0, 2, 4).ok());
  std::vector<double> bad(8, 0.0);
  bad[3] = std::nan("");
  EXPECT_FALSE(AttentionScores(bad, 2, 2, 4).ok());
}

TEST(BlendLogitsTest, IdentityAndZero) {
  Rng rng(32);
  const DenseGrid3 crop = oracle::RandomGrid3(rng, 1, 5, 5, -3, 3);
  auto m = BlendLogits(DenseGrid3(1, 5, 5, 1.0), crop);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->size(), 25u);
  for (int i = 0; i < 25; ++i) EXPECT_EQ(m->data()[i], crop.data()[i]);

  const DenseGrid3 s = oracle::RandomGrid3(rng, 3, 5, 5, 0, 1);
  auto z = BlendLogits(s, DenseGrid3(3, 5, 5));
  for (double v : z->data()) EXPECT_EQ(v, 0.0);
}

TEST(BlendLogitsTest, MatchesTripleLoop) {
  Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = std::vector<int>{1, 2, 4}[trial % 3];
    const int r = trial % 2 == 0 ? 8 : 56;
    const DenseGrid3 s = oracle::RandomGrid3(rng, n, r, r, 0, 1);
    const DenseGrid3 c = oracle::RandomGrid3(rng, n, r, r, -10, 10);
    auto m = BlendLogits(s, c);
    ASSERT_TRUE(m.ok());
    const DenseGrid2 want = oracle::Blend(s, c);
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_NEAR(m->data()[i], want.data()[i], 1e-6);
    }
  }
}

TEST(BlendLogitsTest, LinearInCrop) {
  Rng rng(34);
  const DenseGrid3 s = oracle::RandomGrid3(rng, 4, 6, 6, 0, 1);
  const DenseGrid3 c1 = oracle::RandomGrid3(rng, 4, 6, 6, -5, 5);
  const DenseGrid3 c2 = oracle::RandomGrid3(rng, 4, 6, 6, -5, 5);
  const double a = 1.7, b = -0.6;
  DenseGrid3 mix(4, 6, 6);
  for (std::size_t i = 0; i < mix.size(); ++i) {
    mix.mutable_data()[i] = a * c1.data()[i] + b * c2.data()[i];
  }
  auto m = BlendLogits(s, mix);
  auto m1 = BlendLogits(s, c1);
  auto m2 = BlendLogits(s, c2);
  for (std::size_t i = 0; i < m->size(); ++i) {
    EXPECT_NEAR(m->data()[i], a * m1->data()[i] + b * m2->data()[i], 1e-6);
  }
}

TEST(BlendLogitsTest, InvariantUnderChannelPermutation) {
  Rng rng(35);
  const DenseGrid3 s = oracle::RandomGrid3(rng, 4, 5, 5, 0, 1);
  const DenseGrid3 c = oracle::RandomGrid3(rng, 4, 5, 5, -5, 5);
  auto base = BlendLogits(s, c);
  std::vector<int> perm = {0, 1, 2, 3};
  do {
    DenseGrid3 sp(4, 5, 5), cp(4, 5, 5);
    for (int k = 0; k < 4; ++k) {
      std::ranges::copy(s.channel(perm[k]), sp.mutable_channel(k).begin());
      std::ranges::copy(c.channel(perm[k]), cp.mutable_channel(k).begin());
    }
    auto m = BlendLogits(sp, cp);
    for (std::size_t i = 0; i < m->size(); ++i) {
      EXPECT_NEAR(m->data()[i], base->data()[i], 1e-12);
    }
  } while (std::ranges::next_permutation(perm).found);
}

TEST(BlendLogitsTest, RejectsShapeMismatch) {
  EXPECT_FALSE(BlendLogits(DenseGrid3(2, 4, 4), DenseGrid3(3, 4, 4)).ok());
  EXPECT_FALSE(BlendLogits(DenseGrid3(2, 4, 4), DenseGrid3(2, 4, 5)).ok());
}

TEST(BlendParamsTest, Validation) {
  EXPECT_TRUE(ValidateBlendParams(BlendParams{}).ok());
  BlendParams p;
  p.n_bases = 0;
  EXPECT_FALSE(ValidateBlendParams(p).ok());
  p = BlendParams{};
  p.native_res = 60;
  EXPECT_FALSE(ValidateBlendParams(p).ok());
  p = BlendParams{};
  p.mask_threshold = 0.0;
  EXPECT_FALSE(ValidateBlendParams(p).ok());
  p.mask_threshold = 1.0;
  EXPECT_TRUE(ValidateBlendParams(p).ok());
  p = BlendParams{};
  p.samples_per_bin = 0;
  EXPECT_FALSE(ValidateBlendParams(p).ok());
}

TEST(ComposeInstanceTest, SaturatedSingleBasis) {
  BlendParams params;
  params.n_bases = 1;
  Rng rng(36);
  const auto att = RandomVector(rng, 14 * 14, -3, 3);
  const BBox box{4.0, 6.0, 20.0, 18.0};
  auto m = ComposeInstance(att, DenseGrid3(1, 24, 32, 10.0), box, 24, 32, params);
  ASSERT_TRUE(m.ok());
  for (int y = 0; y < 24; ++y) {
    for (int x = 0; x < 32; ++x) {
      const bool inside = x >= 4 && x < 20 && y >= 6 && y < 18;
      EXPECT_NEAR(m->probs.at(y, x), inside ? 1.0 : 0.0, 1e-4);
      EXPECT_EQ(m->binary.Get(y, x), inside);
    }
  }
  EXPECT_EQ(m->box, box);
}

TEST(ComposeInstanceTest, ZeroBasesGiveOneHalfAndFullBoxMask) {
  Rng rng(37);
  const auto att = RandomVector(rng, 4 * 14 * 14, -3, 3);
  auto m = ComposeInstance(att, DenseGrid3(4, 20, 20), BBox{2.5, 3.5, 9.5, 12.2},
                           20, 20, BlendParams{});
  ASSERT_TRUE(m.ok());
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 20; ++x) {
      const bool inside = x >= 2 && x < 10 && y >= 3 && y < 13;
      EXPECT_DOUBLE_EQ(m->probs.at(y, x), inside ? 0.5 : 0.0);
      EXPECT_EQ(m->binary.Get(y, x), inside);
    }
  }
}

TEST(ComposeInstanceTest, EqualsPipelineOfOracles) {
  Rng rng(38);
  for (int trial = 0; trial < 10; ++trial) {
    BlendParams params;
    params.n_bases = rng.UniformInt(1, 4);
    params.native_res = rng.UniformInt(2, 5);
    params.mask_res = params.native_res + rng.UniformInt(0, 12);
    params.samples_per_bin = rng.UniformInt(1, 2);
    params.mask_threshold = rng.Uniform(0.2, 0.8);
    const int h = 18, w = 22;
    const DenseGrid3 bases =
        oracle::RandomGrid3(rng, params.n_bases, h, w, -4, 4);
    const auto att = RandomVector(
        rng, params.n_bases * params.native_res * params.native_res, -3, 3);
    const double x0 = rng.Uniform(-4, 16);
    const double y0 = rng.Uniform(-4, 12);
    const BBox box{x0, y0, x0 + rng.Uniform(1, 12), y0 + rng.Uniform(1, 12)};
    auto m = ComposeInstance(att, bases, box, h, w, params);
    ASSERT_TRUE(m.ok());

    const int r = params.mask_res;
    const DenseGrid3 crop =
        oracle::RoiAlign(bases, box, r, r, params.samples_per_bin);
    const DenseGrid3 scores =
        oracle::Attention(att, params.n_bases, params.native_res, r);
    DenseGrid2 probs = oracle::Blend(scores, crop);
    for (double& v : probs.mutable_data()) v = 1.0 / (1.0 + std::exp(-v));
    const DenseGrid2 pasted = oracle::Paste(probs, box, h, w);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        EXPECT_NEAR(m->probs.at(y, x), pasted.at(y, x), 1e-9);
        if (std::abs(pasted.at(y, x) - params.mask_threshold) > 1e-9) {
          EXPECT_EQ(m->binary.Get(y, x),
                    pasted.at(y, x) >= params.mask_threshold);
        }
      }
    }
  }
}

TEST(ComposeInstanceTest, ZeroOutsideClippedRasterAndDeterministic) {
  Rng rng(39);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseGrid3 bases = oracle::RandomGrid3(rng, 4, 30, 30, -6, 6);
    const auto att = RandomVector(rng, 4 * 14 * 14, -3, 3);
    const double x0 = rng.Uniform(-10, 28);
    const double y0 = rng.Uniform(-10, 28);
    const BBox box{x0, y0, x0 + rng.Uniform(1, 20), y0 + rng.Uniform(1, 20)};
    auto a = ComposeInstance(att, bases, box, 30, 30, BlendParams{});
    auto b = ComposeInstance(att, bases, box, 30, 30, BlendParams{});
    ASSERT_TRUE(a.ok());
    EXPECT_EQ(a->probs, b->probs);
    const PixelRect r = RasterizeBox(box).Intersect(PixelRect{0, 0, 30, 30});
    for (int y = 0; y < 30; ++y) {
      for (int x = 0; x < 30; ++x) {
        const double v = a->probs.at(y, x);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        if (x < r.x0 || x >= r.x1 || y < r.y0 || y >= r.y1) {
          EXPECT_EQ(v, 0.0);
          EXPECT_FALSE(a->binary.Get(y, x));
        }
      }
    }
  }
}

TEST(ComposeInstanceTest, RejectsMismatchedInputs) {
  const BBox box{1, 1, 5, 5};
  EXPECT_FALSE(ComposeInstance(std::vector<double>(4 * 14 * 14), DenseGrid3(3, 8, 8),
                               box, 8, 8, BlendParams{})
                   .ok());
  EXPECT_FALSE(ComposeInstance(std::vector<double>(10), DenseGrid3(4, 8, 8),
                               box, 8, 8, BlendParams{})
                   .ok());
  EXPECT_FALSE(ComposeInstance(std::vector<double>(4 * 14 * 14),
                               DenseGrid3(4, 8, 8), box, 9, 8, BlendParams{})
                   .ok());
  EXPECT_FALSE(ComposeInstance(std::vector<double>(4 * 14 * 14),
                               DenseGrid3(4, 8, 8), BBox{5, 1, 1, 5}, 8, 8,
                               BlendParams{})
                   .ok());
}

}  // namespace
}  // namespace silpan
