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


#include <cmath>

#include "gtest/gtest.h"
#include "oracles.h"
#include "silpan/gradcheck.h"
#include "silpan/rng.h"
#include "silpan/silhouette.h"

namespace silpan {
namespace {

PanopticResult MakeMap(int h, int w, std::vector<SegmentId> ids,
                       SegmentTable table) {
  PanopticResult r;
  r.map = *PanopticLabelMap::FromIds(h, w, std::move(ids));
  r.table = std::move(table);
  for (auto& [id, info] : r.table) info.area = CountAreas(r.map)[id];
  return r;
}

TEST(ExtractSilhouetteTest, UniformMapIsEmpty) {
  const auto r = MakeMap(3, 4, std::vector<SegmentId>(12, 5),
                         {{5, {1, false, 0}}});
  for (auto t : {SilhouetteTarget::kThings, SilhouetteTarget::kStuff,
                 SilhouetteTarget::kAll}) {
    EXPECT_EQ(ExtractSilhouette(r.map, r.table, t)->Count(), 0);
  }
}

TEST(ExtractSilhouetteTest, VerticalSplitMarksBothSides) {
  std::vector<SegmentId> ids;
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 6; ++x) ids.push_back(x < 3 ? 1 : 2);
  }
  const auto r = MakeMap(4, 6, ids, {{1, {1, false, 0}}, {2, {2, false, 0}}});
  auto m = ExtractSilhouette(r.map, r.table, SilhouetteTarget::kAll);
  ASSERT_TRUE(m.ok());
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 6; ++x) EXPECT_EQ(m->Get(y, x), x == 2 || x == 3);
  }
}

TEST(ExtractSilhouetteTest, ThingInsideStuffKeepsOnlyThingRim) {
  // 6x6 stuff with a 2x3 thing at rows 2-3, cols 1-3.
  std::vector<SegmentId> ids(36, 9);
  for (int y = 2; y < 4; ++y) {
    for (int x = 1; x < 4; ++x) ids[y * 6 + x] = 4;
  }
  const auto r = MakeMap(6, 6, ids, {{9, {7, false, 0}}, {4, {1, true, 0}}});
  auto things = ExtractSilhouette(r.map, r.table, SilhouetteTarget::kThings);
  ASSERT_TRUE(things.ok());
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 6; ++x) EXPECT_EQ(things->Get(y, x), ids[y * 6 + x] == 4);
  }
  auto stuff = ExtractSilhouette(r.map, r.table, SilhouetteTarget::kStuff);
  EXPECT_EQ(stuff->Count(), 10);  // 3 above, 3 below, 2 left, 2 right
}

TEST(ExtractSilhouetteTest, VoidNeverSetButTriggersNeighbours) {
  const auto r = MakeMap(1, 3, {1, 0, 1}, {{1, {1, true, 0}}});
  auto m = ExtractSilhouette(r.map, r.table, SilhouetteTarget::kAll);
  EXPECT_TRUE(m->Get(0, 0));
  EXPECT_FALSE(m->Get(0, 1));
  EXPECT_TRUE(m->Get(0, 2));
}

TEST(ExtractSilhouetteTest, IdMissingFromTableIsAnError) {
  const auto r = MakeMap(1, 2, {1, 2}, {{1, {1, true, 0}}});
  EXPECT_FALSE(ExtractSilhouette(r.map, r.table, SilhouetteTarget::kAll).ok());
  EXPECT_FALSE(ExtractSilhouettePair(r.map, r.table).ok());
}

TEST(ExtractSilhouetteTest, MatchesNeighbourDifferenceOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    oracle::RandomMapSpec spec;
    spec.height = rng.UniformInt(1, 20);
    spec.width = rng.UniformInt(1, 20);
    spec.segments = rng.UniformInt(1, 8);
    const PanopticResult r = oracle::RandomPanoptic(rng, spec);
    for (auto t : {SilhouetteTarget::kThings, SilhouetteTarget::kStuff,
                   SilhouetteTarget::kAll}) {
      auto got = ExtractSilhouette(r.map, r.table, t);
      ASSERT_TRUE(got.ok());
      EXPECT_EQ(*got, oracle::Silhouette(r.map, r.table, t));
    }
  }
}

TEST(ExtractSilhouetteTest, AllIsUnionOfDisjointThingsAndStuff) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    oracle::RandomMapSpec spec;
    spec.segments = rng.UniformInt(1, 10);
    const PanopticResult r = oracle::RandomPanoptic(rng, spec);
    auto pair = ExtractSilhouettePair(r.map, r.table);
    auto all = ExtractSilhouette(r.map, r.table, SilhouetteTarget::kAll);
    ASSERT_TRUE(pair.ok() && all.ok());
    bool constant = true;
    for (SegmentId id : r.map.ids()) constant &= id == r.map.ids()[0];
    EXPECT_EQ(all->Count() == 0, constant);
    for (std::size_t i = 0; i < all->size(); ++i) {
      EXPECT_EQ(all->Get(i), pair->things.Get(i) || pair->stuff.Get(i));
      EXPECT_FALSE(pair->things.Get(i) && pair->stuff.Get(i));
      if (r.map.ids()[i] == kVoidId) {
        EXPECT_FALSE(all->Get(i));
      }
    }
  }
}

TEST(DiceScoreTest, PerfectMatchAndEmptyCase) {
  Rng rng(13);
  const BinaryMask g = oracle::RandomMask(rng, 6, 6, 0.5);
  EXPECT_DOUBLE_EQ(*DiceScore(MaskToGrid(g), g, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(*SilhouetteLoss(MaskToGrid(g), g, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(*DiceScore(DenseGrid2(4, 4), BinaryMask(4, 4), 1.0), 1.0);
}

TEST(DiceScoreTest, DisjointSinglePixels) {
  DenseGrid2 p(3, 3);
  p.at(0, 0) = 1.0;
  BinaryMask g(3, 3);
  g.Set(2, 2);
  EXPECT_DOUBLE_EQ(*DiceScore(p, g, 1.0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(*SilhouetteLoss(p, g, 1.0), 2.0 / 3.0);
}

TEST(DiceScoreTest, RejectsBadInputs) {
  EXPECT_FALSE(DiceScore(DenseGrid2(2, 2), BinaryMask(2, 3), 1.0).ok());
  EXPECT_FALSE(DiceScore(DenseGrid2(2, 2), BinaryMask(2, 2), 0.0).ok());
  EXPECT_FALSE(DiceScore(DenseGrid2(2, 2), BinaryMask(2, 2), -1.0).ok());
  EXPECT_FALSE(DiceScore(DenseGrid2(2, 2, 1.5), BinaryMask(2, 2), 1.0).ok());
  EXPECT_FALSE(DiceGrad(DenseGrid2(2, 2), BinaryMask(3, 2), 1.0).ok());
}

TEST(DiceScoreTest, RangeComplementAndSymmetryProperties) {
  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const int h = rng.UniformInt(1, 9);
    const int w = rng.UniformInt(1, 9);
    const double eps = rng.Uniform(0.01, 2.0);
    const DenseGrid2 p = oracle::RandomGrid2(rng, h, w, 0, 1);
    const BinaryMask g = oracle::RandomMask(rng, h, w, 0.4);
    const double s = *DiceScore(p, g, eps);
    EXPECT_GT(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(s, oracle::Dice(p, g, eps), 1e-12);
    EXPECT_DOUBLE_EQ(s + *SilhouetteLoss(p, g, eps), 1.0);

    const BinaryMask pb = oracle::RandomMask(rng, h, w, 0.4);
    EXPECT_DOUBLE_EQ(*DiceScore(MaskToGrid(pb), g, eps),
                     *DiceScore(MaskToGrid(g), pb, eps));
    EXPECT_EQ(*DiceScore(MaskToGrid(pb), g, eps) == 1.0, pb == g);
  }
}

TEST(DiceGradTest, StationaryAtPerfectBinaryMatch) {
  Rng rng(15);
  const BinaryMask g = oracle::RandomMask(rng, 5, 7, 0.5);
  auto grad = DiceGrad(MaskToGrid(g), g, 1e-9);
  ASSERT_TRUE(grad.ok());
  for (double v : grad->data()) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(DiceGradTest, MatchesCentralDifferences) {
  Rng rng(16);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const DenseGrid2 p = oracle::RandomGrid2(rng, 8, 8, 0.05, 0.95);
    const BinaryMask g = oracle::RandomMask(rng, 8, 8, 0.4);
    auto grad = DiceGrad(p, g, 1.0);
    ASSERT_TRUE(grad.ok());
    const std::vector<double> x(p.data().begin(), p.data().end());
    const auto numeric = oracle::CentralDiff(
        [&](const std::vector<double>& v) {
          return 1.0 - oracle::Dice(*DenseGrid2::FromData(8, 8, v), g, 1.0);
        },
        x, 1e-5);
    worst = std::max(worst, MaxRelativeError(grad->data(), numeric));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(DiceGradTest, PositiveEverywhereForEmptyTarget) {
  auto grad = DiceGrad(DenseGrid2(4, 4, 0.3), BinaryMask(4, 4), 1.0);
  ASSERT_TRUE(grad.ok());
  for (double v : grad->data()) EXPECT_GT(v, 0.0);
  // Same sign as a finite difference.
  DenseGrid2 up(4, 4, 0.3);
  up.at(1, 1) += 1e-5;
  EXPECT_GT(*SilhouetteLoss(up, BinaryMask(4, 4), 1.0),
            *SilhouetteLoss(DenseGrid2(4, 4, 0.3), BinaryMask(4, 4), 1.0));
}

}  // namespace
}  // namespace silpan
