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


#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace silpan::oracle {

double TentSample(const DenseGrid2& grid, double x, double y) {
  x = std::clamp(x, 0.0, grid.width() - 1.0);
  y = std::clamp(y, 0.0, grid.height() - 1.0);
  double sum = 0.0;
  for (int i = 0; i < grid.height(); ++i) {
    const double wy = std::max(0.0, 1.0 - std::abs(y - i));
    if (wy == 0.0) continue;
    for (int j = 0; j < grid.width(); ++j) {
      const double wx = std::max(0.0, 1.0 - std::abs(x - j));
      sum += wx * wy * grid.at(i, j);
    }
  }
  return sum;
}

DenseGrid3 RoiAlign(const DenseGrid3& grid, const BBox& box, int out_h,
                    int out_w, int samples_per_bin) {
  DenseGrid3 out(grid.channels(), out_h, out_w);
  const double bin_w = box.width() / out_w;
  const double bin_h = box.height() / out_h;
  for (int c = 0; c < grid.channels(); ++c) {
    const DenseGrid2 plane = grid.ChannelGrid(c);
    for (int i = 0; i < out_h; ++i) {
      for (int j = 0; j < out_w; ++j) {
        double acc = 0.0;
        for (int sy = 0; sy < samples_per_bin; ++sy) {
          for (int sx = 0; sx < samples_per_bin; ++sx) {
            // Continuous coordinate of the sample, then shift to index space.
            const double u = box.x0 + bin_w * (j + (sx + 0.5) / samples_per_bin);
            const double v = box.y0 + bin_h * (i + (sy + 0.5) / samples_per_bin);
            acc += TentSample(plane, u - 0.5, v - 0.5);
          }
        }
        out.at(c, i, j) = acc / (samples_per_bin * samples_per_bin);
      }
    }
  }
  return out;
}

DenseGrid2 Resize(const DenseGrid2& grid, int new_h, int new_w) {
  DenseGrid2 out(new_h, new_w);
  for (int i = 0; i < new_h; ++i) {
    for (int j = 0; j < new_w; ++j) {
      const double y = (i + 0.5) * grid.height() / new_h - 0.5;
      const double x = (j + 0.5) * grid.width() / new_w - 0.5;
      out.at(i, j) = TentSample(grid, x, y);
    }
  }
  return out;
}

DenseGrid2 Paste(const DenseGrid2& mask, const BBox& box, int image_h,
                 int image_w) {
  DenseGrid2 out(image_h, image_w);
  const int x0 = static_cast<int>(std::floor(box.x0));
  const int y0 = static_cast<int>(std::floor(box.y0));
  const int x1 = static_cast<int>(std::ceil(box.x1));
  const int y1 = static_cast<int>(std::ceil(box.y1));
  const DenseGrid2 resized = Resize(mask, y1 - y0, x1 - x0);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      if (y < 0 || x < 0 || y >= image_h || x >= image_w) continue;
      out.at(y, x) = resized.at(y - y0, x - x0);
    }
  }
  return out;
}

BinaryMask Silhouette(const PanopticLabelMap& map, const SegmentTable& table,
                      SilhouetteTarget target) {
  const int h = map.height();
  const int w = map.width();
  BinaryMask out(h, w);
  const int dy[] = {-1, 1, 0, 0};
  const int dx[] = {0, 0, -1, 1};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const SegmentId id = map.at(y, x);
      if (id == kVoidId) continue;
      const bool thing = table.at(id).is_thing;
      if (target == SilhouetteTarget::kThings && !thing) continue;
      if (target == SilhouetteTarget::kStuff && thing) continue;
      for (int k = 0; k < 4; ++k) {
        const int ny = y + dy[k];
        const int nx = x + dx[k];
        if (ny < 0 || nx < 0 || ny >= h || nx >= w) continue;
        if (map.at(ny, nx) != id) out.Set(y, x);
      }
    }
  }
  return out;
}

DenseGrid2 Blend(const DenseGrid3& scores, const DenseGrid3& crop) {
  DenseGrid2 out(scores.height(), scores.width());
  for (int y = 0; y < scores.height(); ++y) {
    for (int x = 0; x < scores.width(); ++x) {
      double acc = 0.0;
      for (int k = 0; k < scores.channels(); ++k) {
        acc += scores.at(k, y, x) * crop.at(k, y, x);
      }
      out.at(y, x) = acc;
    }
  }
  return out;
}

DenseGrid3 Attention(const std::vector<double>& att, int n_bases,
                     int native_res, int out_res) {
  std::vector<DenseGrid2> up;
  for (int k = 0; k < n_bases; ++k) {
    DenseGrid2 small(native_res, native_res);
    for (int i = 0; i < native_res; ++i) {
      for (int j = 0; j < native_res; ++j) {
        small.at(i, j) = att[(k * native_res + i) * native_res + j];
      }
    }
    up.push_back(Resize(small, out_res, out_res));
  }
  DenseGrid3 out(n_bases, out_res, out_res);
  for (int y = 0; y < out_res; ++y) {
    for (int x = 0; x < out_res; ++x) {
      double z = 0.0;
      for (int k = 0; k < n_bases; ++k) z += std::exp(up[k].at(y, x));
      for (int k = 0; k < n_bases; ++k) {
        out.at(k, y, x) = std::exp(up[k].at(y, x)) / z;
      }
    }
  }
  return out;
}

double BoxIou(const BBox& a, const BBox& b) {
  const double iw = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double ih = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.width() * a.height() + b.width() * b.height() - inter);
}

std::vector<int> Nms(const std::vector<Detection>& dets, double threshold) {
  const int n = static_cast<int>(dets.size());
  std::vector<bool> alive(n, true);
  std::vector<int> kept;
  while (true) {
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (alive[i] &&
          (best < 0 || dets[i].fcos_score > dets[best].fcos_score)) {
        best = i;
      }
    }
    if (best < 0) break;
    kept.push_back(best);
    alive[best] = false;
    for (int i = 0; i < n; ++i) {
      if (alive[i] && dets[i].class_id == dets[best].class_id &&
          oracle::BoxIou(dets[i].box, dets[best].box) > threshold) {
        alive[i] = false;
      }
    }
  }
  return kept;
}

double Dice(const DenseGrid2& p, const BinaryMask& g, double eps) {
  double pg = 0, pp = 0, gg = 0;
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) {
      const double gv = g.Get(y, x) ? 1.0 : 0.0;
      pg += p.at(y, x) * gv;
      pp += p.at(y, x) * p.at(y, x);
      gg += gv * gv;
    }
  }
  return (2 * pg + eps) / (pp + gg + eps);
}

double SoftIou(const DenseGrid2& p, const BinaryMask& g) {
  double inter = 0, sp = 0, sg = 0;
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) {
      const double gv = g.Get(y, x) ? 1.0 : 0.0;
      inter += p.at(y, x) * gv;
      sp += p.at(y, x);
      sg += gv;
    }
  }
  const double uni = sp + sg - inter;
  return uni == 0.0 ? 0.0 : 1.0 - inter / uni;
}

std::map<int, PqCounts> BruteForcePq(const PanopticResult& pred,
                                     const PanopticResult& gt) {
  std::map<int, PqCounts> out;
  const auto p_ids = pred.map.ids();
  const auto g_ids = gt.map.ids();
  std::map<SegmentId, bool> pred_matched, gt_matched;
  for (const auto& [pid, pinfo] : pred.table) {
    for (const auto& [gid, ginfo] : gt.table) {
      if (pinfo.category_id != ginfo.category_id) continue;
      std::int64_t inter = 0, uni = 0;
      for (std::size_t i = 0; i < p_ids.size(); ++i) {
        const bool in_p = p_ids[i] == pid;
        const bool in_g = g_ids[i] == gid;
        if (in_p && in_g) ++inter;
        if ((in_p && g_ids[i] != kVoidId) || in_g) ++uni;
      }
      if (uni == 0) continue;
      const double iou = static_cast<double>(inter) / uni;
      if (iou > 0.5) {
        PqCounts& c = out[pinfo.category_id];
        ++c.tp;
        c.iou_sum += iou;
        pred_matched[pid] = true;
        gt_matched[gid] = true;
      }
    }
  }
  for (const auto& [gid, ginfo] : gt.table) {
    if (!gt_matched[gid]) ++out[ginfo.category_id].fn;
  }
  for (const auto& [pid, pinfo] : pred.table) {
    if (pred_matched[pid]) continue;
    std::int64_t area = 0, on_void = 0;
    for (std::size_t i = 0; i < p_ids.size(); ++i) {
      if (p_ids[i] != pid) continue;
      ++area;
      if (g_ids[i] == kVoidId) ++on_void;
    }
    if (2 * on_void > area) continue;
    ++out[pinfo.category_id].fp;
  }
  return out;
}

std::vector<double> CentralDiff(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double h) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double fp = f(x);
    x[i] = orig - h;
    const double fm = f(x);
    x[i] = orig;
    out[i] = (fp - fm) / (2 * h);
  }
  return out;
}

DenseGrid2 RandomGrid2(Rng& rng, int h, int w, double lo, double hi) {
  DenseGrid2 g(h, w);
  for (double& v : g.mutable_data()) v = rng.Uniform(lo, hi);
  return g;
}

DenseGrid3 RandomGrid3(Rng& rng, int c, int h, int w, double lo, double hi) {
  DenseGrid3 g(c, h, w);
  for (double& v : g.mutable_data()) v = rng.Uniform(lo, hi);
  return g;
}

BinaryMask RandomMask(Rng& rng, int h, int w, double p) {
  BinaryMask m(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) m.Set(y, x, rng.Bernoulli(p));
  }
  return m;
}

namespace {

void Retable(PanopticResult& r, const std::map<SegmentId, int>& category,
             int thing_categories) {
  r.table.clear();
  for (SegmentId id : r.map.ids()) {
    if (id == kVoidId) continue;
    const int cat = category.at(id);
    SegmentInfo& info = r.table[id];
    info.category_id = cat;
    info.is_thing = cat <= thing_categories;
    ++info.area;
  }
}

}  // namespace

PanopticResult RandomPanoptic(Rng& rng, const RandomMapSpec& spec) {
  struct Seed {
    double x, y;
    SegmentId id;
  };
  std::vector<Seed> seeds;
  std::map<SegmentId, int> category;
  const int n_cat = spec.thing_categories + spec.stuff_categories;
  for (int i = 0; i < spec.segments; ++i) {
    Seed s{rng.Uniform(0, spec.width), rng.Uniform(0, spec.height),
           static_cast<SegmentId>(i + 1)};
    if (spec.allow_void && rng.Bernoulli(0.2)) s.id = kVoidId;
    seeds.push_back(s);
    category[s.id] = rng.UniformInt(1, n_cat);
  }
  PanopticResult r;
  r.map = PanopticLabelMap(spec.height, spec.width);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      double best = 1e300;
      for (const Seed& s : seeds) {
        const double d = (s.x - x) * (s.x - x) + (s.y - y) * (s.y - y);
        if (d < best) {
          best = d;
          r.map.at(y, x) = s.id;
        }
      }
    }
  }
  Retable(r, category, spec.thing_categories);
  return r;
}

CategoryRegistry RandomRegistry(const RandomMapSpec& spec) {
  std::vector<Category> cats;
  const int n_cat = spec.thing_categories + spec.stuff_categories;
  for (int c = 1; c <= n_cat; ++c) {
    cats.push_back({c, "c" + std::to_string(c), c <= spec.thing_categories});
  }
  return *CategoryRegistry::Create(std::move(cats));
}

PanopticResult PerturbPanoptic(Rng& rng, const PanopticResult& gt,
                               const RandomMapSpec& spec) {
  const int h = gt.map.height();
  const int w = gt.map.width();
  const int n_cat = spec.thing_categories + spec.stuff_categories;
  const int dx = rng.UniformInt(-2, 2);
  const int dy = rng.UniformInt(-2, 2);
  PanopticResult r;
  r.map = PanopticLabelMap(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      r.map.at(y, x) =
          gt.map.at(std::clamp(y + dy, 0, h - 1), std::clamp(x + dx, 0, w - 1));
    }
  }
  // A rectangular blob as an extra segment.
  const SegmentId blob = 1000;
  const int bx = rng.UniformInt(0, w - 1);
  const int by = rng.UniformInt(0, h - 1);
  const int bw = rng.UniformInt(1, w / 2);
  const int bh = rng.UniformInt(1, h / 2);
  for (int y = by; y < std::min(h, by + bh); ++y) {
    for (int x = bx; x < std::min(w, bx + bw); ++x) r.map.at(y, x) = blob;
  }
  // Fresh ids in a random order, occasional category changes.
  std::map<SegmentId, int> category;
  std::map<SegmentId, SegmentId> rename;
  std::vector<SegmentId> fresh;
  for (int i = 0; i < static_cast<int>(gt.table.size()) + 1; ++i) {
    fresh.push_back(static_cast<SegmentId>(i + 1));
  }
  for (std::size_t i = fresh.size(); i > 1; --i) {
    std::swap(fresh[i - 1], fresh[rng.UniformInt(0, static_cast<int>(i) - 1)]);
  }
  std::size_t next = 0;
  auto assign = [&](SegmentId old, int cat) {
    const SegmentId id = fresh[next++];
    rename[old] = id;
    category[id] = rng.Bernoulli(0.2) ? rng.UniformInt(1, n_cat) : cat;
  };
  for (const auto& [id, info] : gt.table) assign(id, info.category_id);
  assign(blob, rng.UniformInt(1, n_cat));
  for (SegmentId& id : r.map.mutable_ids()) {
    if (id != kVoidId) id = rename.at(id);
  }
  Retable(r, category, spec.thing_categories);
  return r;
}

std::vector<Detection> RandomDetections(Rng& rng, int n, int classes,
                                        double extent) {
  std::vector<Detection> dets;
  for (int i = 0; i < n; ++i) {
    Detection d;
    const double x0 = rng.Uniform(0, extent);
    const double y0 = rng.Uniform(0, extent);
    d.box = BBox{x0, y0, x0 + rng.Uniform(1, extent / 3),
                 y0 + rng.Uniform(1, extent / 3)};
    d.class_id = rng.UniformInt(1, classes);
    // Coarse scores so ties actually happen.
    d.fcos_score = rng.UniformInt(0, 20) / 20.0;
    dets.push_back(d);
  }
  return dets;
}

}  // namespace silpan::oracle
