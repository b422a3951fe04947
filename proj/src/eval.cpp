/*
 * Copyright 2026 The LaughSeg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "laughseg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "laughseg/error.hpp"

namespace laughseg {

double interval_iou(const Event& a, const Event& b) {
  const double inter = std::min(a.end_s, b.end_s) - std::max(a.start_s, b.start_s);
  if (inter <= 0.0) return 0.0;
  const double uni = std::max(a.end_s, b.end_s) - std::min(a.start_s, b.start_s);
  return uni > 0.0 ? inter / uni : 0.0;
}

namespace {

void check_disjoint(std::span<const Event> events, const char* what) {
  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return events[a].start_s < events[b].start_s;
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (events[order[k]].start_s < events[order[k - 1]].end_s) {
      throw Error(ErrorCode::kOverlappingInput, std::string(what) + " intervals overlap");
    }
  }
}

}  // namespace

Matching match_segments(std::span<const Event> preds, std::span<const Event> gts,
                        double iou_threshold) {
  check_disjoint(preds, "predicted");
  check_disjoint(gts, "ground-truth");

  std::vector<MatchPair> candidates;
  for (std::size_t p = 0; p < preds.size(); ++p) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double iou = interval_iou(preds[p], gts[g]);
      if (iou > 0.0 && iou >= iou_threshold) candidates.push_back({p, g, iou});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const MatchPair& a, const MatchPair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (gts[a.gt].start_s != gts[b.gt].start_s) return gts[a.gt].start_s < gts[b.gt].start_s;
    return preds[a.pred].start_s < preds[b.pred].start_s;
  });

  Matching m;
  std::vector<bool> pred_used(preds.size(), false), gt_used(gts.size(), false);
  for (const MatchPair& c : candidates) {
    if (pred_used[c.pred] || gt_used[c.gt]) continue;
    pred_used[c.pred] = gt_used[c.gt] = true;
    m.pairs.push_back(c);
  }
  for (std::size_t p = 0; p < preds.size(); ++p) {
    if (!pred_used[p]) m.unmatched_preds.push_back(p);
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (!gt_used[g]) m.unmatched_gts.push_back(g);
  }
  return m;
}

Prf prf_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  Prf r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  const double s = r.precision + r.recall;
  r.f1 = s > 0.0 ? 2.0 * r.precision * r.recall / s : 0.0;
  return r;
}

Prf prf(const Matching& matching, std::size_t n_preds, std::size_t n_gts) {
  const std::size_t tp = matching.pairs.size();
  if (tp > n_preds || tp > n_gts) {
    throw Error(ErrorCode::kInvalidArgument, "matching larger than its inputs");
  }
  return prf_from_counts(tp, n_preds - tp, n_gts - tp);
}

std::string DurationBin::label() const {
  char buf[64];
  if (std::isinf(hi)) {
    std::snprintf(buf, sizeof(buf), "%g+", lo);
  } else {
    std::snprintf(buf, sizeof(buf), "%g-%g", lo, hi);
  }
  return buf;
}

std::vector<DurationBin> default_duration_bins() {
  const double edges[] = {1.0, 2.0, 4.0, 8.0};
  return bins_from_edges(edges);
}

std::vector<DurationBin> bins_from_edges(std::span<const double> edges) {
  std::vector<DurationBin> bins;
  double lo = 0.0;
  for (double e : edges) {
    bins.push_back({lo, e});
    lo = e;
  }
  bins.push_back({lo, std::numeric_limits<double>::infinity()});
  validate_bins(bins);
  return bins;
}

void validate_bins(std::span<const DurationBin> bins) {
  if (bins.empty()) throw Error(ErrorCode::kBinsNotPartition, "no bins");
  if (bins.front().lo != 0.0) throw Error(ErrorCode::kBinsNotPartition, "first bin must start at 0");
  if (!std::isinf(bins.back().hi)) {
    throw Error(ErrorCode::kBinsNotPartition, "last bin must be open-ended");
  }
  for (std::size_t k = 0; k < bins.size(); ++k) {
    if (!(bins[k].hi > bins[k].lo)) throw Error(ErrorCode::kBinsNotPartition, "empty or inverted bin");
    if (k > 0 && bins[k].lo != bins[k - 1].hi) {
      throw Error(ErrorCode::kBinsNotPartition, "bins leave a gap or overlap");
    }
  }
}

namespace {

std::size_t bin_of(std::span<const DurationBin> bins, double d) {
  for (std::size_t k = 0; k < bins.size(); ++k) {
    if (bins[k].contains(d)) return k;
  }
  return bins.size() - 1;
}

void finish_bin(BinResult& b) {
  b.recall = b.support > 0 ? static_cast<double>(b.matched_gts) / static_cast<double>(b.support) : 0.0;
  b.precision =
      b.n_preds > 0 ? static_cast<double>(b.matched_preds) / static_cast<double>(b.n_preds) : 0.0;
  const double s = b.precision + b.recall;
  b.f1 = s > 0.0 ? 2.0 * b.precision * b.recall / s : 0.0;
}

}  // namespace

std::vector<BinResult> duration_binned_f1(std::span<const Event> preds, std::span<const Event> gts,
                                          std::span<const DurationBin> bins, double iou_threshold) {
  validate_bins(bins);
  const Matching m = match_segments(preds, gts, iou_threshold);
  std::vector<bool> pred_matched(preds.size(), false), gt_matched(gts.size(), false);
  for (const MatchPair& p : m.pairs) pred_matched[p.pred] = gt_matched[p.gt] = true;

  std::vector<BinResult> out(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) out[k].bin = bins[k];
  for (std::size_t g = 0; g < gts.size(); ++g) {
    BinResult& b = out[bin_of(bins, gts[g].duration())];
    ++b.support;
    if (gt_matched[g]) ++b.matched_gts;
  }
  for (std::size_t p = 0; p < preds.size(); ++p) {
    BinResult& b = out[bin_of(bins, preds[p].duration())];
    ++b.n_preds;
    if (pred_matched[p]) ++b.matched_preds;
  }
  for (BinResult& b : out) finish_bin(b);
  return out;
}

EvalReport evaluate(std::span<const Event> preds, std::span<const Event> gts,
                    std::span<const double> iou_thresholds, std::span<const DurationBin> bins,
                    double bins_iou_threshold) {
  EvalReport r;
  for (double thr : iou_thresholds) {
    const Matching m = match_segments(preds, gts, thr);
    r.per_threshold.push_back({thr, prf(m, preds.size(), gts.size())});
  }
  r.bins_iou_threshold = bins_iou_threshold;
  r.duration_bins = duration_binned_f1(preds, gts, bins, bins_iou_threshold);
  return r;
}

EvalReport aggregate(std::span<const EvalReport> reports, Aggregation mode) {
  EvalReport out;
  out.aggregation = mode;
  out.n_files = reports.size();
  if (reports.empty()) return out;
  const EvalReport& first = reports.front();
  out.bins_iou_threshold = first.bins_iou_threshold;
  for (const EvalReport& r : reports) {
    if (r.per_threshold.size() != first.per_threshold.size() ||
        r.duration_bins.size() != first.duration_bins.size()) {
      throw Error(ErrorCode::kInvalidArgument, "reports use different thresholds or bins");
    }
  }

  for (std::size_t t = 0; t < first.per_threshold.size(); ++t) {
    std::size_t tp = 0, fp = 0, fn = 0;
    double p = 0.0, rc = 0.0, f = 0.0;
    for (const EvalReport& r : reports) {
      const Prf& x = r.per_threshold[t].prf;
      tp += x.tp;
      fp += x.fp;
      fn += x.fn;
      p += x.precision;
      rc += x.recall;
      f += x.f1;
    }
    Prf agg = prf_from_counts(tp, fp, fn);
    if (mode == Aggregation::kMacro) {
      const auto n = static_cast<double>(reports.size());
      agg.precision = p / n;
      agg.recall = rc / n;
      agg.f1 = f / n;
    }
    out.per_threshold.push_back({first.per_threshold[t].iou_threshold, agg});
  }

  for (std::size_t k = 0; k < first.duration_bins.size(); ++k) {
    BinResult b;
    b.bin = first.duration_bins[k].bin;
    double p = 0.0, rc = 0.0, f = 0.0;
    std::size_t active = 0;
    for (const EvalReport& r : reports) {
      const BinResult& x = r.duration_bins[k];
      b.support += x.support;
      b.matched_gts += x.matched_gts;
      b.n_preds += x.n_preds;
      b.matched_preds += x.matched_preds;
      if (x.support > 0 || x.n_preds > 0) {
        ++active;
        p += x.precision;
        rc += x.recall;
        f += x.f1;
      }
    }
    finish_bin(b);
    if (mode == Aggregation::kMacro) {
      // Files with nothing in the bin do not contribute to its average.
      b.precision = active ? p / static_cast<double>(active) : 0.0;
      b.recall = active ? rc / static_cast<double>(active) : 0.0;
      b.f1 = active ? f / static_cast<double>(active) : 0.0;
    }
    out.duration_bins.push_back(b);
  }
  return out;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  j["aggregation"] = aggregation == Aggregation::kMicro ? "micro" : "macro";
  j["n_files"] = n_files;
  j["matching"] = "greedy_descending_iou";
  auto& th = j["thresholds"] = nlohmann::json::array();
  for (const ThresholdResult& t : per_threshold) {
    th.push_back({{"iou", t.iou_threshold},
                  {"precision", t.prf.precision},
                  {"recall", t.prf.recall},
                  {"f1", t.prf.f1},
                  {"tp", t.prf.tp},
                  {"fp", t.prf.fp},
                  {"fn", t.prf.fn}});
  }
  j["duration_bins_iou"] = bins_iou_threshold;
  auto& bins = j["duration_bins"] = nlohmann::json::array();
  for (const BinResult& b : duration_bins) {
    nlohmann::json hi = std::isinf(b.bin.hi) ? nlohmann::json(nullptr) : nlohmann::json(b.bin.hi);
    bins.push_back({{"lo", b.bin.lo},
                    {"hi", hi},
                    {"support", b.support},
                    {"matched_gts", b.matched_gts},
                    {"n_preds", b.n_preds},
                    {"matched_preds", b.matched_preds},
                    {"precision", b.precision},
                    {"recall", b.recall},
                    {"f1", b.f1}});
  }
  return j;
}

std::string EvalReport::bins_csv() const {
  std::string out = "bin,lo,hi,support,n_preds,precision,recall,f1\n";
  char buf[256];
  for (const BinResult& b : duration_bins) {
    std::snprintf(buf, sizeof(buf), "%s,%g,%s,%zu,%zu,%.6f,%.6f,%.6f\n", b.bin.label().c_str(),
                  b.bin.lo, std::isinf(b.bin.hi) ? "inf" : std::to_string(b.bin.hi).c_str(),
                  b.support, b.n_preds, b.precision, b.recall, b.f1);
    out += buf;
  }
  return out;
}

}  // namespace laughseg
