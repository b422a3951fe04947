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

#ifndef LAUGHSEG_EVAL_HPP_
#define LAUGHSEG_EVAL_HPP_

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "laughseg/energy_segmenter.hpp"

namespace laughseg {

// |a ∩ b| / |a ∪ b| on the real line.
double interval_iou(const Event& a, const Event& b);

struct MatchPair {
  std::size_t pred;
  std::size_t gt;
  double iou;
};

struct Matching {
  std::vector<MatchPair> pairs;
  std::vector<std::size_t> unmatched_preds;
  std::vector<std::size_t> unmatched_gts;
};

// Greedy one-to-one matching: candidate pairs with iou >= threshold are taken
// in descending iou order, ties going to the earlier gt start and then the
// earlier pred start. Indices refer to the input order. Throws
// kOverlappingInput when either list overlaps itself.
Matching match_segments(std::span<const Event> preds, std::span<const Event> gts,
                        double iou_threshold);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

// Each ratio is 0 when its denominator is 0.
Prf prf_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);
Prf prf(const Matching& matching, std::size_t n_preds, std::size_t n_gts);

// Duration range (lo, hi] in seconds.
struct DurationBin {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double d) const { return d > lo && d <= hi; }
  std::string label() const;
};

// (0,1], (1,2], (2,4], (4,8], (8,inf).
std::vector<DurationBin> default_duration_bins();
// Bins from interior edges, e.g. {1, 2, 4, 8}. Edges must be positive and
// strictly increasing (kBinsNotPartition otherwise).
std::vector<DurationBin> bins_from_edges(std::span<const double> edges);
// Throws kBinsNotPartition unless the bins tile (0, inf) in order.
void validate_bins(std::span<const DurationBin> bins);

struct BinResult {
  DurationBin bin;
  std::size_t support = 0;       // gts in the bin
  std::size_t matched_gts = 0;   // of those, matched globally
  std::size_t n_preds = 0;       // preds whose own duration is in the bin
  std::size_t matched_preds = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Recall per bin comes from the global matching restricted to the bin's gts;
// precision from the preds whose duration falls in the bin.
std::vector<BinResult> duration_binned_f1(std::span<const Event> preds, std::span<const Event> gts,
                                          std::span<const DurationBin> bins, double iou_threshold);

struct ThresholdResult {
  double iou_threshold = 0.0;
  Prf prf;
};

enum class Aggregation { kMicro, kMacro };

struct EvalReport {
  std::vector<ThresholdResult> per_threshold;
  double bins_iou_threshold = 0.7;
  std::vector<BinResult> duration_bins;
  Aggregation aggregation = Aggregation::kMicro;
  std::size_t n_files = 1;

  nlohmann::json to_json() const;
  // One row per duration bin.
  std::string bins_csv() const;
};

EvalReport evaluate(std::span<const Event> preds, std::span<const Event> gts,
                    std::span<const double> iou_thresholds, std::span<const DurationBin> bins,
                    double bins_iou_threshold = 0.7);

// Micro sums counts before recomputing ratios; macro averages per-file ratios.
// All reports must share thresholds and bins.
EvalReport aggregate(std::span<const EvalReport> reports, Aggregation mode);

}  // namespace laughseg

#endif  // LAUGHSEG_EVAL_HPP_
