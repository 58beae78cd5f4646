// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ord/grid.hpp"

namespace ord {

/// C x C integer counts, rows ground truth, columns prediction, over the
/// storable classes (the unknown sentinel is excluded from the matrix and
/// from evaluation). Total equals the number of evaluated voxels.
struct ConfusionMatrix {
  LabelSpace space = LabelSpace::Semantic;
  int num_classes = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t at(int gt, int pred) const {
    return counts[static_cast<std::size_t>(gt) * num_classes + pred];
  }
  std::uint64_t& at(int gt, int pred) {
    return counts[static_cast<std::size_t>(gt) * num_classes + pred];
  }
  std::uint64_t total() const;
};

/// Counts over voxels whose ground truth is not unknown. An unknown
/// prediction inside the mask counts as empty. Throws InputError on a
/// config or label-space mismatch.
ConfusionMatrix confusion(const VoxelGrid& pred, const VoxelGrid& gt);

/// TP / (TP + FP + FN); absent when the class appears in neither grid.
std::optional<double> iou(const ConfusionMatrix& cm, int cls);

/// Mean of the defined per-class IoUs over the non-empty classes.
std::optional<double> miou(const ConfusionMatrix& cm);

/// Occupancy-only IoU over the evaluation mask, classes ignored.
std::optional<double> sc_iou(const VoxelGrid& pred, const VoxelGrid& gt);

/// Per-voxel class scores over the grid lattice. With `logits` the rows are
/// unnormalized; otherwise they are probabilities (log is applied where the
/// math needs logits).
struct ProbGrid {
  GridConfig config;
  int num_classes = 0;
  bool logits = true;
  std::vector<double> values;  // voxel-major, then class

  double at(std::size_t voxel, int cls) const {
    return values[voxel * num_classes + cls];
  }
  double& at(std::size_t voxel, int cls) {
    return values[voxel * num_classes + cls];
  }
};

struct ClassWeights {
  std::vector<double> weight;
  static ClassWeights uniform(int num_classes);
};

/// As printed, the cross-entropy lacks the conventional leading minus; the
/// corrected standard form is the default and the printed one stays
/// available for comparison.
enum class CrossEntropyForm { Standard, AsPrinted };

/// Weighted cross-entropy over the valid voxels (gt not unknown):
/// mean of w_tar * (logsumexp(y) - y_tar).
double weighted_ce(const ProbGrid& p, const VoxelGrid& gt, const ClassWeights& w,
                   CrossEntropyForm form = CrossEntropyForm::Standard);

/// Ratio floor inside the class-metric logs.
inline constexpr double kScaleLossEps = 1e-8;

/// Class-wise log precision/recall/specificity summed over the non-empty
/// classes: -(1/M) * sum_c (P_c + R_c + S_c). Ratios with an empty
/// denominator contribute nothing.
double scale_loss(const ProbGrid& p, const VoxelGrid& gt);

/// The same loss on binarized occupancy (empty vs occupied).
double scale_loss_geo(const ProbGrid& p, const VoxelGrid& gt);

struct LossReport {
  double ce = 0.0;
  double scal_sem = 0.0;
  double scal_geo = 0.0;
  double total = 0.0;
};

LossReport total_loss(double ce, double scal_sem, double scal_geo);

/// Full metric report for the CLI: per-class IoU, mIoU, SC IoU, counts.
nlohmann::json metric_report(const VoxelGrid& pred, const VoxelGrid& gt);

}  // namespace ord
