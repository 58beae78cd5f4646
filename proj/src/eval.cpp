// SPDX-License-Identifier: Apache-2.0
#include "ord/eval.hpp"

#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "ord/errors.hpp"

namespace ord {

namespace {

constexpr double kLogFloor = 1e-300;

/// Storable class count: the label space without its unknown sentinel.
int storable_classes(LabelSpace space) { return class_count(space) - 1; }

void check_aligned(const VoxelGrid& pred, const VoxelGrid& gt) {
  if (pred.space != gt.space) throw InputError("label spaces differ");
  if (!(pred.config == gt.config)) throw InputError("grid configs differ");
  if (pred.labels.size() != gt.labels.size()) {
    throw InputError("grid payload sizes differ");
  }
}

void check_prob(const ProbGrid& p, const VoxelGrid& gt) {
  if (!(p.config == gt.config)) throw InputError("probability grid config differs");
  if (p.values.size() != p.config.num_voxels() * static_cast<std::size_t>(p.num_classes)) {
    throw InputError("probability grid payload size is wrong");
  }
  if (p.num_classes < 2) throw InputError("probability grid needs at least 2 classes");
}

/// Per-voxel probabilities (softmax of logits, or the rows as given).
std::vector<double> probabilities(const ProbGrid& p) {
  std::vector<double> out(p.values.size());
  const std::size_t n = p.config.num_voxels();
  const int m = p.num_classes;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t v = 0; v < static_cast<std::ptrdiff_t>(n); ++v) {
    const double* row = p.values.data() + static_cast<std::size_t>(v) * m;
    double* dst = out.data() + static_cast<std::size_t>(v) * m;
    if (p.logits) {
      double mx = row[0];
      for (int c = 1; c < m; ++c) mx = std::max(mx, row[c]);
      double sum = 0.0;
      for (int c = 0; c < m; ++c) sum += std::exp(row[c] - mx);
      for (int c = 0; c < m; ++c) dst[c] = std::exp(row[c] - mx) / sum;
    } else {
      for (int c = 0; c < m; ++c) dst[c] = row[c];
    }
  }
  return out;
}

double log_ratio(double num, double den) {
  if (den <= 0.0) return 0.0;  // vacuous ratio, treated as 1
  return std::log(std::max(num / den, kScaleLossEps));
}

/// -(1/M) * sum over the given classes of (P_c + R_c + S_c) on explicit
/// probability rows.
double scale_loss_on(const std::vector<double>& prob, int num_classes,
                     const std::vector<int>& targets, const std::vector<int>& classes) {
  double sum = 0.0;
  for (const int c : classes) {
    double tp_soft = 0.0, pred_mass = 0.0, comp_mass = 0.0;
    std::uint64_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const double pc = prob[i * num_classes + c];
      pred_mass += pc;
      if (targets[i] == c) {
        tp_soft += pc;
        ++pos;
      } else {
        comp_mass += 1.0 - pc;
        ++neg;
      }
    }
    const double precision = log_ratio(tp_soft, pred_mass);
    const double recall = log_ratio(tp_soft, static_cast<double>(pos));
    const double specificity = log_ratio(comp_mass, static_cast<double>(neg));
    sum += precision + recall + specificity;
  }
  if (classes.empty()) return 0.0;
  return -sum / static_cast<double>(classes.size());
}

}  // namespace

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

ConfusionMatrix confusion(const VoxelGrid& pred, const VoxelGrid& gt) {
  check_aligned(pred, gt);
  const int classes = storable_classes(gt.space);
  const std::uint8_t unk = unknown_id(gt.space);

  ConfusionMatrix cm;
  cm.space = gt.space;
  cm.num_classes = classes;
  cm.counts.assign(static_cast<std::size_t>(classes) * classes, 0);

#pragma omp parallel
  {
    std::vector<std::uint64_t> local(cm.counts.size(), 0);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(gt.labels.size());
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const std::uint8_t g = gt.labels[i];
      if (g == unk) continue;
      std::uint8_t p = pred.labels[i];
      if (p == unk) p = 0;  // masked prediction scored as empty
      ++local[static_cast<std::size_t>(g) * classes + p];
    }
#pragma omp critical
    for (std::size_t i = 0; i < local.size(); ++i) cm.counts[i] += local[i];
  }
  return cm;
}

std::optional<double> iou(const ConfusionMatrix& cm, int cls) {
  const std::uint64_t tp = cm.at(cls, cls);
  std::uint64_t row = 0, col = 0;
  for (int c = 0; c < cm.num_classes; ++c) {
    row += cm.at(cls, c);
    col += cm.at(c, cls);
  }
  const std::uint64_t denom = row + col - tp;  // TP + FP + FN
  if (denom == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(denom);
}

std::optional<double> miou(const ConfusionMatrix& cm) {
  double sum = 0.0;
  int defined = 0;
  for (int c = 1; c < cm.num_classes; ++c) {  // c0 (empty/void) excluded
    if (const auto v = iou(cm, c)) {
      sum += *v;
      ++defined;
    }
  }
  if (defined == 0) return std::nullopt;
  return sum / defined;
}

std::optional<double> sc_iou(const VoxelGrid& pred, const VoxelGrid& gt) {
  check_aligned(pred, gt);
  const std::uint8_t unk = unknown_id(gt.space);
  std::uint64_t tp = 0, fp = 0, fn = 0;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(gt.labels.size());
#pragma omp parallel for schedule(static) reduction(+ : tp, fp, fn)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::uint8_t g = gt.labels[i];
    if (g == unk) continue;
    const std::uint8_t p = pred.labels[i];
    const bool gt_occ = g != 0;
    const bool pred_occ = p != 0 && p != unk;
    if (gt_occ && pred_occ) ++tp;
    else if (!gt_occ && pred_occ) ++fp;
    else if (gt_occ && !pred_occ) ++fn;
  }
  const std::uint64_t denom = tp + fp + fn;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(denom);
}

ClassWeights ClassWeights::uniform(int num_classes) {
  ClassWeights w;
  w.weight.assign(static_cast<std::size_t>(num_classes), 1.0);
  return w;
}

double weighted_ce(const ProbGrid& p, const VoxelGrid& gt, const ClassWeights& w,
                   CrossEntropyForm form) {
  check_prob(p, gt);
  if (w.weight.size() != static_cast<std::size_t>(p.num_classes)) {
    throw InputError("class weight count does not match probability grid");
  }
  for (const double wc : w.weight) {
    if (!(wc > 0.0)) throw InputError("class weights must be positive");
  }
  const std::uint8_t unk = unknown_id(gt.space);
  const int m = p.num_classes;

  double sum = 0.0;
  std::uint64_t count = 0;
  const std::size_t n = gt.labels.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t tar = gt.labels[i];
    if (tar == unk) continue;
    if (tar >= m) throw InputError("ground-truth class outside the scored set");
    const double* row = p.values.data() + i * m;
    double y_tar, lse;
    if (p.logits) {
      double mx = row[0];
      for (int c = 1; c < m; ++c) mx = std::max(mx, row[c]);
      double s = 0.0;
      for (int c = 0; c < m; ++c) s += std::exp(row[c] - mx);
      lse = mx + std::log(s);
      y_tar = row[tar];
    } else {
      double s = 0.0;
      for (int c = 0; c < m; ++c) s += std::max(row[c], kLogFloor);
      lse = std::log(s);
      y_tar = std::log(std::max(row[tar], kLogFloor));
    }
    sum += w.weight[tar] * (lse - y_tar);
    ++count;
  }
  if (count == 0) throw InputError("no valid voxels to score");
  const double ce = sum / static_cast<double>(count);
  return form == CrossEntropyForm::Standard ? ce : -ce;
}

double scale_loss(const ProbGrid& p, const VoxelGrid& gt) {
  check_prob(p, gt);
  const std::uint8_t unk = unknown_id(gt.space);
  const std::vector<double> prob = probabilities(p);

  std::vector<double> rows;
  std::vector<int> targets;
  for (std::size_t i = 0; i < gt.labels.size(); ++i) {
    if (gt.labels[i] == unk) continue;
    targets.push_back(gt.labels[i]);
    for (int c = 0; c < p.num_classes; ++c) {
      rows.push_back(prob[i * p.num_classes + c]);
    }
  }
  if (targets.empty()) throw InputError("no valid voxels to score");

  std::vector<int> classes;
  for (int c = 1; c < p.num_classes; ++c) classes.push_back(c);
  return scale_loss_on(rows, p.num_classes, targets, classes);
}

double scale_loss_geo(const ProbGrid& p, const VoxelGrid& gt) {
  check_prob(p, gt);
  const std::uint8_t unk = unknown_id(gt.space);
  const std::vector<double> prob = probabilities(p);

  // binarize: class 1 = occupied (everything but c0)
  std::vector<double> rows;
  std::vector<int> targets;
  for (std::size_t i = 0; i < gt.labels.size(); ++i) {
    if (gt.labels[i] == unk) continue;
    targets.push_back(gt.labels[i] == 0 ? 0 : 1);
    double occ = 0.0;
    for (int c = 1; c < p.num_classes; ++c) occ += prob[i * p.num_classes + c];
    rows.push_back(1.0 - occ);
    rows.push_back(occ);
  }
  if (targets.empty()) throw InputError("no valid voxels to score");
  return scale_loss_on(rows, 2, targets, {1});
}

LossReport total_loss(double ce, double scal_sem, double scal_geo) {
  LossReport r;
  r.ce = ce;
  r.scal_sem = scal_sem;
  r.scal_geo = scal_geo;
  r.total = ce + scal_sem + scal_geo;
  return r;
}

nlohmann::json metric_report(const VoxelGrid& pred, const VoxelGrid& gt) {
  const ConfusionMatrix cm = confusion(pred, gt);
  nlohmann::json per_class = nlohmann::json::object();
  for (int c = 0; c < cm.num_classes; ++c) {
    const auto v = iou(cm, c);
    per_class[label_name(gt.space, static_cast<std::uint8_t>(c))] =
        v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  }
  const auto m = miou(cm);
  const auto sc = sc_iou(pred, gt);
  nlohmann::json j;
  j["label_space"] = gt.space == LabelSpace::Semantic ? "semantic" : "cost";
  j["evaluated_voxels"] = cm.total();
  j["per_class_iou"] = per_class;
  j["miou"] = m ? nlohmann::json(*m) : nlohmann::json(nullptr);
  j["sc_iou"] = sc ? nlohmann::json(*sc) : nlohmann::json(nullptr);
  return j;
}

}  // namespace ord
