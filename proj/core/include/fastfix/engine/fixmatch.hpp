#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fastfix/augment/augment.hpp"
#include "fastfix/dataio/dataset.hpp"
#include "fastfix/gradcore/model.hpp"
#include "fastfix/gradcore/optim.hpp"

namespace fastfix {

struct StepStats {
  std::uint64_t t = 0;
  std::size_t l_t = 0;
  std::size_t u_t = 0;
  std::size_t n_confident = 0;
  std::size_t n_correct_confident = 0;
  double loss_s = 0.0;
  double loss_u = 0.0;
  double loss_total = 0.0;
  double lambda_t = 0.0;
  double lr = 0.0;
};

/// Inputs of one iteration, already augmented and standardised, [N, C, H, W].
/// `unlabeled_truth` is optional and only feeds the correctness counter.
struct StepBatch {
  Tensor labeled;
  std::vector<int> labels;
  Tensor unlabeled_weak;
  Tensor unlabeled_strong;
  std::vector<int> unlabeled_truth;

  std::size_t u_t() const { return unlabeled_weak.empty() ? 0 : unlabeled_weak.dim(0); }
};

/// Pseudo labels from the no-gradient weak pass.
struct PseudoBatch {
  std::vector<int> labels;
  std::vector<float> confidence;
  std::vector<std::uint8_t> mask;

  std::size_t confident() const;
};

/// Argmax labels and the confidence mask of row-wise class probabilities.
PseudoBatch pseudo_from_probabilities(const Tensor& probs, std::span<const double> thresholds);

/// Weak forward without a graph, batch statistics, no running-stat update.
/// mask_i = confidence_i > thresholds[argmax_i].
PseudoBatch pseudo_label(Model& model, const Tensor& weak, std::span<const double> thresholds);

struct FixMatchLoss {
  Var<float> total;
  Var<float> supervised;
  std::optional<Var<float>> unsupervised;
  PseudoBatch pseudo;
};

/// Builds the loss on `tape`. The labeled rows and the strong views of the
/// confident samples share one forward pass; the loss is
///   CE(labeled) + lambda * sum_confident CE(strong, pseudo) / u_t
/// and reduces to CE(labeled) itself when nothing is confident.
FixMatchLoss fixmatch_loss(Model& model, Tape<float>& tape, const StepBatch& batch,
                           std::span<const double> thresholds, double lambda_t);

/// One optimisation step: loss, backward, SGD update, EMA update.
/// Returns the step statistics and leaves the pseudo labels in `pseudo_out`
/// when non-null.
StepStats fixmatch_step(Model& model, Sgd& optimizer, const StepBatch& batch,
                        std::span<const double> thresholds, double lambda_t, double ema_decay,
                        PseudoBatch* pseudo_out = nullptr);

/// Stacks images into a standardised [N, C, H, W] tensor.
Tensor pack_images(std::span<const Image> images, const ChannelStats& stats);

/// Top-1 accuracy with running statistics and no augmentation.
double evaluate(Model& model, const Dataset& test, const ChannelStats& stats, bool use_ema,
                std::size_t batch_size = 256);

/// Fraction of rows whose argmax equals the label.
double top1_accuracy(const Tensor& logits, std::span<const int> labels);

}  // namespace fastfix
