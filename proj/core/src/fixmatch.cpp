#include "fastfix/engine/fixmatch.hpp"

#include <algorithm>
#include <numeric>

#include "fastfix/error.hpp"
#include "fastfix/gradcore/ops.hpp"

namespace fastfix {
namespace {

std::size_t argmax_row(const float* row, std::size_t k) {
  return static_cast<std::size_t>(std::max_element(row, row + k) - row);
}

Tensor concat_rows(const Tensor& head, const Tensor& tail, std::span<const std::size_t> rows) {
  Shape s = head.shape();
  const std::size_t per = head.size() / s[0];
  s[0] += rows.size();
  auto out = Tensor::uninitialized(s);
  std::copy(head.raw(), head.raw() + head.size(), out.raw());
  float* dst = out.raw() + head.size();
  for (const auto r : rows) {
    std::copy(tail.raw() + r * per, tail.raw() + (r + 1) * per, dst);
    dst += per;
  }
  return out;
}

}  // namespace

std::size_t PseudoBatch::confident() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

PseudoBatch pseudo_from_probabilities(const Tensor& probs, std::span<const double> thresholds) {
  if (probs.rank() != 2 || thresholds.size() != probs.dim(1)) {
    throw ShapeError("pseudo_label", "threshold count != classes");
  }
  PseudoBatch out;
  const std::size_t n = probs.dim(0), k = probs.dim(1);
  out.labels.resize(n);
  out.confidence.resize(n);
  out.mask.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const float* row = probs.raw() + i * k;
    const auto c = argmax_row(row, k);
    out.labels[i] = static_cast<int>(c);
    out.confidence[i] = row[c];
    out.mask[i] = static_cast<double>(row[c]) > thresholds[c] ? 1 : 0;
  }
  return out;
}

PseudoBatch pseudo_label(Model& model, const Tensor& weak, std::span<const double> thresholds) {
  if (weak.empty()) return {};
  return pseudo_from_probabilities(
      ops::softmax(model.logits(weak, {.use_ema = false, .training = true, .update_stats = false})),
      thresholds);
}

FixMatchLoss fixmatch_loss(Model& model, Tape<float>& tape, const StepBatch& batch,
                           std::span<const double> thresholds, double lambda_t) {
  const std::size_t l = batch.labeled.empty() ? 0 : batch.labeled.dim(0);
  if (l == 0) throw ShapeError("fixmatch", "labeled batch is empty");
  if (batch.labels.size() != l) throw ShapeError("fixmatch", "label count != labeled batch");
  const std::size_t u = batch.u_t();
  if (u > 0 && (batch.unlabeled_strong.shape() != batch.unlabeled_weak.shape())) {
    throw ShapeError("fixmatch", "weak and strong unlabeled batches differ in shape");
  }

  FixMatchLoss out;
  out.pseudo = pseudo_label(model, batch.unlabeled_weak, thresholds);

  std::vector<std::size_t> rows;
  std::vector<int> targets;
  for (std::size_t i = 0; i < u; ++i) {
    if (out.pseudo.mask[i]) {
      rows.push_back(i);
      targets.push_back(out.pseudo.labels[i]);
    }
  }

  const ForwardOptions train{.use_ema = false, .training = true, .update_stats = true};
  if (rows.empty()) {
    auto logits = model.forward(tape, batch.labeled, train);
    out.supervised = ops::softmax_cross_entropy<float>(logits, batch.labels);
    out.total = out.supervised;
    return out;
  }

  auto logits = model.forward(tape, concat_rows(batch.labeled, batch.unlabeled_strong, rows), train);
  out.supervised = ops::softmax_cross_entropy<float>(ops::slice_rows(logits, 0, l), batch.labels);
  auto lu = ops::softmax_cross_entropy<float>(ops::slice_rows(logits, l, l + rows.size()), targets,
                                              {}, static_cast<float>(u));
  out.unsupervised = lu;
  out.total = ops::add(out.supervised, ops::scale(lu, static_cast<float>(lambda_t)));
  return out;
}

StepStats fixmatch_step(Model& model, Sgd& optimizer, const StepBatch& batch,
                        std::span<const double> thresholds, double lambda_t, double ema_decay,
                        PseudoBatch* pseudo_out) {
  Tape<float> tape;
  auto loss = fixmatch_loss(model, tape, batch, thresholds, lambda_t);

  StepStats s;
  s.l_t = batch.labels.size();
  s.u_t = batch.u_t();
  s.n_confident = loss.pseudo.confident();
  if (!batch.unlabeled_truth.empty()) {
    for (std::size_t i = 0; i < s.u_t; ++i) {
      if (loss.pseudo.mask[i] && loss.pseudo.labels[i] == batch.unlabeled_truth[i]) {
        ++s.n_correct_confident;
      }
    }
  }
  s.loss_s = loss.supervised.value()[0];
  s.loss_u = loss.unsupervised ? loss.unsupervised->value()[0] : 0.0;
  s.loss_total = loss.total.value()[0];
  s.lambda_t = lambda_t;
  s.lr = optimizer.config().lr;

  model.backward(loss.total);
  optimizer.step(model);
  ema_update(model, ema_decay);
  if (pseudo_out) *pseudo_out = std::move(loss.pseudo);
  return s;
}

Tensor pack_images(std::span<const Image> images, const ChannelStats& stats) {
  if (images.empty()) return {};
  const auto& f = images.front();
  if (stats.mean.size() != f.channels || stats.stddev.size() != f.channels) {
    throw ShapeError("pack_images", "channel statistics do not match images");
  }
  auto out = Tensor::uninitialized({images.size(), f.channels, f.height, f.width});
  const std::size_t plane = f.height * f.width;
  float* dst = out.raw();
  for (const auto& img : images) {
    if (img.channels != f.channels || img.height != f.height || img.width != f.width) {
      throw ShapeError("pack_images", "images differ in shape");
    }
    for (std::size_t c = 0; c < f.channels; ++c) {
      const float m = stats.mean[c], inv = 1.0f / stats.stddev[c];
      for (std::size_t k = 0; k < plane; ++k) *dst++ = (img.pixels[c * plane + k] - m) * inv;
    }
  }
  return out;
}

double top1_accuracy(const Tensor& logits, std::span<const int> labels) {
  if (logits.rank() != 2 || logits.dim(0) != labels.size()) {
    throw ShapeError("top1_accuracy", "logits " + shape_str(logits.shape()) + " vs " +
                                          std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) throw Error("top1_accuracy: no samples");
  const std::size_t k = logits.dim(1);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (static_cast<int>(argmax_row(logits.raw() + i * k, k)) == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double evaluate(Model& model, const Dataset& test, const ChannelStats& stats, bool use_ema,
                std::size_t batch_size) {
  if (test.size() == 0) throw Error("evaluate: empty test set");
  if (batch_size == 0) throw Error("evaluate: batch size must be positive");
  const ForwardOptions opts{.use_ema = use_ema, .training = false, .update_stats = false};
  std::size_t hits = 0;
  std::vector<Image> images;
  for (std::size_t begin = 0; begin < test.size(); begin += batch_size) {
    const std::size_t end = std::min(test.size(), begin + batch_size);
    images.clear();
    for (std::size_t i = begin; i < end; ++i) {
      images.emplace_back(test.channels, test.height, test.width, test.image(i));
    }
    const auto logits = model.logits(pack_images(images, stats), opts);
    const std::size_t k = logits.dim(1);
    for (std::size_t i = begin; i < end; ++i) {
      const auto pred = argmax_row(logits.raw() + (i - begin) * k, k);
      if (static_cast<int>(pred) == test.labels[i]) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

}  // namespace fastfix
