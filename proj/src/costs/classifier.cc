// Copyright 2026 The Foresight Authors
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

#include "foresight/costs/classifier.h"

#include <cmath>
#include <cstring>

#include "json.hpp"

#include "foresight/common/binary_io.h"
#include "foresight/common/errors.h"
#include "foresight/common/random.h"
#include "foresight/world/dataset.h"

namespace foresight {
namespace {

double Sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// Numerically stable -log p(label | z).
double LogLoss(double z, bool label) {
  const double m = label ? -z : z;
  return m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
}

}  // namespace

ClassifierModel::ClassifierModel(std::vector<float> weights)
    : ClassifierModel(std::move(weights), TrainingInfo{}) {}

ClassifierModel::ClassifierModel(std::vector<float> weights, TrainingInfo info)
    : weights_(std::move(weights)), info_(std::move(info)) {
  if (weights_.size() != kFeatureDim) {
    throw InvalidInputError("classifier needs exactly 257 weights");
  }
  for (float w : weights_) {
    if (!std::isfinite(w)) throw InvalidInputError("classifier weight is not finite");
  }
}

std::vector<float> ClassifierModel::Features(std::span<const float> frame,
                                             int height, int width) {
  if (height < kGrid || width < kGrid ||
      frame.size() != size_t(height) * width * 3) {
    throw InvalidInputError("frame too small for classifier features");
  }
  std::vector<double> sums(kGrid * kGrid, 0.0);
  std::vector<int> counts(kGrid * kGrid, 0);
  for (int r = 0; r < height; ++r) {
    const int gr = r * kGrid / height;
    for (int c = 0; c < width; ++c) {
      const int cell = gr * kGrid + c * kGrid / width;
      const float* px = &frame[(size_t(r) * width + c) * 3];
      sums[cell] += (double(px[0]) + px[1] + px[2]) / 3.0;
      ++counts[cell];
    }
  }
  std::vector<float> features(kFeatureDim);
  for (int i = 0; i < kGrid * kGrid; ++i) {
    features[i] = static_cast<float>(sums[i] / counts[i]);
  }
  features[kGrid * kGrid] = 1.0f;
  return features;
}

double ClassifierModel::Logit(std::span<const float> frame, int height,
                              int width) const {
  const auto f = Features(frame, height, width);
  double z = 0.0;
  for (int i = 0; i < kFeatureDim; ++i) z += double(weights_[i]) * f[i];
  return z;
}

void ClassifierModel::Save(const std::string& path) const {
  ByteWriter w;
  w.PutString("VPCL");
  w.PutU8(1);
  w.PutU32(kFeatureDim);
  w.PutF32s(weights_);
  const nlohmann::ordered_json meta = {
      {"category", info_.category},
      {"steps", info_.steps},
      {"learning_rate", info_.learning_rate},
      {"batch_size", info_.batch_size},
      {"seed", info_.seed},
      {"final_loss", info_.final_loss},
      {"loss_every", info_.loss_every},
      {"loss_curve", info_.loss_curve}};
  w.PutString(meta.dump());
  WriteFileBytes(path, w.bytes());
}

ClassifierModel ClassifierModel::Load(const std::string& path) {
  const auto bytes = ReadFileBytes(path);
  ByteReader<IoError> r(bytes);
  if (r.GetString(4) != "VPCL") throw IoError("bad classifier magic: " + path);
  if (r.GetU8() != 1) throw IoError("unsupported classifier version: " + path);
  if (r.GetU32() != kFeatureDim) throw IoError("unexpected feature_dim: " + path);
  std::vector<float> weights(kFeatureDim);
  r.GetF32s(weights);
  TrainingInfo info;
  try {
    const auto meta = nlohmann::json::parse(r.GetString(r.remaining()));
    info.category = meta.value("category", "");
    info.steps = meta.value("steps", 0);
    info.learning_rate = meta.value("learning_rate", 0.0);
    info.batch_size = meta.value("batch_size", 0);
    info.seed = meta.value("seed", uint64_t{0});
    info.final_loss = meta.value("final_loss", 0.0);
    info.loss_every = meta.value("loss_every", 0);
    info.loss_curve = meta.value("loss_curve", std::vector<double>{});
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad classifier metadata: ") + e.what());
  }
  return ClassifierModel(std::move(weights), std::move(info));
}

ClassifierModel TrainLogistic(const std::vector<std::vector<float>>& features,
                              const std::vector<uint8_t>& labels,
                              const ClassifierTrainOptions& options,
                              uint64_t seed, const std::string& category) {
  if (features.size() != labels.size() || features.empty()) {
    throw TrainingError("no training examples for " + category);
  }
  size_t positives = 0;
  for (auto l : labels) positives += l ? 1 : 0;
  if (positives == 0 || positives == labels.size()) {
    throw TrainingError("training data for " + category +
                        " contains a single class");
  }
  if (options.steps < 0 || options.batch_size < 1 || !(options.learning_rate > 0)) {
    throw TrainingError("invalid classifier training options");
  }
  constexpr int d = ClassifierModel::kFeatureDim;
  std::vector<double> w(d, 0.0), grad(d);
  Rng rng(seed);
  ClassifierModel::TrainingInfo info;
  info.category = category;
  info.steps = options.steps;
  info.learning_rate = options.learning_rate;
  info.batch_size = options.batch_size;
  info.seed = seed;
  info.loss_every = options.loss_every;

  double window_loss = 0.0;
  int window_steps = 0;
  for (int step = 0; step < options.steps; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double batch_loss = 0.0;
    for (int k = 0; k < options.batch_size; ++k) {
      const size_t i = rng.UniformInt(features.size());
      const auto& x = features[i];
      double z = 0.0;
      for (int j = 0; j < d; ++j) z += w[j] * x[j];
      const double err = Sigmoid(z) - (labels[i] ? 1.0 : 0.0);
      for (int j = 0; j < d; ++j) grad[j] += err * x[j];
      batch_loss += LogLoss(z, labels[i]);
    }
    const double scale = options.learning_rate / options.batch_size;
    for (int j = 0; j < d; ++j) w[j] -= scale * grad[j];
    window_loss += batch_loss / options.batch_size;
    if (++window_steps == options.loss_every) {
      info.loss_curve.push_back(window_loss / window_steps);
      window_loss = 0.0;
      window_steps = 0;
    }
  }
  // final loss over the full training set
  double total = 0.0;
  for (size_t i = 0; i < features.size(); ++i) {
    double z = 0.0;
    for (int j = 0; j < d; ++j) z += w[j] * features[i][j];
    total += LogLoss(z, labels[i]);
  }
  info.final_loss = total / features.size();
  std::vector<float> wf(w.begin(), w.end());
  return ClassifierModel(std::move(wf), std::move(info));
}

ClassifierModel TrainSuccessClassifier(const std::string& dataset_path,
                                       const std::string& category,
                                       const ClassifierTrainOptions& options,
                                       uint64_t seed) {
  DatasetReader reader(dataset_path);
  const auto& h = reader.header();
  const std::string prefix = "push_object_";
  int k = -1;
  if (category.rfind(prefix, 0) == 0 && category.size() == prefix.size() + 1) {
    k = category.back() - '0';
  }
  if (k < 0 || k >= static_cast<int>(h.n_categories)) {
    throw ConfigError("unrecognized task category '" + category + "'");
  }
  std::vector<std::vector<float>> features;
  std::vector<uint8_t> labels;
  for (uint32_t e = 0; e < h.n_episodes; ++e) {
    const auto rec = reader.Read(e);
    for (uint32_t t = 0; t < h.traj_len; ++t) {
      const Frame f = rec.FrameAt(h, t);
      features.push_back(ClassifierModel::Features(f.data(), f.height, f.width));
      labels.push_back(rec.success_labels[size_t(t) * h.n_categories + k]);
    }
  }
  return TrainLogistic(features, labels, options, seed, category);
}

}  // namespace foresight
