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

#ifndef FORESIGHT_COSTS_CLASSIFIER_H_
#define FORESIGHT_COSTS_CLASSIFIER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "foresight/common/frame.h"

namespace foresight {

// Logistic success classifier over pooled grayscale features: the frame is
// averaged down to 16x16 gray cells, flattened and extended with a bias term.
class ClassifierModel {
 public:
  static constexpr int kGrid = 16;
  static constexpr int kFeatureDim = kGrid * kGrid + 1;

  struct TrainingInfo {
    std::string category;
    int steps = 0;
    double learning_rate = 0.0;
    int batch_size = 0;
    uint64_t seed = 0;
    double final_loss = 0.0;
    // mean training loss recorded every `loss_every` steps
    std::vector<double> loss_curve;
    int loss_every = 0;
  };

  ClassifierModel() : weights_(kFeatureDim, 0.0f) {}
  explicit ClassifierModel(std::vector<float> weights);
  ClassifierModel(std::vector<float> weights, TrainingInfo info);

  static std::vector<float> Features(std::span<const float> frame, int height,
                                     int width);
  double Logit(std::span<const float> frame, int height, int width) const;
  double Logit(const Frame& frame) const {
    return Logit(frame.data(), frame.height, frame.width);
  }

  const std::vector<float>& weights() const { return weights_; }
  const TrainingInfo& info() const { return info_; }

  // "VPCL" | u8 version 1 | u32 feature_dim | f32 weights | JSON metadata.
  void Save(const std::string& path) const;
  static ClassifierModel Load(const std::string& path);

 private:
  std::vector<float> weights_;
  TrainingInfo info_;
};

struct ClassifierTrainOptions {
  int steps = 3000;
  double learning_rate = 0.5;
  int batch_size = 32;
  int loss_every = 100;
};

// Seeded minibatch SGD on (features, label) pairs. Throws TrainingError when
// only one class is present.
ClassifierModel TrainLogistic(const std::vector<std::vector<float>>& features,
                              const std::vector<uint8_t>& labels,
                              const ClassifierTrainOptions& options,
                              uint64_t seed, const std::string& category);

// Uses every frame of the dataset with its success label for `category`.
ClassifierModel TrainSuccessClassifier(const std::string& dataset_path,
                                       const std::string& category,
                                       const ClassifierTrainOptions& options,
                                       uint64_t seed);

}  // namespace foresight

#endif  // FORESIGHT_COSTS_CLASSIFIER_H_
