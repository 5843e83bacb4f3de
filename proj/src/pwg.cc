// Copyright (c) 2026 ttsaug authors
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

#include "ttsaug/pwg.h"

#include <cmath>

namespace ttsaug {

void PwgGeneratorConfig::Validate() const {
  stack.Validate();
  TTSAUG_CHECK(!stack.causal, ConfigError, "generator stack must be non-causal");
  TTSAUG_CHECK(stack.out_params == 1 && stack.in_channels == 1, ConfigError,
               "generator maps one noise channel to one sample channel");
  TTSAUG_CHECK(stack.cond_channels >= 1, ConfigError,
               "generator needs conditioning channels");
}

void PwgDiscriminatorConfig::Validate() const {
  TTSAUG_CHECK(layers >= 2 && kernel >= 3 && kernel % 2 == 1 && channels >= 1,
               ConfigError, "discriminator needs >= 2 layers and odd kernel >= 3");
  TTSAUG_CHECK(leaky_alpha > 0.0 && leaky_alpha < 1.0, ConfigError,
               "leaky slope in (0,1)");
}

void PwgTrainConfig::Validate() const {
  stft.Validate();
  TTSAUG_CHECK(lambda_adv >= 0.0, ConfigError, "lambda_adv must be >= 0");
  TTSAUG_CHECK(discriminator_start_step >= 0, ConfigError,
               "discriminator start step must be >= 0");
}

PwgGenerator::PwgGenerator(const PwgGeneratorConfig& cfg, int64_t feature_dim,
                           int hop_samples, uint64_t seed)
    : cfg_(cfg), hop_samples_(hop_samples) {
  cfg.Validate();
  RngStream rng = MakeStream(seed, "pwg_generator_init");
  upsampler_ = ConditionUpsampler(feature_dim, cfg.stack.cond_channels,
                                  cfg.cond_kernel, hop_samples, &rng);
  stack_ = WaveNetStack(cfg.stack, &rng);
}

Var PwgGenerator::Forward(const Var& noise, const Var& cond_frames) const {
  TTSAUG_CHECK(noise.value().ndim() == 2 && noise.value().dim(1) == 1, ShapeError,
               "noise must be [N, 1]");
  Var cond_up = upsampler_.Forward(cond_frames);
  TTSAUG_CHECK(cond_up.value().dim(0) == noise.value().dim(0), AlignmentError,
               "noise length must equal frames times hop");
  return stack_.Forward(noise, cond_up);
}

std::vector<double> PwgGenerator::Synthesize(const Tensor& cond_frames,
                                             RngStream* noise_rng) const {
  const int64_t n = cond_frames.dim(0) * hop_samples_;
  Tensor noise({n, 1});
  for (int64_t t = 0; t < n; ++t) noise.at(t, 0) = noise_rng->Gaussian();
  Var y = Forward(Var::Const(std::move(noise)), Var::Const(cond_frames));
  std::vector<double> out(static_cast<size_t>(n));
  for (int64_t t = 0; t < n; ++t) out[static_cast<size_t>(t)] = y.value().at(t, 0);
  return out;
}

void PwgGenerator::CollectParams(std::vector<NamedParam>* out) {
  upsampler_.CollectParams("pwg.cond", out);
  stack_.CollectParams("pwg.stack", out);
}

PwgDiscriminator::PwgDiscriminator(const PwgDiscriminatorConfig& cfg, uint64_t seed)
    : cfg_(cfg) {
  cfg.Validate();
  RngStream rng = MakeStream(seed, "pwg_discriminator_init");
  int64_t ch = 1;
  for (int i = 0; i < cfg.layers; ++i) {
    const bool last = i == cfg.layers - 1;
    const int dilation = i == 0 ? 1 : i;  // linearly increasing after layer 0
    convs_.emplace_back(ch, last ? 1 : cfg.channels, cfg.kernel, dilation,
                        PadMode::kSame, &rng, true);
    ch = last ? 1 : cfg.channels;
  }
}

Var PwgDiscriminator::Forward(const Var& x) const {
  TTSAUG_CHECK(x.value().ndim() == 2 && x.value().dim(1) == 1, ShapeError,
               "discriminator input must be [N, 1]");
  Var h = x;
  for (size_t i = 0; i < convs_.size(); ++i) {
    h = convs_[i].Forward(h);
    if (i + 1 < convs_.size()) h = LeakyRelu(h, cfg_.leaky_alpha);
  }
  return h;
}

void PwgDiscriminator::CollectParams(std::vector<NamedParam>* out) {
  for (size_t i = 0; i < convs_.size(); ++i)
    convs_[i].Collect("pwgd.conv" + std::to_string(i), out);
}

PwgStepStats PwgTrainStep(const std::vector<const PwgItem*>& batch,
                          PwgGenerator* generator, PwgDiscriminator* discriminator,
                          Adam* gen_opt, Adam* disc_opt,
                          const StftLossComputer& stft, const PwgTrainConfig& cfg,
                          int64_t step, RngStream* noise_rng) {
  TTSAUG_CHECK(!batch.empty(), DataError, "empty vocoder batch");
  cfg.Validate();
  PwgStepStats stats;
  stats.disc_active = step >= cfg.discriminator_start_step && cfg.lambda_adv > 0.0;
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  std::vector<Tensor> fakes;
  std::vector<const PwgItem*> items(batch.begin(), batch.end());
  fakes.reserve(items.size());
  Var gen_loss;
  for (const PwgItem* item : items) {
    const auto n = static_cast<int64_t>(item->samples.size());
    TTSAUG_CHECK(n == item->cond.dim(0) * generator->hop_samples(), AlignmentError,
                 "vocoder item samples do not match frames times hop");
    Tensor noise({n, 1});
    for (int64_t t = 0; t < n; ++t) noise.at(t, 0) = noise_rng->Gaussian();
    Var fake = generator->Forward(Var::Const(std::move(noise)),
                                  Var::Const(item->cond));
    fakes.push_back(fake.value());

    StftLossOut lo = stft.Loss(Var::Const(Tensor::FromVector(item->samples)),
                               Reshape(fake, {n}));
    stats.stft_sc += lo.spectral_convergence.item() * inv_b;
    stats.stft_mag += lo.log_magnitude.item() * inv_b;
    Var item_loss = Add(lo.spectral_convergence, lo.log_magnitude);
    if (stats.disc_active) {
      Var score = discriminator->Forward(fake);
      Var adv = MseLoss(score, Var::Const(Tensor::Full(score.value().shape(), 1.0)));
      stats.adversarial += adv.item() * inv_b;
      item_loss = Add(item_loss, Scale(adv, cfg.lambda_adv));
    }
    gen_loss = gen_loss.defined() ? Add(gen_loss, item_loss) : item_loss;
  }
  gen_loss = Scale(gen_loss, inv_b);
  stats.gen_total = gen_loss.item();
  TTSAUG_CHECK(std::isfinite(stats.gen_total), NumericError,
               "training aborted: non-finite generator loss");
  gen_opt->ZeroGrad();
  if (stats.disc_active) disc_opt->ZeroGrad();  // adversarial term leaks there
  Backward(gen_loss);
  gen_opt->Step();

  if (stats.disc_active) {
    Var disc_loss;
    for (size_t i = 0; i < items.size(); ++i) {
      const auto n = static_cast<int64_t>(items[i]->samples.size());
      Tensor real({n, 1});
      for (int64_t t = 0; t < n; ++t)
        real.at(t, 0) = items[i]->samples[static_cast<size_t>(t)];
      Var real_score = discriminator->Forward(Var::Const(std::move(real)));
      Var fake_score = discriminator->Forward(Var::Const(fakes[i]));
      Var l = Add(MseLoss(real_score,
                          Var::Const(Tensor::Full(real_score.value().shape(), 1.0))),
                  MseLoss(fake_score,
                          Var::Const(Tensor::Full(fake_score.value().shape(), 0.0))));
      disc_loss = disc_loss.defined() ? Add(disc_loss, l) : l;
    }
    disc_loss = Scale(disc_loss, inv_b);
    stats.disc_loss = disc_loss.item();
    TTSAUG_CHECK(std::isfinite(stats.disc_loss), NumericError,
                 "training aborted: non-finite discriminator loss");
    disc_opt->ZeroGrad();
    Backward(disc_loss);
    disc_opt->Step();
  }
  return stats;
}

}  // namespace ttsaug
