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

#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "test_util.h"
#include "ttsaug/autograd.h"
#include "ttsaug/nn.h"
#include "ttsaug/optim.h"
#include "ttsaug/serialize.h"

using namespace ttsaug;
using testutil::CheckGradients;
using testutil::SampleProbes;

namespace {

Tensor RandomTensor(std::vector<int64_t> shape, RngStream* rng) {
  Tensor t(std::move(shape));
  for (int64_t i = 0; i < t.size(); ++i) t[i] = rng->Gaussian();
  return t;
}

}  // namespace

TEST_CASE("matmul forward matches naive triple loop") {
  RngStream rng(7);
  Tensor a = RandomTensor({3, 4}, &rng);
  Tensor b = RandomTensor({4, 5}, &rng);
  Tensor c = MatMul(a, b);
  for (int64_t i = 0; i < 3; ++i)
    for (int64_t j = 0; j < 5; ++j) {
      double s = 0.0;
      for (int64_t k = 0; k < 4; ++k) s += a.at(i, k) * b.at(k, j);
      CHECK(c.at(i, j) == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("gradients of composite expression match finite differences") {
  RngStream rng(11);
  std::vector<NamedParam> params;
  Var w1 = Var::Leaf(RandomTensor({4, 6}, &rng), true);
  Var w2 = Var::Leaf(RandomTensor({6, 3}, &rng), true);
  Var b = Var::Leaf(RandomTensor({6}, &rng), true);
  params.push_back({"w1", w1});
  params.push_back({"w2", w2});
  params.push_back({"b", b});
  Tensor x = RandomTensor({5, 4}, &rng);
  Tensor tgt = RandomTensor({5, 3}, &rng);
  auto loss_fn = [&]() {
    Var h = Tanh(AddRow(MatMul(Var::Const(x), w1), b));
    Var y = MatMul(h, w2);
    return Add(L1Loss(y, Var::Const(tgt)), MseLoss(Sigmoid(y), Var::Const(tgt)));
  };
  const double err = CheckGradients(params, loss_fn, SampleProbes(params, 20, 3));
  CHECK(err < 1e-6);
}

TEST_CASE("conv1d gradients, same and causal padding, with dilation") {
  RngStream rng(13);
  for (int dilation : {1, 2, 4}) {
    std::vector<NamedParam> params;
    Var w = Var::Leaf(RandomTensor({3, 2, 4}, &rng), true);
    Var bias = Var::Leaf(RandomTensor({4}, &rng), true);
    params.push_back({"w", w});
    params.push_back({"bias", bias});
    Tensor x = RandomTensor({9, 2}, &rng);
    Tensor tgt = RandomTensor({9, 4}, &rng);
    const int span = 2 * dilation;
    auto loss_same = [&]() {
      Var y = Conv1d(Var::Const(x), w, bias, dilation, span / 2, span - span / 2);
      return MseLoss(y, Var::Const(tgt));
    };
    auto loss_causal = [&]() {
      Var y = Conv1d(Var::Const(x), w, bias, dilation, span, 0);
      return MseLoss(y, Var::Const(tgt));
    };
    CHECK(CheckGradients(params, loss_same, SampleProbes(params, 10, 5)) < 1e-6);
    CHECK(CheckGradients(params, loss_causal, SampleProbes(params, 10, 6)) < 1e-6);
  }
}

TEST_CASE("conv1d gradient w.r.t. input") {
  RngStream rng(17);
  std::vector<NamedParam> params;
  Var x = Var::Leaf(RandomTensor({7, 3}, &rng), true);
  params.push_back({"x", x});
  Tensor w = RandomTensor({5, 3, 2}, &rng);
  Tensor tgt = RandomTensor({7, 2}, &rng);
  auto loss_fn = [&]() {
    Var y = Conv1d(x, Var::Const(w), Var(), 1, 2, 2);
    return MseLoss(y, Var::Const(tgt));
  };
  CHECK(CheckGradients(params, loss_fn, SampleProbes(params, 10, 9)) < 1e-6);
}

TEST_CASE("layer norm gradients") {
  RngStream rng(19);
  std::vector<NamedParam> params;
  Var x = Var::Leaf(RandomTensor({4, 6}, &rng), true);
  Var gamma = Var::Leaf(Tensor::Full({6}, 1.3), true);
  Var beta = Var::Leaf(RandomTensor({6}, &rng), true);
  params.push_back({"x", x});
  params.push_back({"gamma", gamma});
  params.push_back({"beta", beta});
  Tensor tgt = RandomTensor({4, 6}, &rng);
  auto loss_fn = [&]() {
    return MseLoss(LayerNormRows(x, gamma, beta), Var::Const(tgt));
  };
  CHECK(CheckGradients(params, loss_fn, SampleProbes(params, 15, 21)) < 1e-5);
}

TEST_CASE("softmax with mask: masked entries get zero probability") {
  Tensor x({2, 4});
  for (int64_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
  std::vector<uint8_t> mask = {1, 1, 0, 1};
  Var y = SoftmaxRows(Var::Const(x), &mask);
  for (int64_t t = 0; t < 2; ++t) {
    CHECK(y.value().at(t, 2) == 0.0);
    double s = 0.0;
    for (int64_t d = 0; d < 4; ++d) s += y.value().at(t, d);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("softmax gradient matches finite differences") {
  RngStream rng(23);
  std::vector<NamedParam> params;
  Var x = Var::Leaf(RandomTensor({3, 5}, &rng), true);
  params.push_back({"x", x});
  Tensor tgt = RandomTensor({3, 5}, &rng);
  std::vector<uint8_t> mask = {1, 0, 1, 1, 1};
  auto loss_fn = [&]() { return MseLoss(SoftmaxRows(x, &mask), Var::Const(tgt)); };
  CHECK(CheckGradients(params, loss_fn, SampleProbes(params, 12, 31)) < 1e-6);
}

TEST_CASE("lstm cell gradients through a short sequence") {
  RngStream rng(29);
  LstmCell cell(3, 4, &rng);
  std::vector<NamedParam> params;
  cell.Collect("lstm", &params);
  Tensor x = RandomTensor({5, 3}, &rng);
  Tensor tgt = RandomTensor({5, 4}, &rng);
  auto loss_fn = [&]() {
    return MseLoss(cell.Sequence(Var::Const(x)), Var::Const(tgt));
  };
  CHECK(CheckGradients(params, loss_fn, SampleProbes(params, 15, 37)) < 1e-6);
}

TEST_CASE("lstm graph step and inference step agree") {
  RngStream rng(31);
  LstmCell cell(3, 4, &rng);
  Tensor x = RandomTensor({6, 3}, &rng);
  Var seq = cell.Sequence(Var::Const(x));
  std::vector<double> h(4, 0.0), c(4, 0.0);
  for (int64_t t = 0; t < 6; ++t) {
    std::vector<double> xt(3);
    for (int64_t d = 0; d < 3; ++d) xt[static_cast<size_t>(d)] = x.at(t, d);
    cell.StepInference(xt, &h, &c);
    for (int64_t d = 0; d < 4; ++d)
      CHECK(seq.value().at(t, d) ==
            doctest::Approx(h[static_cast<size_t>(d)]).epsilon(1e-12));
  }
}

TEST_CASE("multi-head attention gradients") {
  RngStream rng(41);
  MultiHeadSelfAttention attn(6, 2, &rng);
  std::vector<NamedParam> params;
  attn.Collect("attn", &params);
  Tensor x = RandomTensor({4, 6}, &rng);
  Tensor tgt = RandomTensor({4, 6}, &rng);
  auto loss_fn = [&]() {
    return MseLoss(attn.Forward(Var::Const(x), nullptr), Var::Const(tgt));
  };
  CHECK(CheckGradients(params, loss_fn, SampleProbes(params, 15, 43)) < 1e-6);
}

TEST_CASE("weight norm: effective weight has per-channel norm g") {
  RngStream rng(47);
  Var v = Var::Leaf(RandomTensor({3, 2, 4}, &rng), true);
  Var g = Var::Leaf(Tensor::Full({4}, 2.5), true);
  Var w = WeightNorm(v, g);
  for (int64_t o = 0; o < 4; ++o) {
    double sq = 0.0;
    for (int64_t j = 0; j < 3; ++j)
      for (int64_t c = 0; c < 2; ++c) sq += w.value().at(j, c, o) * w.value().at(j, c, o);
    CHECK(std::sqrt(sq) == doctest::Approx(2.5).epsilon(1e-9));
  }
}

TEST_CASE("weight norm gradients") {
  RngStream rng(53);
  std::vector<NamedParam> params;
  Var v = Var::Leaf(RandomTensor({2, 3, 2}, &rng), true);
  Var g = Var::Leaf(Tensor::Full({2}, 1.7), true);
  params.push_back({"v", v});
  params.push_back({"g", g});
  Tensor x = RandomTensor({6, 3}, &rng);
  Tensor tgt = RandomTensor({6, 2}, &rng);
  auto loss_fn = [&]() {
    Var y = Conv1d(Var::Const(x), WeightNorm(v, g), Var(), 1, 0, 1);
    return MseLoss(y, Var::Const(tgt));
  };
  CHECK(CheckGradients(params, loss_fn, SampleProbes(params, 12, 59)) < 1e-6);
}

TEST_CASE("repeat rows and zero rows gradients") {
  RngStream rng(61);
  std::vector<NamedParam> params;
  Var x = Var::Leaf(RandomTensor({3, 2}, &rng), true);
  params.push_back({"x", x});
  std::vector<int> times = {2, 1, 3};
  Tensor tgt = RandomTensor({6, 2}, &rng);
  std::vector<uint8_t> keep = {1, 1, 0, 1, 1, 1};
  auto loss_fn = [&]() {
    return L1Loss(ZeroRows(RepeatRows(x, times), keep), Var::Const(tgt));
  };
  CHECK(CheckGradients(params, loss_fn, SampleProbes(params, 6, 67)) < 1e-6);
}

TEST_CASE("embedding lookup accumulates gradient for repeated ids") {
  RngStream rng(71);
  Var table = Var::Leaf(RandomTensor({5, 3}, &rng), true);
  std::vector<int> ids = {2, 2, 4};
  Var y = EmbeddingLookup(table, ids);
  Var loss = Sum(y);
  Backward(loss);
  for (int64_t d = 0; d < 3; ++d) {
    CHECK(table.grad().at(2, d) == doctest::Approx(2.0));
    CHECK(table.grad().at(4, d) == doctest::Approx(1.0));
    CHECK(table.grad().at(0, d) == doctest::Approx(0.0));
  }
}

TEST_CASE("frame signal gradient scatters overlapping frames") {
  RngStream rng(73);
  std::vector<NamedParam> params;
  Var x = Var::Leaf(RandomTensor({12}, &rng), true);
  params.push_back({"x", x});
  Tensor tgt = RandomTensor({4, 6}, &rng);
  auto loss_fn = [&]() {
    return MseLoss(FrameSignal(x, 6, 2), Var::Const(tgt));
  };
  CHECK(CheckGradients(params, loss_fn, SampleProbes(params, 8, 79)) < 1e-6);
}

TEST_CASE("adam reduces a quadratic") {
  Var w = Var::Leaf(Tensor::FromVector({5.0, -3.0}), true);
  AdamOptions opts;
  opts.lr = 0.1;
  Adam adam({{"w", w}}, opts);
  for (int i = 0; i < 300; ++i) {
    adam.ZeroGrad();
    Var loss = MseLoss(w, Var::Const(Tensor::FromVector({1.0, 2.0})));
    Backward(loss);
    adam.Step();
  }
  CHECK(w.value()[0] == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(w.value()[1] == doctest::Approx(2.0).epsilon(1e-2));
}

TEST_CASE("archive round trip and corruption detection") {
  Archive ar;
  RngStream rng(83);
  ar.tensors["a"] = RandomTensor({3, 4}, &rng);
  ar.tensors["b"] = RandomTensor({7}, &rng);
  ar.strings["config"] = "{\"x\":1}";
  const std::string path = "/tmp/ttsaug_core_test_archive.bin";
  SaveArchive(path, ar);
  Archive back = LoadArchive(path);
  CHECK(back.tensors.at("a").SameShape(ar.tensors.at("a")));
  for (int64_t i = 0; i < ar.tensors["b"].size(); ++i)
    CHECK(back.tensors.at("b")[i] == ar.tensors.at("b")[i]);
  CHECK(back.strings.at("config") == "{\"x\":1}");

  // Flip one payload byte; the CRC must catch it.
  std::string raw = ReadTextFile(path);
  raw[raw.size() / 2] = static_cast<char>(raw[raw.size() / 2] ^ 0x40);
  WriteTextFile(path, raw);
  CHECK_THROWS_AS(LoadArchive(path), IntegrityError);
  std::remove(path.c_str());
}

TEST_CASE("dropout disabled is identity; enabled is seeded-deterministic") {
  RngStream rng(89);
  Tensor x = RandomTensor({4, 4}, &rng);
  Var off = Dropout(Var::Const(x), 0.5, nullptr, false);
  for (int64_t i = 0; i < x.size(); ++i) CHECK(off.value()[i] == x[i]);
  RngStream d1(100), d2(100);
  Var a = Dropout(Var::Const(x), 0.5, &d1, true);
  Var b = Dropout(Var::Const(x), 0.5, &d2, true);
  for (int64_t i = 0; i < x.size(); ++i) CHECK(a.value()[i] == b.value()[i]);
}
