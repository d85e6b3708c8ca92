/*
 * Copyright (c) 2026 The FCPN Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <random>

#include "fcpn/checkpoint.hpp"
#include "fcpn/error.hpp"
#include "fcpn/grad_check.hpp"
#include "fcpn/hash.hpp"
#include "fcpn/ops.hpp"
#include "oracles.hpp"

using namespace fcpn;

TEST_CASE("shared subexpressions accumulate gradients") {
  auto x = Var<double>::parameter(Tensor<double>({2}, std::vector<double>{1.5, -0.5}), "x");
  // y = sum(2x) + sum(3x) through the same node.
  auto a = ops::scale(x, 2.0);
  auto b = ops::scale(x, 3.0);
  auto y = ops::weighted_sum(ops::add(a, b), Tensor<double>({2}, 1.0));
  y.backward();
  CHECK(x.grad()[0] == doctest::Approx(5.0));
  CHECK(x.grad()[1] == doctest::Approx(5.0));
}

TEST_CASE("no-grad guard records nothing") {
  auto x = Var<double>::parameter(Tensor<double>({3}, 1.0), "x");
  Var<double> y;
  {
    NoGradGuard g;
    CHECK(NoGradGuard::active());
    y = ops::relu(x);
  }
  CHECK_FALSE(NoGradGuard::active());
  CHECK_FALSE(y.requires_grad());
  CHECK(y.node()->parents.empty());
}

TEST_CASE("finite differences agree on a small composite") {
  std::mt19937_64 rng(11);
  auto x = Var<double>::parameter(oracle::random_tensor({4, 4, 4, 2}, rng), "x");
  auto w = Var<double>::parameter(oracle::random_tensor({2, 2, 2, 2, 3}, rng), "w");
  auto b = Var<double>::parameter(oracle::random_tensor({3}, rng), "b");
  auto coeffs = oracle::random_tensor({2, 2, 2, 3}, rng);
  const double err = grad_check(
      [&] { return ops::weighted_sum(ops::relu(ops::conv3d(x, w, b, 2)), coeffs); }, {x, w, b});
  CHECK(err < 1e-6);
}

TEST_CASE("grad_check catches a wrong gradient") {
  auto x = Var<double>::parameter(Tensor<double>({2}, std::vector<double>{0.3, 0.7}), "x");
  // A closure whose value ignores the tracked path gives a zero analytic
  // gradient against a non-zero numeric one.
  auto fn = [&] {
    Var<double> detached(Tensor<double>({1}, x.value()[0] * 3.0));
    return ops::add(detached, ops::weighted_sum(x, Tensor<double>({2}, 0.0)));
  };
  CHECK(grad_check(fn, {x}) > 0.5);
}

TEST_CASE("checkpoint round trip is bit exact") {
  Checkpoint c;
  c.config_blob = "{\"a\":1}";
  c.records.push_back({"w", {2, 3}, {1.5f, -0.0f, 3e-38f, 7.f, 8.f, 9.f}});
  c.records.push_back({"b", {3}, {0.f, 1.f, 2.f}});
  const auto bytes = encode_checkpoint(c);
  const auto back = decode_checkpoint(bytes);
  CHECK(back.config_blob == c.config_blob);
  REQUIRE(back.records.size() == 2);
  CHECK(back.records[0].shape == Shape{2, 3});
  CHECK(encode_checkpoint(back) == bytes);
  CHECK(back.find("b") != nullptr);
  CHECK(back.find("nope") == nullptr);
}

TEST_CASE("corrupt checkpoints raise CorruptFileError") {
  Checkpoint c;
  c.config_blob = "{}";
  c.records.push_back({"w", {2}, {1.f, 2.f}});
  auto bytes = encode_checkpoint(c);
  for (std::size_t n = 0; n < bytes.size(); ++n) {
    std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + static_cast<long>(n));
    CHECK_THROWS_AS(decode_checkpoint(cut), CorruptFileError);
  }
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_checkpoint(bad), CorruptFileError);
  auto version = bytes;
  version[4] = 9;
  CHECK_THROWS_AS(decode_checkpoint(version), CorruptFileError);
  auto extra = bytes;
  extra.push_back(0);
  CHECK_THROWS_AS(decode_checkpoint(extra), CorruptFileError);
}

TEST_CASE("fnv1a64 reference values") {
  const std::string empty;
  const std::string a = "a";
  CHECK(fnv1a64({}) == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(a.data()), 1)) ==
        0xaf63dc4c8601ec8cULL);
  CHECK(hash_hex(0xabcULL) == "0000000000000abc");
}
