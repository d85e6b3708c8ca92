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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/run_config.hpp"
#include "fcpn/checkpoint.hpp"
#include "fcpn/error.hpp"
#include "fcpn/model.hpp"
#include "fcpn/voxel_grid.hpp"

namespace fs = std::filesystem;
using namespace fcpn;
using namespace fcpn::cli;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("fcpn_cli_" + tag + "_" + std::to_string(std::rand()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write(const std::string& file, const std::string& text) { std::ofstream(file, std::ios::binary) << text; }

const char* kTinyModel = R"({"pointnet_widths": [8], "stage2_width": 8, "stage3_width": 8, "skip_width": 4,
  "merge_width": 8, "head_width": 4, "class_count": 6})";

}  // namespace

TEST_CASE("run config presets, overrides and unknown keys") {
  const auto rc = parse_run_config(R"({"preset": "part", "model": {"merge_width": 16}, "schedule": {"epochs": 3}})");
  CHECK(rc.model.s1 == doctest::Approx(0.10));
  CHECK(rc.model.merge_width == 16);
  CHECK(rc.schedule.epochs == 3);
  CHECK(rc.augment.shift == doctest::Approx(0.05));
  const auto again = parse_run_config(run_config_to_json(rc));
  CHECK(run_config_to_json(again) == run_config_to_json(rc));

  try {
    parse_run_config(R"({"schedule": {"epoch": 3}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("config.schedule.epoch") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_run_config(R"({"model": {"widths": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"preset": "mesh"})"), ConfigError);
}

TEST_CASE("synth writes the requested files and inspect reads them back") {
  TempDir dir("synth");
  std::ostringstream out, err;
  SynthArgs s;
  s.out_dir = dir.path.string();
  s.count = 2;
  CHECK(cmd_synth(s, out, err) == kExitOk);
  CHECK(fs::exists(dir / "scene_000.xyzl"));
  CHECK(fs::exists(dir / "scene_001.xyzl"));
  s.kind = "parts";
  CHECK(cmd_synth(s, out, err) == kExitOk);
  CHECK(fs::exists(dir / "1_shape_001.xyzl"));
  s.kind = "captions";
  CHECK(cmd_synth(s, out, err) == kExitOk);
  CHECK(fs::exists(dir / "captions.csv"));
  s.kind = "meshes";
  CHECK(cmd_synth(s, out, err) == kExitInvalid);

  VoxelLabelGrid g;
  g.dims = {3, 2, 1};
  g.labels = {0, 1, 2, 3, 4, 5};
  write_fcvx(dir / "g.fcvx", g);
  std::ostringstream info;
  CHECK(cmd_inspect({dir / "g.fcvx", std::nullopt}, info, err) == kExitOk);
  CHECK(info.str().find("dims 3,2,1") != std::string::npos);
}

TEST_CASE("exit codes for bad inputs") {
  TempDir dir("codes");
  std::ostringstream out, err;
  VoxelLabelGrid g;
  g.dims = {2, 2, 2};
  g.labels.assign(8, 1);
  const auto bytes = encode_fcvx(g);
  write(dir / "cut.fcvx", std::string(bytes.begin(), bytes.end() - 3));
  CHECK(cmd_inspect({dir / "cut.fcvx", std::nullopt}, out, err) == kExitCorrupt);
  write(dir / "junk.bin", "JUNKJUNK");
  CHECK(cmd_inspect({dir / "junk.bin", std::nullopt}, out, err) == kExitCorrupt);
  CHECK(cmd_inspect({dir / "absent.fcvx", std::nullopt}, out, err) == kExitInvalid);

  InferArgs inf;
  inf.checkpoint = dir / "cut.fcvx";
  inf.input = dir / "nothing.xyzl";
  inf.output = dir / "o.fcvx";
  CHECK(cmd_infer(inf, out, err) != kExitOk);

  write(dir / "run.json", R"({"schedule": {"epochs": 1}})");
  TrainArgs t;
  t.config = dir / "run.json";
  CHECK(cmd_train(t, out, err) == kExitInvalid);
  t.dataset_dir = dir / "missing";
  CHECK(cmd_train(t, out, err) == kExitInvalid);
  CHECK(err.str().find("dataset_dir") != std::string::npos);
}

TEST_CASE("eval of identical grids reports 1.0") {
  TempDir dir("eval");
  VoxelLabelGrid g;
  g.dims = {4, 1, 1};
  g.labels = {0, 1, 2, 2};
  write_fcvx(dir / "gt.fcvx", g);
  EvalArgs e;
  e.preds = {dir / "gt.fcvx"};
  e.gts = {dir / "gt.fcvx"};
  e.report = dir / "report.csv";
  std::ostringstream out, err;
  CHECK(cmd_eval(e, out, err) == kExitOk);
  CHECK(slurp(dir / "report.csv") == "class,total,correct,accuracy\n1,1,1,1\n2,2,2,1\n");
}

TEST_CASE("inference is deterministic and thread-count independent") {
  TempDir dir("infer");
  auto cfg = config_from_json(kTinyModel);
  FcpnModel<float> m(cfg, 21);
  write_checkpoint(dir / "m.fcpn", m.to_checkpoint());
  std::ostringstream out, err;
  SynthArgs s;
  s.out_dir = dir.path.string();
  s.count = 1;
  REQUIRE(cmd_synth(s, out, err) == kExitOk);

  InferArgs inf;
  inf.checkpoint = dir / "m.fcpn";
  inf.input = dir / "scene_000.xyzl";
  inf.output = dir / "a.fcvx";
  REQUIRE(cmd_infer(inf, out, err) == kExitOk);
  ::setenv("FCPN_THREADS", "3", 1);
  configure_threads(std::nullopt);
  inf.output = dir / "b.fcvx";
  REQUIRE(cmd_infer(inf, out, err) == kExitOk);
  ::setenv("FCPN_THREADS", "many", 1);
  CHECK_THROWS_AS(configure_threads(std::nullopt), ConfigError);
  ::unsetenv("FCPN_THREADS");
  configure_threads(1);
  CHECK(slurp(dir / "a.fcvx") == slurp(dir / "b.fcvx"));
  const auto dims = read_fcvx(dir / "a.fcvx").dims;
  // The auto canvas spans the cloud in whole S3 cells (12 output voxels).
  CHECK(dims[0] == 48);
  CHECK(dims[1] == 48);
  CHECK(dims[2] % 12 == 0);
}

TEST_CASE("train writes a checkpoint, a loss curve and the resolved config") {
  TempDir dir("train");
  std::ostringstream out, err;
  SynthArgs s;
  s.out_dir = (dir.path / "data").string();
  s.count = 1;
  s.snap = true;
  REQUIRE(cmd_synth(s, out, err) == kExitOk);
  write(dir / "run.json", std::string(R"({"model": )") + kTinyModel +
                              R"(, "schedule": {"epochs": 1, "batch_size": 2}, "resample_points": 1024})");
  TrainArgs t;
  t.config = dir / "run.json";
  t.dataset_dir = (dir.path / "data").string();
  t.output_dir = (dir.path / "run").string();
  t.seed = 5;
  REQUIRE(cmd_train(t, out, err) == kExitOk);
  CHECK(fs::exists(dir.path / "run" / "model.fcpn"));
  CHECK(slurp((dir.path / "run" / "loss.csv").string()).rfind("step,lr,loss\n", 0) == 0);
  const auto rc = load_run_config((dir.path / "run" / "run_config.json").string());
  CHECK(rc.seed == 5);
  CHECK(rc.model.merge_width == 8);
}
