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

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "cli/commands.hpp"

using namespace fcpn::cli;

int main(int argc, char** argv) {
  CLI::App app{"Fully-convolutional point network toolkit"};
  app.require_subcommand(1);
  std::optional<int> threads;
  app.add_option("--threads", threads, "Worker threads (default: FCPN_THREADS, else all cores)");

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train a model from a run config");
  t->add_option("--config", train.config, "Run config (JSON)")->required();
  t->add_option("--seed", train.seed, "Override the config seed");
  t->add_option("--epochs", train.epochs, "Override schedule.epochs");
  t->add_option("--dataset", train.dataset_dir, "Override dataset_dir");
  t->add_option("--output", train.output_dir, "Override output_dir");
  t->add_option("--checkpoint", train.checkpoint, "Override checkpoint");

  InferArgs infer;
  auto* i = app.add_subcommand("infer", "Run a checkpoint on one point cloud");
  i->add_option("--checkpoint", infer.checkpoint)->required();
  i->add_option("--input", infer.input, "Point cloud (.ply, .xyz, .xyzl)")->required();
  i->add_option("--output", infer.output, "FCVX (voxel head) or xyzl (point head)");
  i->add_option("--head", infer.head, "Expected head: voxel, point or caption");
  i->add_option("--category", infer.category, "Object class id for the point head");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Score predictions against ground truth");
  e->add_option("--mode", eval.mode, "voxel (FCVX files) or part (xyzl files named <category>_*)");
  e->add_option("--pred", eval.preds)->required();
  e->add_option("--gt", eval.gts)->required();
  e->add_option("--frequencies", eval.frequencies, "Per-class weights for the weighted average");
  e->add_option("--report", eval.report, "Per-class CSV output");
  e->add_option("--miou-report", eval.miou_report, "Per-category mIoU CSV (part mode)");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Write synthetic labelled data");
  s->add_option("--seed", synth.seed);
  s->add_option("--count", synth.count);
  s->add_option("--out", synth.out_dir)->required();
  s->add_option("--kind", synth.kind, "scenes, parts or captions");
  s->add_flag("--snap", synth.snap, "Snap scene points to 5 cm voxel centers");

  InspectArgs inspect;
  auto* n = app.add_subcommand("inspect", "Describe a checkpoint or FCVX file");
  n->add_option("path", inspect.path)->required();
  n->add_option("--slices", inspect.slices_csv, "Write per-slice FCVX label maps as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  const int rc = guarded(std::cerr, [&] {
    configure_threads(threads);
    return kExitOk;
  });
  if (rc != kExitOk) return rc;

  if (*t) return cmd_train(train, std::cout, std::cerr);
  if (*i) return cmd_infer(infer, std::cout, std::cerr);
  if (*e) return cmd_eval(eval, std::cout, std::cerr);
  if (*s) return cmd_synth(synth, std::cout, std::cerr);
  return cmd_inspect(inspect, std::cout, std::cerr);
}
