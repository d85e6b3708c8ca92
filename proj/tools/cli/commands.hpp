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

#ifndef FCPN_CLI_COMMANDS_HPP
#define FCPN_CLI_COMMANDS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fcpn::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInvalid = 2,  // bad config, arguments or input data
  kExitDiverged = 3,
  kExitCorrupt = 4,  // checkpoint or FCVX file failed validation
};

/// Runs `body` and maps library exceptions to exit codes, printing the
/// message to `err`.
int guarded(std::ostream& err, const std::function<int()>& body);

/// Thread count: the flag if given, else FCPN_THREADS, else all cores.
void configure_threads(std::optional<int> flag);

struct TrainArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
  std::optional<std::string> dataset_dir;
  std::optional<std::string> output_dir;
  std::optional<std::string> checkpoint;
};

struct InferArgs {
  std::string checkpoint;
  std::string input;
  std::string output;
  std::optional<std::string> head;
  std::optional<int> category;
};

struct EvalArgs {
  std::string mode = "voxel";  // voxel | part
  std::vector<std::string> preds;
  std::vector<std::string> gts;
  std::optional<std::string> frequencies;
  std::optional<std::string> report;
  std::optional<std::string> miou_report;
};

struct SynthArgs {
  std::uint64_t seed = 0;
  std::size_t count = 8;
  std::string out_dir;
  std::string kind = "scenes";  // scenes | parts | captions
  bool snap = false;
};

struct InspectArgs {
  std::string path;
  std::optional<std::string> slices_csv;
};

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err);
int cmd_infer(const InferArgs& args, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err);
int cmd_inspect(const InspectArgs& args, std::ostream& out, std::ostream& err);

}  // namespace fcpn::cli

#endif  // FCPN_CLI_COMMANDS_HPP
