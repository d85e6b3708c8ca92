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

#include "cli/commands.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "fcpn/checkpoint.hpp"
#include "fcpn/class_weights.hpp"
#include "fcpn/cloud_io.hpp"
#include "fcpn/error.hpp"
#include "fcpn/hash.hpp"
#include "fcpn/metrics.hpp"
#include "fcpn/model.hpp"
#include "fcpn/synth.hpp"
#include "fcpn/train.hpp"
#include "fcpn/voxel_grid.hpp"
#include "cli/run_config.hpp"

namespace fcpn::cli {

namespace fs = std::filesystem;

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const DivergenceError& e) {
    err << "error: training diverged: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const CorruptFileError& e) {
    err << "error: corrupt file: " << e.what() << '\n';
    return kExitCorrupt;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

void configure_threads(std::optional<int> flag) {
  int n = 0;
  if (flag) {
    n = *flag;
  } else if (const char* env = std::getenv("FCPN_THREADS"); env && *env) {
    try {
      n = std::stoi(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("FCPN_THREADS: not an integer: ") + env);
    }
  }
  if (n < 0) throw ConfigError("threads: must be positive");
  if (n > 0) omp_set_num_threads(n);
}

namespace {

std::vector<fs::path> files_with(const fs::path& dir, const std::set<std::string>& exts) {
  if (!fs::is_directory(dir)) throw ConfigError("dataset_dir: " + dir.string() + " is not a directory");
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && exts.count(e.path().extension().string())) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw ConfigError("dataset_dir: no point cloud files in " + dir.string());
  return out;
}

// Leading "<digits>_" of a file name.
std::int32_t category_of(const fs::path& p) {
  const auto name = p.filename().string();
  const auto us = name.find('_');
  if (us == 0 || us == std::string::npos || !std::all_of(name.begin(), name.begin() + static_cast<long>(us), ::isdigit)) {
    throw InputError(p.string() + ": part files are named <category>_<name>");
  }
  return std::stoi(name.substr(0, us));
}

std::string vec_str(const Vec3& v) {
  std::ostringstream os;
  os << '(' << v[0] << ", " << v[1] << ", " << v[2] << ')';
  return os.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot write " + p.string());
  f << text;
  if (!f) throw InputError("write failed for " + p.string());
}

struct CaptionList {
  std::vector<std::pair<std::string, std::vector<std::int32_t>>> rows;
};

CaptionList read_caption_list(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("dataset_dir: missing " + file.string());
  CaptionList list;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    std::vector<std::int32_t> ids;
    while (std::getline(ss, cell, ',')) {
      try {
        ids.push_back(std::stoi(cell));
      } catch (const std::exception&) {
        throw ParseError(file.string() + ":" + std::to_string(n) + ": bad caption id '" + cell + "'", n);
      }
    }
    list.rows.emplace_back(line.substr(0, line.find(',')), std::move(ids));
  }
  return list;
}

int train_body(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  RunConfig rc = load_run_config(args.config);
  if (args.seed) rc.seed = *args.seed;
  if (args.epochs) rc.schedule.epochs = *args.epochs;
  if (args.dataset_dir) rc.dataset_dir = *args.dataset_dir;
  if (args.output_dir) rc.output_dir = *args.output_dir;
  if (args.checkpoint) rc.checkpoint = *args.checkpoint;
  rc.schedule.seed = rc.seed;
  rc.schedule.validate();
  if (rc.dataset_dir.empty()) throw ConfigError("dataset_dir: required");
  if (rc.output_dir.empty()) throw ConfigError("output_dir: required");
  const fs::path data(rc.dataset_dir);
  const fs::path outdir(rc.output_dir);
  fs::create_directories(outdir);

  FcpnModel<float> model(rc.model, rc.seed);
  TrainHooks hooks;
  hooks.checkpoint_dir = rc.output_dir;
  hooks.on_epoch = [&](std::size_t e, double loss) {
    err << "epoch " << e << " lr " << rc.schedule.lr_at(e) << " mean loss " << loss << '\n';
    return true;
  };
  TrainResult result;

  switch (rc.model.head) {
    case HeadType::voxel: {
      for (int a = 0; a < 3; ++a) {
        if (std::abs(rc.volumes.volume - rc.model.extent[a]) > 1e-9) {
          throw ConfigError("volumes.volume: must equal model.extent on every axis");
        }
      }
      if (std::abs(rc.volumes.label_cell - rc.model.output_cell) > 1e-12) {
        throw ConfigError("volumes.label_cell: must equal model.output_cell");
      }
      if (!rc.checkpoint.empty()) model.load(read_checkpoint(rc.checkpoint));
      std::vector<TrainingVolume> volumes;
      for (const auto& f : files_with(data, {".xyzl", ".ply"})) {
        auto scene = load_cloud(f.string());
        auto v = extract_training_volumes(scene, rc.volumes);
        std::move(v.begin(), v.end(), std::back_inserter(volumes));
      }
      if (volumes.empty()) throw ConfigError("dataset_dir: no cutout passed the volume filters");
      err << volumes.size() << " training volumes\n";
      VoxelTrainOptions o;
      o.augment = rc.augment;
      o.resample_points = rc.resample_points;
      o.hooks = hooks;
      result = train_voxel(model, std::span<const TrainingVolume>(volumes), rc.schedule, o);
      break;
    }
    case HeadType::point: {
      if (!rc.checkpoint.empty()) model.load(read_checkpoint(rc.checkpoint));
      std::vector<PointCloud> shapes;
      for (const auto& f : files_with(data, {".xyzl"})) {
        auto s = load_cloud(f.string());
        s.object_class = category_of(f);
        shapes.push_back(std::move(s));
      }
      PartTrainOptions o;
      o.augment = rc.augment;
      o.hooks = hooks;
      result = train_parts(model, std::span<const PointCloud>(shapes), rc.schedule, o);
      break;
    }
    case HeadType::caption: {
      if (rc.checkpoint.empty()) throw ConfigError("checkpoint: caption training needs a backbone checkpoint");
      model.load(read_checkpoint(rc.checkpoint), LoadMode::backbone_only);
      std::vector<CaptionFrame> frames;
      for (const auto& [file, ids] : read_caption_list(data / "captions.csv").rows) {
        CaptionFrame f;
        f.cloud = load_cloud((data / file).string());
        f.origin = canvas_for_cloud(rc.model, f.cloud).origin;
        f.targets.assign(rc.model.caption_count, 0);
        for (auto id : ids) {
          if (id < 0 || static_cast<std::size_t>(id) >= rc.model.caption_count) {
            throw InputError("captions.csv: caption id " + std::to_string(id) + " out of range");
          }
          f.targets[static_cast<std::size_t>(id)] = 1;
        }
        frames.push_back(std::move(f));
      }
      CaptionTrainOptions o;
      o.freeze_backbone = rc.freeze_backbone;
      o.hooks = hooks;
      result = train_captions(model, std::span<const CaptionFrame>(frames), rc.schedule, o);
      break;
    }
  }

  write_text(outdir / "loss.csv", loss_curve_csv(result.curve));
  write_text(outdir / "run_config.json", run_config_to_json(rc));
  const auto final_path = (outdir / "model.fcpn").string();
  write_checkpoint(final_path, model.to_checkpoint());
  out << "checkpoint " << final_path << ' ' << file_hash(final_path) << '\n';
  return kExitOk;
}

int infer_body(const InferArgs& args, std::ostream& out, std::ostream& err) {
  const auto model = FcpnModel<float>::from_checkpoint(read_checkpoint(args.checkpoint));
  const auto& cfg = model.config();
  if (args.head && *args.head != to_string(cfg.head)) {
    throw ConfigError("head: checkpoint has the " + std::string(to_string(cfg.head)) + " head, not " + *args.head);
  }
  if (cfg.head != HeadType::caption && args.output.empty()) throw ConfigError("output: required for the " + std::string(to_string(cfg.head)) + " head");
  PointCloud cloud = load_cloud(args.input);
  if (cloud.empty()) throw InputError(args.input + ": no points");
  switch (cfg.head) {
    case HeadType::voxel: {
      const Canvas canvas = canvas_for_cloud(cfg, cloud);
      if (canvas.padded()) {
        err << "notice: extent " << vec_str(canvas.requested) << " padded to " << vec_str(canvas.extent()) << '\n';
      }
      const auto grid = predict_voxels(model, cloud, canvas);
      write_fcvx(args.output, grid);
      out << "dims " << grid.dims[0] << ',' << grid.dims[1] << ',' << grid.dims[2] << " origin " << vec_str(grid.origin)
          << " cell " << grid.cell_size << '\n';
      break;
    }
    case HeadType::point: {
      if (!args.category) throw ConfigError("category: the point head needs --category");
      cloud.object_class = *args.category;
      PointCloud labelled = cloud;
      labelled.labels = predict_parts(model, cloud, PartTable{});
      save_cloud(args.output, labelled, CloudFormat::xyzl_text);
      out << "points " << labelled.size() << '\n';
      break;
    }
    case HeadType::caption: {
      const auto logits = predict_captions(model, cloud, canvas_for_cloud(cfg, cloud).origin);
      for (auto id : top_k(logits, 3)) {
        const double s = 1.0 / (1.0 + std::exp(-static_cast<double>(logits[static_cast<std::size_t>(id)])));
        out << id << ' ' << std::setprecision(6) << s << '\n';
      }
      break;
    }
  }
  return kExitOk;
}

std::vector<double> read_numbers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::vector<double> v;
  std::string tok;
  std::size_t line = 1;
  char ch;
  auto flush = [&] {
    if (tok.empty()) return;
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(line) + ": not a number: '" + tok + "'", line);
    }
    tok.clear();
  };
  while (in.get(ch)) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      flush();
      if (ch == '\n') ++line;
    } else {
      tok.push_back(ch);
    }
  }
  flush();
  return v;
}

int eval_body(const EvalArgs& args, std::ostream& out, std::ostream&) {
  if (args.preds.size() != args.gts.size() || args.preds.empty()) {
    throw ConfigError("eval: give the same positive number of --pred and --gt files");
  }
  EvalReport report;
  if (args.mode == "voxel") {
    std::vector<VoxelLabelGrid> preds, gts;
    std::size_t K = 0;
    for (std::size_t i = 0; i < args.preds.size(); ++i) {
      preds.push_back(read_fcvx(args.preds[i]));
      gts.push_back(read_fcvx(args.gts[i]));
      for (auto l : preds.back().labels) K = std::max<std::size_t>(K, l + 1u);
      for (auto l : gts.back().labels) K = std::max<std::size_t>(K, l + 1u);
    }
    std::vector<double> freq;
    if (args.frequencies) {
      freq = read_numbers(*args.frequencies);
      if (freq.size() < K) throw InputError("frequencies: " + std::to_string(freq.size()) + " values for " + std::to_string(K) + " classes");
    } else {
      const auto h = voxel_histogram(std::span<const VoxelLabelGrid>(gts), K);
      freq.assign(h.begin(), h.end());
      freq[0] = 0.0;
    }
    report = eval_voxel(std::span<const VoxelLabelGrid>(preds), std::span<const VoxelLabelGrid>(gts), freq);
  } else if (args.mode == "part") {
    std::vector<PartShapeResult> shapes;
    PartTable parts;
    std::size_t K = 0;
    for (std::size_t i = 0; i < args.preds.size(); ++i) {
      const auto p = load_cloud(args.preds[i]);
      const auto g = load_cloud(args.gts[i]);
      if (!p.has_labels() || !g.has_labels()) throw InputError("eval: part files must carry labels");
      PartShapeResult s{category_of(args.gts[i]), g.labels, p.labels};
      auto& ids = parts[s.category];
      for (auto l : g.labels) {
        if (std::find(ids.begin(), ids.end(), l) == ids.end()) ids.push_back(l);
        K = std::max<std::size_t>(K, static_cast<std::size_t>(l) + 1);
      }
      for (auto l : p.labels) K = std::max<std::size_t>(K, static_cast<std::size_t>(std::max(l, 0)) + 1);
      shapes.push_back(std::move(s));
    }
    for (auto& [c, ids] : parts) std::sort(ids.begin(), ids.end());
    report = eval_parts(std::span<const PartShapeResult>(shapes), parts, K);
    if (args.miou_report) {
      std::ostringstream os;
      os.precision(17);
      os << "category,shapes,miou\n";
      for (const auto& [c, m] : report.category_miou) os << c << ',' << report.category_shapes.at(c) << ',' << m << '\n';
      write_text(*args.miou_report, os.str());
    }
  } else {
    throw ConfigError("mode: expected voxel or part");
  }
  if (args.report) write_text(*args.report, report.to_csv());
  out << report.summary();
  return kExitOk;
}

std::string numbered(const std::string& stem, std::size_t i, const std::string& ext) {
  std::ostringstream os;
  os << stem << std::setw(3) << std::setfill('0') << i << ext;
  return os.str();
}

int synth_body(const SynthArgs& args, std::ostream& out, std::ostream&) {
  if (args.out_dir.empty()) throw ConfigError("out: required");
  const fs::path dir(args.out_dir);
  fs::create_directories(dir);
  SynthSceneOptions so;
  so.snap = args.snap;
  std::size_t written = 0;
  if (args.kind == "scenes") {
    const auto scenes = synth_scenes(args.seed, args.count, so);
    for (std::size_t i = 0; i < scenes.size(); ++i, ++written) {
      save_cloud((dir / numbered("scene_", i, ".xyzl")).string(), scenes[i], CloudFormat::xyzl_text);
    }
  } else if (args.kind == "parts") {
    const auto shapes = synth_part_shapes(args.seed, args.count);
    for (std::size_t i = 0; i < shapes.size(); ++i, ++written) {
      const auto name = std::to_string(*shapes[i].object_class) + "_" + numbered("shape_", i, ".xyzl");
      save_cloud((dir / name).string(), shapes[i], CloudFormat::xyzl_text);
    }
  } else if (args.kind == "captions") {
    const auto frames = synth_caption_frames(args.seed, args.count, FcpnConfig::caption_preset().caption_count, so);
    std::ostringstream list;
    list << "# file,caption ids\n";
    for (std::size_t i = 0; i < frames.size(); ++i, ++written) {
      const auto name = numbered("frame_", i, ".xyzl");
      save_cloud((dir / name).string(), frames[i].cloud, CloudFormat::xyzl_text);
      list << name;
      for (std::size_t k = 0; k < frames[i].targets.size(); ++k)
        if (frames[i].targets[k]) list << ',' << k;
      list << '\n';
    }
    write_text(dir / "captions.csv", list.str());
  } else {
    throw ConfigError("kind: expected scenes, parts or captions");
  }
  out << "wrote " << written << " files to " << dir.string() << '\n';
  return kExitOk;
}

int inspect_body(const InspectArgs& args, std::ostream& out, std::ostream&) {
  std::ifstream in(args.path, std::ios::binary);
  if (!in) throw InputError("cannot open " + args.path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 4) throw CorruptFileError(args.path + ": too short to hold a header");
  const std::string magic(bytes.begin(), bytes.begin() + 4);
  if (magic == "FCPN") {
    const auto ckpt = decode_checkpoint(bytes);
    std::size_t stored = 0;
    for (const auto& r : ckpt.records) stored += r.data.size();
    const auto cfg = config_from_json(ckpt.config_blob, "checkpoint.config");
    out << "checkpoint " << args.path << '\n';
    out << "version " << Checkpoint::kVersion << '\n';
    out << "head " << to_string(cfg.head) << '\n';
    out << "records " << ckpt.records.size() << '\n';
    out << "parameters " << stored << '\n';
    out << "config parameters " << FcpnModel<float>(cfg, 0).parameter_count() << '\n';
    for (const auto& r : ckpt.records) out << "  " << r.name << ' ' << shape_str(r.shape) << '\n';
    out << "config " << ckpt.config_blob << '\n';
  } else if (magic == "FCVX") {
    const auto grid = decode_fcvx(bytes);
    out << "fcvx " << args.path << '\n';
    out << "dims " << grid.dims[0] << ',' << grid.dims[1] << ',' << grid.dims[2] << '\n';
    out << "origin " << grid.origin[0] << ',' << grid.origin[1] << ',' << grid.origin[2] << '\n';
    out << "cell " << grid.cell_size << '\n';
    std::map<int, std::size_t> hist;
    for (auto l : grid.labels) ++hist[l];
    out << "class,voxels\n";
    for (const auto& [c, n] : hist) out << c << ',' << n << '\n';
    if (args.slices_csv) {
      std::ostringstream os;
      os << "z,y,labels\n";
      for (std::size_t z = 0; z < grid.dims[2]; ++z) {
        for (std::size_t y = 0; y < grid.dims[1]; ++y) {
          os << z << ',' << y;
          for (std::size_t x = 0; x < grid.dims[0]; ++x) os << ',' << static_cast<int>(grid.at(x, y, z));
          os << '\n';
        }
      }
      write_text(*args.slices_csv, os.str());
    }
  } else {
    throw CorruptFileError(args.path + ": unknown magic '" + magic + "'");
  }
  return kExitOk;
}

}  // namespace

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return train_body(args, out, err); });
}
int cmd_infer(const InferArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return infer_body(args, out, err); });
}
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return eval_body(args, out, err); });
}
int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return synth_body(args, out, err); });
}
int cmd_inspect(const InspectArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return inspect_body(args, out, err); });
}

}  // namespace fcpn::cli
