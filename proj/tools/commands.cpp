#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "csv.hpp"
#include "mnkurt/activity.hpp"
#include "mnkurt/distortion.hpp"
#include "mnkurt/error.hpp"
#include "mnkurt/eval.hpp"
#include "mnkurt/measure.hpp"
#include "mnkurt/synth.hpp"

namespace mnkurt::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct CommonFlags {
  std::size_t window = 1024;
  std::string bands;
  std::string bands_file;
  std::size_t jobs = 1;
};

struct MeasureFlags {
  std::string ref;
  std::string proc;
  std::string measures = "all";
  std::string channel = "worst";
  std::string activity;
  std::string target;
  std::string output = "-";
  bool trace = false;
};

struct DistortFlags {
  std::string input;
  std::string output;
  double percent = 0.0;
  std::uint64_t seed = 0;
  std::string scope = "global";
  std::string format = "f32";
};

struct RespondFlags {
  std::string item_dir;
  std::size_t synthetic = 0;
  double seconds = 10.0;
  std::string levels = "0,10,25,50,75,90,99.8";
  std::string measures = "all";
  std::uint64_t seed = 0;
  std::string scope = "global";
  std::string channel = "worst";
  std::string csv;
  std::string report = "-";
};

struct CorrelateFlags {
  std::string scores;
  std::string measures;
  std::string measure;
  std::string score_column = "score";
  std::string value_column = "value";
  bool keep_references = false;
  std::string output = "-";
};

/// Usage problems detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw UsageError("not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_number(item));
  return out;
}

std::vector<MeasureId> parse_measures(const std::string& s) {
  if (s == "all") return {kAllMeasures.begin(), kAllMeasures.end()};
  std::vector<MeasureId> out;
  for (const auto& name : split(s, ',')) {
    auto id = parse_measure_id(name);
    if (!id) throw UsageError("unknown measure '" + name + "'");
    if (std::find(out.begin(), out.end(), *id) == out.end()) out.push_back(*id);
  }
  if (out.empty()) throw UsageError("no measure selected");
  return out;
}

SubBandLayout parse_bands(const CommonFlags& f) {
  if (!f.bands.empty() && !f.bands_file.empty()) {
    throw UsageError("--bands and --bands-file are mutually exclusive");
  }
  if (!f.bands.empty()) {
    const auto edges = parse_numbers(f.bands);
    if (edges.size() < 2) throw UsageError("--bands needs at least two edges");
    return SubBandLayout::from_edges(edges);
  }
  if (!f.bands_file.empty()) {
    std::ifstream in(f.bands_file);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + f.bands_file);
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::CorruptFile, f.bands_file + ": " + e.what());
    }
    if (doc.is_object() && doc.contains("bands")) doc = doc["bands"];
    if (!doc.is_array() || doc.empty()) {
      throw Error(ErrorCode::CorruptFile, f.bands_file + ": expected an array of edges or pairs");
    }
    try {
      if (doc.front().is_array()) {
        SubBandLayout layout;
        for (const auto& pair : doc) {
          layout.bands.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
        }
        layout.validate();
        return layout;
      }
      return SubBandLayout::from_edges(doc.get<std::vector<double>>());
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::CorruptFile, f.bands_file + ": " + e.what());
    }
  }
  return SubBandLayout::standard();
}

StftConfig stft_config(const CommonFlags& f) {
  auto cfg = StftConfig::with_window(f.window);
  cfg.validate();
  return cfg;
}

std::size_t effective_jobs(std::size_t requested) {
  std::size_t jobs = std::max<std::size_t>(requested, 1);
  if (const char* cap = std::getenv(kJobsEnv)) {
    try {
      const long v = std::stol(cap);
      if (v >= 1) jobs = std::min(jobs, static_cast<std::size_t>(v));
    } catch (const std::exception&) {
    }
  }
  return jobs;
}

MaskScope parse_scope(const std::string& s) {
  if (s == "global") return MaskScope::Global;
  if (s == "per-frame") return MaskScope::PerFrame;
  throw UsageError("unknown scope '" + s + "' (global | per-frame)");
}

void apply_channel_policy(const std::string& s, ChannelPolicy& policy, std::size_t& index) {
  if (s == "worst") {
    policy = ChannelPolicy::WorstChannel;
  } else if (s == "mix") {
    policy = ChannelPolicy::MonoMix;
  } else {
    policy = ChannelPolicy::Index;
    const double v = parse_number(s);
    if (v < 0 || v != std::floor(v)) throw UsageError("bad channel '" + s + "'");
    index = static_cast<std::size_t>(v);
  }
}

SampleFormat parse_format(const std::string& s) {
  if (s == "f32") return SampleFormat::Float32;
  if (s == "f64") return SampleFormat::Float64;
  if (s == "pcm16") return SampleFormat::Pcm16;
  if (s == "pcm24") return SampleFormat::Pcm24;
  if (s == "pcm32") return SampleFormat::Pcm32;
  throw UsageError("unknown sample format '" + s + "'");
}

/// Writes through `write` to stdout for "-" or to the named file.
void emit(const std::string& path, std::ostream& out,
          const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(out);
    out.flush();
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + path);
  write(file);
  if (!file) throw Error(ErrorCode::IoError, "write failed for " + path);
}

Json result_json(const MeasureOutcome& o, bool trace) {
  Json j;
  if (!o.ok()) {
    j["raw"] = nullptr;
    j["scaled"] = nullptr;
    j["band"] = nullptr;
    j["n_frames"] = 0;
    j["error"] = std::string(to_string(*o.error));
    j["reason"] = o.reason;
    return j;
  }
  const auto& r = *o.result;
  j["raw"] = r.raw;
  j["scaled"] = r.scaled;
  // Bands are numbered from 1 in reports.
  j["band"] = r.selected_band ? Json(*r.selected_band + 1) : Json(nullptr);
  j["n_frames"] = r.n_frames;
  if (trace) {
    Json values = Json::array();
    for (double v : r.frame_trace) values.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
    j["trace"] = std::move(values);
  }
  return j;
}

int cmd_measure(const MeasureFlags& f, const CommonFlags& common, std::ostream& out,
                std::ostream& err) {
  MeasureOptions opt;
  opt.stft = stft_config(common);
  opt.bands = parse_bands(common);
  apply_channel_policy(f.channel, opt.channels, opt.channel_index);
  const auto ids = parse_measures(f.measures);
  if (!f.activity.empty() && !f.target.empty()) {
    throw UsageError("--activity and --target are mutually exclusive");
  }

  const AudioBuffer ref = load_wav(f.ref);
  const AudioBuffer proc = load_wav(f.proc);
  if (!f.activity.empty()) {
    opt.activity = load_activity_mask(f.activity);
  } else if (!f.target.empty()) {
    AudioBuffer target = to_analysis_rate(load_wav(f.target), opt.stft.sample_rate);
    const std::size_t common_len =
        std::min(to_analysis_rate(ref, opt.stft.sample_rate).num_frames(),
                 to_analysis_rate(proc, opt.stft.sample_rate).num_frames());
    if (target.num_frames() < common_len) {
      throw Error(ErrorCode::InvalidArgument, "target signal is shorter than the inputs");
    }
    for (auto& ch : target.channels) ch.resize(common_len);
    opt.activity = activity_from_target(target, opt.stft);
  }

  const auto outcomes = measure_audio(ids, ref, proc, opt);
  Json doc;
  doc["schema"] = kMeasureSchema;
  bool any_ok = false;
  for (const auto& o : outcomes) {
    doc[std::string(to_string(o.id))] = result_json(o, f.trace);
    if (o.ok()) {
      any_ok = true;
    } else {
      err << "mnkurt: " << to_string(o.id) << ": " << o.reason << '\n';
    }
  }
  emit(f.output, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  return any_ok ? kExitOk : kExitNotComputable;
}

int cmd_distort(const DistortFlags& f, const CommonFlags& common, std::ostream&,
                std::ostream&) {
  const DistortionSpec spec{f.percent, f.seed, parse_scope(f.scope)};
  spec.validate();
  const auto cfg = stft_config(common);
  const auto format = parse_format(f.format);
  const AudioBuffer in = to_analysis_rate(load_wav(f.input), cfg.sample_rate);
  save_wav(f.output, distort_audio(in, spec, cfg), format);
  return kExitOk;
}

std::vector<NamedAudio> load_items(const std::string& dir, std::ostream& err) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, "not a directory: " + dir);
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (entry.is_regular_file() && ext == ".wav") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<NamedAudio> items;
  for (const auto& p : paths) {
    try {
      items.push_back({p.stem().string(), load_wav(p)});
    } catch (const Error& e) {
      err << "mnkurt: skipping " << p.string() << ": " << e.what() << '\n';
    }
  }
  return items;
}

int cmd_respond(const RespondFlags& f, const CommonFlags& common, std::ostream& out,
                std::ostream& err) {
  if (f.item_dir.empty() == (f.synthetic == 0)) {
    throw UsageError("give either an item directory or --synthetic N");
  }
  const bool csv_to_stdout = f.csv == "-";
  const bool report_to_stdout = f.report.empty() || f.report == "-";
  if (csv_to_stdout && report_to_stdout) {
    throw UsageError("--csv - needs --report FILE; stdout can carry only one of them");
  }

  ExperimentOptions opt;
  opt.stft = stft_config(common);
  opt.bands = parse_bands(common);
  opt.seed = f.seed;
  opt.scope = parse_scope(f.scope);
  opt.jobs = effective_jobs(common.jobs);
  std::size_t unused_index = 0;
  apply_channel_policy(f.channel, opt.channels, unused_index);
  if (opt.channels == ChannelPolicy::Index) throw UsageError("respond supports worst or mix");
  opt.warn = [&err](const std::string& msg) { err << "mnkurt: " << msg << '\n'; };

  auto levels = parse_numbers(f.levels);
  if (levels.empty()) throw UsageError("no levels given");
  for (std::size_t j = 1; j < levels.size(); ++j) {
    if (!(levels[j] > levels[j - 1])) throw UsageError("levels must be strictly ascending");
  }
  const auto ids = parse_measures(f.measures);

  const auto items = f.synthetic > 0
                         ? synth::test_set(f.synthetic, f.seconds, opt.stft.sample_rate)
                         : load_items(f.item_dir, err);
  if (items.empty()) throw Error(ErrorCode::IoError, "no readable WAV items in " + f.item_dir);

  const auto curves = run_response_experiment(items, levels, ids, opt);

  if (!f.csv.empty()) {
    emit(f.csv, out, [&](std::ostream& os) {
      os << "schema,item,level,measure,value\n";
      for (MeasureId id : ids) {
        const auto& c = curves.at(id);
        for (std::size_t i = 0; i < c.items.size(); ++i) {
          for (std::size_t j = 0; j < c.control.size(); ++j) {
            os << kResponseMatrixSchema << ',' << csv_field(c.items[i]) << ',' << c.control[j]
               << ',' << to_string(id) << ',' << c.per_item[i][j] << '\n';
          }
        }
      }
    });
  }

  Json doc;
  doc["schema"] = kResponseSchema;
  doc["seed"] = f.seed;
  doc["levels"] = levels;
  doc["items"] = curves.at(ids.front()).items;
  Json per_measure = Json::object();
  for (MeasureId id : ids) {
    const auto& c = curves.at(id);
    Json m;
    try {
      m["rho"] = response_score(c);
    } catch (const Error& e) {
      m["rho"] = nullptr;
      m["reason"] = e.what();
    }
    m["mean"] = c.mean;
    m["std"] = c.std;
    per_measure[std::string(to_string(id))] = std::move(m);
  }
  doc["measures"] = std::move(per_measure);
  emit(f.report, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  return curves.at(ids.front()).items.empty() ? kExitNotComputable : kExitOk;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_csv(in);
}

bool truthy(std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  return v == "1" || v == "true" || v == "yes" || v == "y";
}

std::size_t require_column(const CsvTable& t, const std::string& name, const std::string& file) {
  auto c = t.column(name);
  if (!c) throw Error(ErrorCode::CorruptFile, file + ": missing column '" + name + "'");
  return *c;
}

int cmd_correlate(const CorrelateFlags& f, std::ostream& out, std::ostream& err) {
  const auto scores = read_csv_file(f.scores);
  const auto measures = read_csv_file(f.measures);
  const std::size_t s_item = require_column(scores, "item", f.scores);
  const std::size_t s_score = require_column(scores, f.score_column, f.scores);
  const auto s_ref = scores.column("reference");
  const std::size_t m_item = require_column(measures, "item", f.measures);
  const std::size_t m_value = require_column(measures, f.value_column, f.measures);
  const auto m_measure = measures.column("measure");

  std::map<std::string, std::pair<double, bool>> score_of;
  for (const auto& row : scores.rows) {
    const bool ref = s_ref && truthy(row[*s_ref]);
    if (!score_of.emplace(row[s_item], std::pair{parse_number(row[s_score]), ref}).second) {
      throw Error(ErrorCode::CorruptFile, f.scores + ": duplicate item '" + row[s_item] + "'");
    }
  }

  // measure name -> items in file order
  std::map<std::string, std::vector<ScoredItem>> groups;
  std::vector<std::string> order;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t unmatched = 0;
  for (const auto& row : measures.rows) {
    const std::string name = m_measure ? row[*m_measure] : f.value_column;
    if (!f.measure.empty() && name != f.measure) continue;
    if (!seen.emplace(name, row[m_item]).second) {
      throw Error(ErrorCode::CorruptFile, f.measures + ": duplicate entry for item '" +
                                              row[m_item] + "' and measure '" + name + "'");
    }
    auto it = score_of.find(row[m_item]);
    if (it == score_of.end()) {
      ++unmatched;
      continue;
    }
    if (!groups.count(name)) order.push_back(name);
    groups[name].push_back({row[m_item], it->second.first, parse_number(row[m_value]),
                            it->second.second && !f.keep_references});
  }
  if (unmatched > 0) err << "mnkurt: " << unmatched << " measure rows have no perceptual score\n";
  if (groups.empty()) throw UsageError("no item appears in both files");

  Json doc;
  doc["schema"] = kCorrelationSchema;
  Json reports = Json::object();
  for (const auto& name : order) {
    const auto report = correlate(groups[name]);
    Json r;
    r["pearson_r"] = report.pearson_r;
    r["kendall_t"] = report.kendall_t;
    r["n"] = report.n;
    r["excluded"] = report.excluded;
    reports[name] = std::move(r);
  }
  doc["reports"] = std::move(reports);
  emit(f.output, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonFlags& common, bool with_bands = true) {
  cmd->add_option("--window", common.window, "Analysis window length (power of two)")
      ->capture_default_str();
  if (with_bands) {
    cmd->add_option("--bands", common.bands, "Sub-band edges in Hz, e.g. 50,750,6000,16000");
    cmd->add_option("--bands-file", common.bands_file, "JSON file with band edges or pairs");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kurtosis-based objective measures of musical noise", "mnkurt"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand help for all subcommands");

  CommonFlags common;
  MeasureFlags mf;
  DistortFlags df;
  RespondFlags rf;
  CorrelateFlags cf;

  auto* measure = app.add_subcommand("measure", "Measure musical noise of PROC against REF");
  measure->add_option("ref", mf.ref, "Unprocessed WAV")->required();
  measure->add_option("proc", mf.proc, "Processed WAV")->required();
  measure->add_option("--measures", mf.measures, "Comma list of measures or 'all'")
      ->capture_default_str();
  measure->add_option("--channel", mf.channel, "worst | mix | channel index")
      ->capture_default_str();
  measure->add_option("--activity", mf.activity, "Target activity mask (0/1 per frame)");
  measure->add_option("--target", mf.target, "Target-source WAV; active frames are excluded");
  measure->add_flag("--trace", mf.trace, "Include per-frame values");
  measure->add_option("-o,--output", mf.output, "JSON output file ('-' for stdout)");
  add_common(measure, common);

  auto* distort = app.add_subcommand("distort", "Zero a random share of STFT bins");
  distort->add_option("input", df.input, "Input WAV")->required();
  distort->add_option("output", df.output, "Output WAV")->required();
  distort->add_option("--percent", df.percent, "Share of bins set to zero, 0..99.8")->required();
  distort->add_option("--seed", df.seed, "Mask seed")->capture_default_str();
  distort->add_option("--scope", df.scope, "global | per-frame")->capture_default_str();
  distort->add_option("--format", df.format, "f32 | f64 | pcm16 | pcm24 | pcm32")
      ->capture_default_str();
  add_common(distort, common, false);

  auto* respond = app.add_subcommand("respond", "Response curves to controlled bin zeroing");
  respond->add_option("item-dir", rf.item_dir, "Directory of WAV items");
  respond->add_option("--synthetic", rf.synthetic, "Use N built-in synthetic items instead");
  respond->add_option("--seconds", rf.seconds, "Length of synthetic items")->capture_default_str();
  respond->add_option("--levels", rf.levels, "Ascending zeroing percentages")
      ->capture_default_str();
  respond->add_option("--measures", rf.measures, "Comma list of measures or 'all'")
      ->capture_default_str();
  respond->add_option("--seed", rf.seed, "Mask seed")->capture_default_str();
  respond->add_option("--scope", rf.scope, "global | per-frame")->capture_default_str();
  respond->add_option("--channel", rf.channel, "worst | mix")->capture_default_str();
  respond->add_option("--csv", rf.csv, "Write the item x level matrix as CSV ('-' for stdout)");
  respond->add_option("--report", rf.report, "JSON report file ('-' for stdout)");
  respond->add_option("--jobs", common.jobs, "Worker threads (capped by MNKURT_JOBS)");
  add_common(respond, common);

  auto* corr = app.add_subcommand("correlate", "Correlate measure values with perceptual scores");
  corr->add_option("scores", cf.scores, "CSV with item,score[,reference]")->required();
  corr->add_option("measures", cf.measures, "CSV with item,value[,measure]")->required();
  corr->add_option("--measure", cf.measure, "Only this measure");
  corr->add_option("--score-column", cf.score_column)->capture_default_str();
  corr->add_option("--value-column", cf.value_column)->capture_default_str();
  corr->add_flag("--keep-references", cf.keep_references,
                 "Include rows flagged as references");
  corr->add_option("-o,--output", cf.output, "JSON output file ('-' for stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "mnkurt: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (measure->parsed()) return cmd_measure(mf, common, out, err);
    if (distort->parsed()) return cmd_distort(df, common, out, err);
    if (respond->parsed()) return cmd_respond(rf, common, out, err);
    if (corr->parsed()) return cmd_correlate(cf, out, err);
  } catch (const UsageError& e) {
    err << "mnkurt: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "mnkurt: " << e.what() << '\n';
    const bool computation = e.code() == ErrorCode::NotComputable ||
                             e.code() == ErrorCode::EmptyAfterPreprocessing ||
                             e.code() == ErrorCode::TargetAlwaysActive;
    return computation ? kExitNotComputable : kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mnkurt::cli
