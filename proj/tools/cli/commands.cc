// Copyright 2026 The MetaFidelity Authors.
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

#include "cli/commands.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/csv.h"
#include "cli/digest.h"
#include "cli/report_json.h"
#include "metafidelity/attack_quality.h"
#include "metafidelity/core_model.h"
#include "metafidelity/error.h"
#include "metafidelity/fidelity.h"
#include "metafidelity/stats.h"

namespace metafidelity::cli {
namespace {

using nlohmann::json;

struct CheckArgs {
  std::string teacher;
  std::string student;
  FidelityConfig config;
  std::vector<double> taus;
  std::vector<std::size_t> bins;
  double eca_threshold = 0.05;
  std::string eca_mode = "all-bins";
  bool lenient = false;
  std::string out;
};

struct QualityArgs {
  std::string pairs;
  std::string before;
  std::string after;
  bool no_acs = false;
  bool lenient = false;
  std::string out;
};

struct StatsArgs {
  std::string test;
  std::string csv;
};

struct PlotArgs {
  std::string kind;
  std::string report;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open \"" + path + "\"");
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void WriteOutput(const std::string& path, const std::string& text,
                 std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIo, "cannot write \"" + path + "\"");
  file << text;
  if (!file) throw Error(ErrorCode::kIo, "write to \"" + path + "\" failed");
}

// Reads a prediction dump, prefixing errors with the file name.
std::vector<PredictionRecord> LoadDump(const std::string& path,
                                       const std::string& contents,
                                       bool lenient) {
  std::istringstream in(contents);
  try {
    return ReadPredictionDump(in, lenient);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what(), e.line());
  }
}

std::string Fixed6(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  return buffer;
}

int RunCheck(const CheckArgs& args, std::ostream& out, std::ostream& err) {
  const std::string teacher_text = ReadFile(args.teacher);
  const std::string student_text = ReadFile(args.student);
  const auto teacher = LoadDump(args.teacher, teacher_text, args.lenient);
  const auto student = LoadDump(args.student, student_text, args.lenient);

  FidelityConfig config = args.config;
  config.Validate();
  EvaluationOptions options;
  if (!args.taus.empty()) options.taus = args.taus;
  if (!args.bins.empty()) options.bin_counts = args.bins;
  options.eca_threshold = args.eca_threshold;
  if (args.eca_mode == "all-bins") {
    options.eca_mode = EcaMode::kAllBins;
  } else if (args.eca_mode == "occupied-bins") {
    options.eca_mode = EcaMode::kOccupiedBins;
  } else {
    throw Error(ErrorCode::kInvalidConfig,
                "--eca-mode must be all-bins or occupied-bins");
  }
  if (!(options.eca_threshold >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "--eca-threshold must be >= 0");
  }
  options.threads = ThreadsFromEnvironment();

  const PairingResult pairing =
      PairDatasets(teacher, student, config.temperature);
  const FidelityReport report = EvaluateAll(pairing.dataset, config, options);
  const json doc = FidelityReportToJson(
      report,
      {{"teacher", Sha256Hex(teacher_text)}, {"student", Sha256Hex(student_text)}},
      pairing, args.lenient);
  for (const auto& w : doc["warnings"]) {
    err << "warning: " << w.get<std::string>() << "\n";
  }
  WriteOutput(args.out, Serialize(doc), out);
  return report.behavior_preserving ? kExitOk : kExitViolated;
}

int RunAttackQuality(const QualityArgs& args, std::ostream& out,
                     std::ostream& err) {
  if (args.before.empty() != args.after.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                "--before and --after must be given together");
  }
  const std::string pairs_text = ReadFile(args.pairs);
  std::vector<CodePair> pairs;
  {
    std::istringstream in(pairs_text);
    try {
      pairs = ReadCodePairs(in, args.lenient);
    } catch (const Error& e) {
      throw Error(e.code(), args.pairs + ": " + e.what(), e.line());
    }
  }
  std::vector<InputDigest> digests = {{"pairs", Sha256Hex(pairs_text)}};
  QualityReport report = EvaluateQuality(pairs, !args.no_acs);
  if (!args.before.empty()) {
    const std::string before_text = ReadFile(args.before);
    const std::string after_text = ReadFile(args.after);
    const auto before = LoadDump(args.before, before_text, args.lenient);
    const auto after = LoadDump(args.after, after_text, args.lenient);
    report.asr = Asr(before, after);
    digests.push_back({"before", Sha256Hex(before_text)});
    digests.push_back({"after", Sha256Hex(after_text)});
  }
  for (const std::string& w : report.warnings) err << "warning: " << w << "\n";
  WriteOutput(args.out, Serialize(QualityReportToJson(report, digests)), out);
  return kExitOk;
}

int RunStats(const StatsArgs& args, std::ostream& out) {
  std::istringstream in(ReadFile(args.csv));
  const ObservationMatrix matrix = ReadObservationCsv(in);
  double statistic = 0.0;
  double p_value = 1.0;
  if (args.test == "friedman") {
    const FriedmanResult r = FriedmanTest(matrix);
    statistic = r.statistic;
    p_value = r.p_value;
  } else {
    if (matrix.columns() != 2) {
      throw Error(ErrorCode::kParse,
                  "wilcoxon expects exactly two columns, found " +
                      std::to_string(matrix.columns()));
    }
    const WilcoxonResult r = WilcoxonSignedRank(matrix.column(0), matrix.column(1));
    statistic = r.statistic;
    p_value = r.p_value;
  }
  out << "statistic=" << Fixed6(statistic) << " p=" << Fixed6(p_value) << "\n";
  return kExitOk;
}

// Linear interpolation between closest ranks (the common "type 7" rule).
double Quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string NumberCell(const json& value) {
  if (value.is_null()) return "";
  if (value.is_number_integer()) return value.dump();
  return FormatShortest(value.get<double>());
}

int RunPlotData(const PlotArgs& args, std::ostream& out) {
  const std::string text = ReadFile(args.report);
  const json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kParse, args.report + ": not a JSON report");
  }
  try {
    if (args.kind == "violations") {
      out << "mr_id,parameter,violation_rate\n";
      out << "MR1,," << NumberCell(doc.at("mr1").at("violation_rate")) << "\n";
      const json& mr2 = doc.at("mr2");
      out << "MR2," << NumberCell(mr2.at("delta")) << ","
          << NumberCell(mr2.at("violation_rate")) << "\n";
      for (const json& e : doc.at("mr3")) {
        out << "MR3," << NumberCell(e.at("tau")) << ","
            << (e.contains("violation_rate") ? NumberCell(e["violation_rate"]) : "")
            << "\n";
      }
      for (const json& e : doc.at("mr4")) {
        out << "MR4," << NumberCell(e.at("bins")) << "," << NumberCell(e.at("eca"))
            << "\n";
      }
      return kExitOk;
    }

    const json& kl = doc.at("per_sample_kl");
    const auto ids = kl.at("id").get<std::vector<std::string>>();
    const auto pq = kl.at("kl_pq").get<std::vector<double>>();
    const auto qp = kl.at("kl_qp").get<std::vector<double>>();
    if (pq.size() != ids.size() || qp.size() != ids.size()) {
      throw Error(ErrorCode::kParse, "per_sample_kl arrays differ in length");
    }
    out << "id,kl_pq,kl_qp\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
      out << CsvField(ids[i]) << "," << FormatShortest(pq[i]) << ","
          << FormatShortest(qp[i]) << "\n";
    }
    if (ids.empty()) return kExitOk;
    std::vector<double> sorted_pq = pq;
    std::vector<double> sorted_qp = qp;
    std::sort(sorted_pq.begin(), sorted_pq.end());
    std::sort(sorted_qp.begin(), sorted_qp.end());
    static constexpr std::pair<const char*, double> kSummary[] = {
        {"summary:min", 0.0}, {"summary:q1", 0.25}, {"summary:median", 0.5},
        {"summary:q3", 0.75}, {"summary:max", 1.0}};
    for (const auto& [label, q] : kSummary) {
      out << label << "," << FormatShortest(Quantile(sorted_pq, q)) << ","
          << FormatShortest(Quantile(sorted_qp, q)) << "\n";
    }
    return kExitOk;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse,
                args.report + ": malformed report (" + e.what() + ")");
  }
}

}  // namespace

std::size_t ThreadsFromEnvironment() {
  const char* value = std::getenv(kThreadsEnv);
  if (value == nullptr || *value == '\0') return 0;
  std::size_t threads = 0;
  const std::string_view text(value);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), threads);
  if (ec != std::errc() || ptr != text.data() + text.size() || threads == 0) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string(kThreadsEnv) + " must be a positive integer");
  }
  return threads;
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Behavioral-fidelity checks between a teacher classifier and "
               "its distilled student.",
               "metafidelity"};
  app.require_subcommand(1);

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand(
      "check", "Evaluate MR1-MR4 over a teacher and a student dump");
  check->add_option("teacher", check_args.teacher, "Teacher NDJSON dump")->required();
  check->add_option("student", check_args.student, "Student NDJSON dump")->required();
  check->add_option("--delta", check_args.config.delta, "KL tolerance for MR2")
      ->capture_default_str();
  check->add_option("--tau", check_args.taus,
                    "Confidence threshold for MR3 (repeatable; default 0.8 0.85 0.9)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  check->add_option("--bins", check_args.bins,
                    "Calibration bins for MR4 (repeatable; default 10 15 20)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  check->add_option("--temperature", check_args.config.temperature,
                    "Softmax temperature applied to logits")
      ->capture_default_str();
  check->add_option("--prob-floor", check_args.config.prob_floor,
                    "Floor applied to the KL denominator")
      ->capture_default_str();
  check->add_option("--eca-threshold", check_args.eca_threshold,
                    "Largest ECA still counted as behavior-preserving")
      ->capture_default_str();
  check->add_option("--eca-mode", check_args.eca_mode,
                    "all-bins (divide by B) or occupied-bins")
      ->capture_default_str();
  check->add_flag("--lenient", check_args.lenient, "Accept unknown dump fields");
  check->add_option("--out", check_args.out, "Report path (default: stdout)");

  QualityArgs quality_args;
  CLI::App* quality = app.add_subcommand(
      "attack-quality", "ICR, TCR, AED, ACS (and ASR) over adversarial code pairs");
  quality->add_option("pairs", quality_args.pairs, "Code-pair NDJSON")->required();
  quality->add_option("--before", quality_args.before, "Pre-attack prediction dump");
  quality->add_option("--after", quality_args.after, "Post-attack prediction dump");
  quality->add_flag("--no-acs", quality_args.no_acs, "Skip the embedding similarity");
  quality->add_flag("--lenient", quality_args.lenient, "Accept unknown fields");
  quality->add_option("--out", quality_args.out, "Report path (default: stdout)");

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "Friedman or Wilcoxon test over a CSV");
  stats->add_option("test", stats_args.test, "friedman or wilcoxon")
      ->required()
      ->check(CLI::IsMember({"friedman", "wilcoxon"}));
  stats->add_option("csv", stats_args.csv, "Header row, then one row per subject")
      ->required();

  PlotArgs plot_args;
  CLI::App* plot = app.add_subcommand("plotdata", "CSV plot data from a check report");
  plot->add_option("kind", plot_args.kind, "violations or kl-box")->required();
  plot->add_option("report", plot_args.report, "Report written by check")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (check->parsed()) return RunCheck(check_args, out, err);
    if (quality->parsed()) return RunAttackQuality(quality_args, out, err);
    if (stats->parsed()) return RunStats(stats_args, out);
    if (plot_args.kind != "violations" && plot_args.kind != "kl-box") {
      throw Error(ErrorCode::kUnknownKind,
                  "unknown plot kind \"" + plot_args.kind +
                      "\" (expected violations or kl-box)");
    }
    return RunPlotData(plot_args, out);
  } catch (const Error& e) {
    err << "error: " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInputError;
}

}  // namespace metafidelity::cli
