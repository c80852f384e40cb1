// evidfuse: fuse mass functions, run a type tracker over a declaration file, or
// run the Monte-Carlo comparison of fusion rules.
//
// Exit codes: 0 success, 2 input/validation error, 3 degenerate fusion (total
// conflict, vanishing consensus).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evidfuse/evidfuse.hpp"
#include "evidfuse/io.hpp"

namespace {

using namespace evidfuse;
namespace fs = std::filesystem;

constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

struct RuleFlags {
  std::string rule;
  std::string tnorm;
  std::string tconorm;

  RuleConfig resolve() const {
    auto opt = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<std::string>(s); };
    return parse_rule(rule, opt(tnorm), opt(tconorm));
  }
};

void add_rule_flags(CLI::App& cmd, RuleFlags& flags) {
  cmd.add_option("--rule", flags.rule, "Fusion rule: dempster|pcr5|tcn")->required();
  cmd.add_option("--tnorm", flags.tnorm, "TCN t-norm: min|product|bounded");
  cmd.add_option("--tconorm", flags.tconorm, "TCN t-conorm: max|sum");
}

io::Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
  return io::parse_json(in, path);
}

/// Writes to `path`, or to stdout when empty.
template <typename F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Parse, "cannot write '" + path + "'");
  write(out);
  if (!out) throw Error(ErrorKind::Parse, "write failed for '" + path + "'");
}

std::vector<std::size_t> read_declarations(const std::string& path, const Frame& frame) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
  std::vector<std::size_t> out;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string label = line.substr(first, last - first + 1);
    const auto index = frame.find(label);
    if (!index) throw Error(ErrorKind::UnknownLabel, path + ":" + std::to_string(line_no) + ": '" + label + "'");
    out.push_back(*index);
  }
  if (out.empty()) throw Error(ErrorKind::InvalidConfig, path + ": no declarations");
  return out;
}

struct FuseArgs {
  std::string a, b;
  RuleFlags rule;
  bool report = false;
  std::string format = "csv";
  std::string output;
};

void run_fuse(const FuseArgs& args) {
  const RuleConfig cfg = args.rule.resolve();
  const auto m1 = io::parse_mass_function(read_json(args.a));
  const auto m2 = io::parse_mass_function(read_json(args.b));
  const FusionOutcome out = fuse(cfg, m1, m2);
  const Frame& frame = out.result.frame();

  emit(args.output, [&](std::ostream& os) {
    if (args.format == "json") {
      auto doc = io::to_json(out.result);
      doc["rule"] = io::to_json(cfg);
      if (args.report) {
        doc["conflict"] = out.conflict;
        io::OrderedJson moved = io::OrderedJson::object();
        for (std::size_t x = 1; x < out.redistributed.size(); ++x)
          if (out.redistributed[x] != 0.0)
            moved[frame.subset_name(FocalSet(static_cast<FocalSet::Bits>(x)))] = out.redistributed[x];
        doc["redistributed"] = moved;
      }
      os << doc.dump(2) << '\n';
      return;
    }
    if (args.report) os << "# conflict=" << io::format_number(out.conflict) << '\n';
    os << (args.report ? "subset,mass,redistributed\n" : "subset,mass\n");
    const auto dense = out.result.dense();
    for (std::size_t x = 1; x < dense.size(); ++x) {
      const bool shown = dense[x] != 0.0 || (args.report && out.redistributed[x] != 0.0);
      if (!shown) continue;
      os << frame.subset_name(FocalSet(static_cast<FocalSet::Bits>(x))) << ',' << io::format_number(dense[x]);
      if (args.report) os << ',' << io::format_number(out.redistributed[x]);
      os << '\n';
    }
  });
}

struct TrackArgs {
  std::string declarations;
  std::string confusion;
  RuleFlags rule;
  std::string criterion = "belief";
  std::string output;
};

void run_track_cmd(const TrackArgs& args) {
  const RuleConfig cfg = args.rule.resolve();
  const DecisionCriterion criterion = io::parse_criterion(args.criterion);
  const ConfusionMatrix confusion = io::parse_confusion(read_json(args.confusion));
  const auto decl = read_declarations(args.declarations, confusion.frame());
  const auto records = run_track(decl, confusion, cfg, criterion);
  emit(args.output, [&](std::ostream& os) { io::write_track_csv(os, confusion.frame(), records); });
}

struct SimulateArgs {
  std::string config;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string plot_dir;
  std::string output;
};

void run_simulate(const SimulateArgs& args) {
  MonteCarloConfig cfg = io::parse_monte_carlo_config(read_json(args.config));
  if (args.runs) {
    if (*args.runs == 0) throw Error(ErrorKind::InvalidConfig, "--runs must be >= 1");
    cfg.runs = *args.runs;
  }
  if (args.seed) cfg.master_seed = *args.seed;
  const auto traces = run_monte_carlo(cfg, args.threads);
  emit(args.output, [&](std::ostream& os) { io::write_simulation_csv(os, cfg.scenario, traces); });
  if (!args.plot_dir.empty()) {
    std::error_code ec;
    fs::create_directories(args.plot_dir, ec);
    if (ec) throw Error(ErrorKind::Parse, "cannot create '" + args.plot_dir + "': " + ec.message());
    for (std::size_t r = 0; r < traces.size(); ++r) {
      const auto path = (fs::path(args.plot_dir) / io::plot_data_filename(r, traces[r].rule)).string();
      emit(path, [&](std::ostream& os) { io::write_plot_data(os, cfg.scenario.frame(), traces[r]); });
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evidential fusion of target-type declarations: Dempster, PCR5 and TCN rules"};
  app.require_subcommand(1);

  FuseArgs fuse_args;
  auto* fuse_cmd = app.add_subcommand("fuse", "Combine two mass-function JSON files");
  fuse_cmd->add_option("A", fuse_args.a, "First mass-function file")->required();
  fuse_cmd->add_option("B", fuse_args.b, "Second mass-function file")->required();
  add_rule_flags(*fuse_cmd, fuse_args.rule);
  fuse_cmd->add_flag("--report", fuse_args.report, "Also print total conflict and mass redistributed per subset");
  fuse_cmd->add_option("--format", fuse_args.format, "Output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}, CLI::ignore_case));
  fuse_cmd->add_option("-o,--output", fuse_args.output, "Output file (default: stdout)");

  TrackArgs track_args;
  auto* track_cmd = app.add_subcommand("track", "Run the sequential type tracker over a declaration file");
  track_cmd->add_option("decls", track_args.declarations, "File with one declared type label per line")->required();
  track_cmd->add_option("--confusion", track_args.confusion, "JSON file with \"frame\" and \"confusion\"")->required();
  add_rule_flags(*track_cmd, track_args.rule);
  track_cmd->add_option("--criterion", track_args.criterion, "Decision criterion: belief|pignistic")
      ->check(CLI::IsMember({"belief", "pignistic"}, CLI::ignore_case));
  track_cmd->add_option("-o,--output", track_args.output, "Trace CSV (default: stdout)");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the Monte-Carlo comparison described by a config file");
  sim_cmd->add_option("config", sim_args.config, "Simulation config JSON")->required();
  sim_cmd->add_option("--runs", sim_args.runs, "Override the number of runs");
  sim_cmd->add_option("--seed", sim_args.seed, "Override the master seed");
  sim_cmd->add_option("--threads", sim_args.threads, "Worker threads (default: available parallelism)");
  sim_cmd->add_option("--plot-data", sim_args.plot_dir, "Directory for per-rule gnuplot data files");
  sim_cmd->add_option("-o,--output", sim_args.output, "Averaged-trace CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*fuse_cmd) {
      fuse_args.format = detail::lower(fuse_args.format);
      run_fuse(fuse_args);
    } else if (*track_cmd) {
      run_track_cmd(track_args);
    } else {
      run_simulate(sim_args);
    }
  } catch (const Error& e) {
    std::cerr << "evidfuse: " << e.what() << '\n';
    return is_degenerate(e.kind()) ? kExitDegenerate : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "evidfuse: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
