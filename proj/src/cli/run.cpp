#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"
#include "i2e/cli.hpp"

namespace i2e::cli {

namespace fs = std::filesystem;

namespace {

struct Source {
  std::string label;
  std::optional<std::string> text;  // nullopt: unreadable
  std::string error;
};

std::vector<Source> collect(const RunConfig& config) {
  std::vector<Source> out;
  if (config.corpus)
    for (const litmus::CorpusEntry& e : litmus::corpus_sources())
      out.push_back(Source{"corpus:" + e.file_name, std::string(e.text), ""});

  auto read_file = [&](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
      out.push_back(Source{p.string(), std::nullopt, "cannot read file"});
      return;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    out.push_back(Source{p.string(), buf.str(), ""});
  };

  for (const std::string& input : config.inputs) {
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(input, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".litmus")
          files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      if (files.empty())
        out.push_back(Source{input, std::nullopt, "no .litmus files"});
      for (const fs::path& f : files) read_file(f);
    } else if (fs::exists(input, ec)) {
      read_file(input);
    } else {
      out.push_back(Source{input, std::nullopt, "no such file"});
    }
  }
  return out;
}

std::vector<Inclusion> compare(const std::vector<explore::Verdict>& verdicts) {
  std::vector<Inclusion> out;
  for (const explore::Verdict& a : verdicts) {
    for (const explore::Verdict& b : verdicts) {
      if (a.model == b.model) continue;
      Inclusion inc;
      inc.sub = a.model;
      inc.sup = b.model;
      if (a.inconclusive() || b.inconclusive()) {
        inc.status = Inclusion::Status::Unknown;
      } else {
        inc.status = Inclusion::Status::Holds;
        for (const auto& [outcome, _] : a.result.outcomes) {
          if (b.result.outcomes.contains(outcome)) continue;
          inc.status = Inclusion::Status::Fails;
          inc.counterexample = outcome;
          break;
        }
      }
      out.push_back(std::move(inc));
    }
  }
  return out;
}

}  // namespace

std::vector<ModelKind> default_models(const litmus::LitmusTest& test) {
  std::set<ModelKind> picked;
  if (test.model_hint) picked.insert(*test.model_hint);
  for (const litmus::Check& c : test.checks)
    picked.insert(c.models.begin(), c.models.end());
  if (picked.empty()) picked.insert(kAllModels.begin(), kAllModels.end());
  return {picked.begin(), picked.end()};
}

std::string model_list_text(const std::vector<ModelKind>& models) {
  std::string out;
  for (ModelKind m : models) {
    if (!out.empty()) out += ",";
    out += model_name(m);
  }
  return out;
}

int Report::exit_code() const {
  bool failed = false;
  bool inconclusive = false;
  for (const TestReport& t : tests) {
    if (t.error) return kExitError;
    for (const explore::Verdict& v : t.verdicts) {
      if (v.inconclusive()) inconclusive = true;
      for (const explore::CheckVerdict& c : v.checks)
        if (!c.pass) failed = true;
    }
  }
  if (failed) return kExitFail;
  return inconclusive ? kExitInconclusive : kExitPass;
}

Report run(const RunConfig& config) {
  Report report;
  report.witness = config.witness;
  explore::ExploreOptions options;
  options.limits = config.limits;
  options.order = config.order;
  options.seed = config.seed;
  options.witnesses = true;

  for (Source& src : collect(config)) {
    TestReport tr;
    tr.name = src.label;
    tr.source = src.label;
    if (!src.text) {
      tr.error = src.label + ": " + src.error;
      report.tests.push_back(std::move(tr));
      continue;
    }
    try {
      auto test = std::make_shared<litmus::BoundTest>(
          litmus::bind(litmus::parse(*src.text)));
      tr.name = test->source.name;
      tr.test = test;
      auto models =
          config.models.empty() ? default_models(test->source) : config.models;
      std::sort(models.begin(), models.end());
      models.erase(std::unique(models.begin(), models.end()), models.end());
      for (ModelKind m : models)
        tr.verdicts.push_back(explore::check(*test, m, options));
      if (config.compare) tr.inclusions = compare(tr.verdicts);
    } catch (const litmus::ParseError& e) {
      tr.error = src.label + ":" + std::to_string(e.line()) + ":" +
                 std::to_string(e.column()) + ": " + e.detail();
      tr.verdicts.clear();
    } catch (const std::exception& e) {
      tr.error = src.label + ": " + e.what();
      tr.verdicts.clear();
      tr.inclusions.clear();
    }
    report.tests.push_back(std::move(tr));
  }

  std::stable_sort(report.tests.begin(), report.tests.end(),
                   [](const TestReport& a, const TestReport& b) {
                     return std::tie(a.name, a.source) <
                            std::tie(b.name, b.source);
                   });
  return report;
}

namespace {

int export_corpus(const std::string& dir, std::ostream& out,
                  std::ostream& err) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create " << dir << ": " << ec.message() << "\n";
    return kExitError;
  }
  for (const litmus::CorpusEntry& e : litmus::corpus_sources()) {
    fs::path p = fs::path(dir) / e.file_name;
    std::ofstream f(p, std::ios::binary);
    f << e.text;
    if (!f) {
      err << "error: cannot write " << p.string() << "\n";
      return kExitError;
    }
    out << p.string() << "\n";
  }
  return kExitPass;
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Explore litmus tests under I2E memory models"};
  app.require_subcommand(1);

  RunConfig config;
  std::string models_text;
  std::string format_text = "text";
  std::string order_text = "dfs";
  double timeout_secs = 60.0;
  std::size_t max_states = config.limits.max_states;

  CLI::App* run_cmd = app.add_subcommand("run", "Check litmus tests");
  run_cmd->add_option("inputs", config.inputs, "Litmus files or directories");
  run_cmd->add_flag("--corpus", config.corpus, "Include the embedded corpus");
  run_cmd->add_option("--models", models_text,
                      "Comma-separated: sc,tso,pso,wmm,wmm-d,wmm-s");
  run_cmd->add_option("--format", format_text, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  run_cmd->add_flag("--witness", config.witness,
                    "Print a witness trace per outcome and per check");
  run_cmd->add_option("--max-states", max_states,
                      "State limit per (test, model)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--timeout", timeout_secs,
                      "Time budget per (test, model), seconds")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("--compare", config.compare,
                    "Report outcome-set inclusion between the models");
  run_cmd->add_option("--order", order_text, "dfs, bfs or random")
      ->check(CLI::IsMember({"dfs", "bfs", "random"}));

  std::string export_dir;
  CLI::App* export_cmd =
      app.add_subcommand("export-corpus", "Write the embedded corpus to DIR");
  export_cmd->add_option("dir", export_dir, "Target directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; everything else is a usage error.
    int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitError;
  }

  if (export_cmd->parsed()) return export_corpus(export_dir, out, err);

  if (config.inputs.empty() && !config.corpus) {
    err << "error: no inputs (give files, directories or --corpus)\n";
    return kExitError;
  }
  if (!models_text.empty()) {
    std::stringstream ss(models_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto m = parse_model(item);
      if (!m) {
        err << "error: unknown model '" << item << "'\n";
        return kExitError;
      }
      config.models.push_back(*m);
    }
    if (config.models.empty()) {
      err << "error: --models needs at least one model\n";
      return kExitError;
    }
  }
  if (config.compare && !config.models.empty() && config.models.size() < 2) {
    err << "error: --compare needs at least two models\n";
    return kExitError;
  }
  config.format = format_text == "json" ? Format::Json : Format::Text;
  config.order = order_text == "bfs"      ? explore::SearchOrder::Bfs
                 : order_text == "random" ? explore::SearchOrder::Random
                                          : explore::SearchOrder::Dfs;
  config.limits.max_states = max_states;
  config.limits.time_budget = std::chrono::milliseconds(
      static_cast<std::int64_t>(timeout_secs * 1000.0));
  if (const char* seed = std::getenv("I2E_LITMUS_SEED")) {
    try {
      config.seed = std::stoull(seed);
    } catch (const std::exception&) {
      err << "error: I2E_LITMUS_SEED must be an unsigned integer\n";
      return kExitError;
    }
  }

  Report report = run(config);
  if (config.format == Format::Json) {
    render_json(report, out);
  } else {
    render_text(report, out);
  }
  for (const TestReport& t : report.tests)
    if (t.error) err << "error: " << *t.error << "\n";
  return report.exit_code();
}

}  // namespace i2e::cli
