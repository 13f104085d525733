#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "i2e/explorer.hpp"
#include "i2e/litmus.hpp"

namespace i2e::cli {

enum class Format : std::uint8_t { Text, Json };

enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitInconclusive = 2,
  kExitError = 3,
};

struct RunConfig {
  std::vector<std::string> inputs;  // files or directories of *.litmus
  bool corpus = false;
  // Empty: per test, the model hint plus every model named by a check, or
  // all six when the test names none.
  std::vector<ModelKind> models;
  Format format = Format::Text;
  bool witness = false;
  bool compare = false;
  explore::ExploreLimits limits;
  explore::SearchOrder order = explore::SearchOrder::Dfs;
  std::uint64_t seed = 0;
};

struct Inclusion {
  ModelKind sub = ModelKind::Sc;
  ModelKind sup = ModelKind::Sc;
  enum class Status : std::uint8_t { Holds, Fails, Unknown } status =
      Status::Unknown;
  std::optional<litmus::Outcome> counterexample;
};

struct TestReport {
  std::string name;    // test name, or the source when parsing failed
  std::string source;  // file path or "corpus:<file>"
  std::optional<std::string> error;
  // Heap-allocated so models keep a stable reference to the program.
  std::shared_ptr<litmus::BoundTest> test;
  std::vector<explore::Verdict> verdicts;
  std::vector<Inclusion> inclusions;
};

struct Report {
  std::vector<TestReport> tests;
  bool witness = false;

  int exit_code() const;
};

// Loads every input (reporting unreadable or malformed ones in place) and
// checks each test under the selected models. Sorted by test name, then
// source, then model.
Report run(const RunConfig& config);

std::string model_list_text(const std::vector<ModelKind>& models);
std::vector<ModelKind> default_models(const litmus::LitmusTest& test);

void render_text(const Report& report, std::ostream& out);
void render_json(const Report& report, std::ostream& out);

// Whole command line, including argv[0]. Returns the process exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err);

}  // namespace i2e::cli
