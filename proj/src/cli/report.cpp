#include <iomanip>
#include <ostream>

#include "i2e/cli.hpp"
#include "json.hpp"

namespace i2e::cli {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

std::string_view status_name(const explore::Verdict& v) {
  return v.inconclusive() ? "inconclusive" : "complete";
}

std::string_view inclusion_name(Inclusion::Status s) {
  switch (s) {
    case Inclusion::Status::Holds:
      return "holds";
    case Inclusion::Status::Fails:
      return "fails";
    case Inclusion::Status::Unknown:
      break;
  }
  return "unknown";
}

std::string_view computed_name(bool satisfiable) {
  return satisfiable ? "allowed" : "forbidden";
}

json witness_json(const MemoryModel& model, const explore::Witness& w) {
  json steps = json::array();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const RuleInstance& r = w[i];
    steps.push_back({{"step", i + 1},
                     {"proc", model.program().threads[r.proc].name},
                     {"rule", model.rule_name(r)},
                     {"text", model.describe(r)}});
  }
  return steps;
}

void witness_text(const MemoryModel& model, const explore::Witness& w,
                  std::ostream& out, std::string_view indent) {
  if (w.empty()) out << indent << "(initial state)\n";
  for (std::size_t i = 0; i < w.size(); ++i)
    out << indent << std::setw(3) << i + 1 << ". " << model.describe(w[i])
        << "\n";
}

json outcome_json(const litmus::Program& program, const litmus::Outcome& o) {
  json regs = json::object();
  for (std::size_t t = 0; t < program.threads.size(); ++t) {
    const auto& code = program.threads[t];
    for (std::size_t r = 0; r < code.registers.size(); ++r)
      regs[code.name + ":" + code.registers[r]] = o.registers[t][r];
  }
  json mem = json::object();
  const auto& locs = program.addresses.entries();
  for (std::size_t k = 0; k < locs.size(); ++k) mem[locs[k].first] = o.memory[k];
  return {{"text", litmus::format_outcome(program, o)},
          {"registers", regs},
          {"memory", mem}};
}

std::string duration_text(std::chrono::microseconds us) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << us.count() / 1000.0 << " ms";
  return s.str();
}

struct Totals {
  std::size_t tests = 0, errors = 0, runs = 0, inconclusive = 0;
  std::size_t checks = 0, passed = 0, failed = 0;
};

Totals totals(const Report& report) {
  Totals t;
  for (const TestReport& tr : report.tests) {
    ++t.tests;
    if (tr.error) ++t.errors;
    for (const explore::Verdict& v : tr.verdicts) {
      ++t.runs;
      if (v.inconclusive()) ++t.inconclusive;
      for (const explore::CheckVerdict& c : v.checks) {
        ++t.checks;
        ++(c.pass ? t.passed : t.failed);
      }
    }
  }
  return t;
}

}  // namespace

void render_json(const Report& report, std::ostream& out) {
  json tests = json::array();
  for (const TestReport& tr : report.tests) {
    json jt = {{"name", tr.name}, {"source", tr.source}};
    if (tr.error) {
      jt["error"] = *tr.error;
      tests.push_back(std::move(jt));
      continue;
    }
    const litmus::Program& program = tr.test->program;
    json runs = json::array();
    for (const explore::Verdict& v : tr.verdicts) {
      auto model = make_model(v.model, program);
      const auto& st = v.result.stats;
      json jr = {{"model", model_name(v.model)},
                 {"status", status_name(v)},
                 {"stats",
                  {{"states", st.states},
                   {"transitions", st.transitions},
                   {"dedup_hits", st.dedup_hits},
                   {"max_frontier", st.max_frontier},
                   {"max_depth", st.max_depth},
                   {"wall_us", st.wall.count()}}}};
      if (v.inconclusive()) jr["inconclusive_reason"] = v.result.inconclusive_reason;
      json outcomes = json::array();
      for (const auto& [o, w] : v.result.outcomes) {
        json jo = outcome_json(program, o);
        if (report.witness) jo["witness"] = witness_json(*model, w);
        outcomes.push_back(std::move(jo));
      }
      jr["outcomes"] = std::move(outcomes);
      json checks = json::array();
      for (const explore::CheckVerdict& c : v.checks) {
        json jc = {{"condition", c.condition},
                   {"expected", litmus::polarity_name(c.polarity)},
                   {"computed", computed_name(c.satisfiable)},
                   {"satisfiable", c.satisfiable},
                   {"pass", c.pass}};
        if (report.witness && c.witness)
          jc["witness"] = witness_json(*model, *c.witness);
        checks.push_back(std::move(jc));
      }
      jr["checks"] = std::move(checks);
      jr["deadlocks"] = v.result.deadlocks;
      runs.push_back(std::move(jr));
    }
    jt["runs"] = std::move(runs);
    if (!tr.inclusions.empty()) {
      json inc = json::array();
      for (const Inclusion& i : tr.inclusions) {
        json ji = {{"sub", model_name(i.sub)},
                   {"sup", model_name(i.sup)},
                   {"status", inclusion_name(i.status)}};
        if (i.counterexample)
          ji["counterexample"] = outcome_json(program, *i.counterexample);
        inc.push_back(std::move(ji));
      }
      jt["inclusions"] = std::move(inc);
    }
    tests.push_back(std::move(jt));
  }

  Totals t = totals(report);
  json doc = {{"schema_version", kSchemaVersion},
              {"tests", std::move(tests)},
              {"summary",
               {{"tests", t.tests},
                {"errors", t.errors},
                {"runs", t.runs},
                {"inconclusive", t.inconclusive},
                {"checks", t.checks},
                {"passed", t.passed},
                {"failed", t.failed},
                {"exit_code", report.exit_code()}}}};
  out << doc.dump(2) << "\n";
}

void render_text(const Report& report, std::ostream& out) {
  for (const TestReport& tr : report.tests) {
    out << "== " << tr.name << " (" << tr.source << ")\n";
    if (tr.error) {
      out << "   error: " << *tr.error << "\n";
      continue;
    }
    const litmus::Program& program = tr.test->program;
    for (const explore::Verdict& v : tr.verdicts) {
      auto model = make_model(v.model, program);
      const auto& st = v.result.stats;
      out << "-- " << model_name(v.model) << ": " << status_name(v);
      if (v.inconclusive()) out << " (" << v.result.inconclusive_reason << ")";
      out << "; " << st.states << " states, " << st.transitions
          << " transitions, " << st.dedup_hits << " dedup hits, frontier "
          << st.max_frontier << ", depth " << st.max_depth << ", "
          << duration_text(st.wall) << "\n";
      out << "   outcomes (" << v.result.outcomes.size()
          << (v.inconclusive() ? ", partial" : "") << "):\n";
      for (const auto& [o, w] : v.result.outcomes) {
        out << "     " << litmus::format_outcome(program, o) << "\n";
        if (report.witness) witness_text(*model, w, out, "         ");
      }
      for (const explore::CheckVerdict& c : v.checks) {
        out << "   check " << litmus::polarity_name(c.polarity) << ": "
            << c.condition << "  expected "
            << litmus::polarity_name(c.polarity) << ", computed "
            << computed_name(c.satisfiable) << ", satisfiable "
            << (c.satisfiable ? "yes" : "no") << "  "
            << (c.pass ? "PASS" : "FAIL") << "\n";
        if (report.witness && c.witness) {
          out << "     witness:\n";
          witness_text(*model, *c.witness, out, "     ");
        }
      }
      for (const std::string& d : v.result.deadlocks)
        out << "   deadlock: " << d << "\n";
    }
    for (const Inclusion& i : tr.inclusions) {
      out << "   " << model_name(i.sub) << " <= " << model_name(i.sup) << ": "
          << inclusion_name(i.status);
      if (i.counterexample)
        out << " (only in " << model_name(i.sub) << ": "
            << litmus::format_outcome(program, *i.counterexample) << ")";
      out << "\n";
    }
  }
  Totals t = totals(report);
  out << "summary: " << t.tests << " tests, " << t.errors << " errors, "
      << t.runs << " runs, " << t.inconclusive << " inconclusive, "
      << t.checks << " checks, " << t.passed << " passed, " << t.failed
      << " failed, exit code " << report.exit_code() << "\n";
}

}  // namespace i2e::cli
