#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <variant>

#include "i2e/litmus.hpp"

namespace i2e::litmus {

Term Term::lit(Value v) {
  Term t;
  t.kind = Kind::Literal;
  t.literal = v;
  return t;
}

Term Term::reg(std::string name) {
  Term t;
  t.kind = Kind::Register;
  t.name = std::move(name);
  return t;
}

Term Term::sym(std::string name) {
  Term t;
  t.kind = Kind::Symbol;
  t.name = std::move(name);
  return t;
}

Condition Condition::reg_atom(std::string thread, std::string reg, Term rhs) {
  Condition c;
  c.kind = Kind::Atom;
  c.thread = std::move(thread);
  c.name = std::move(reg);
  c.rhs = std::move(rhs);
  return c;
}

Condition Condition::mem_atom(std::string location, Term rhs) {
  Condition c;
  c.kind = Kind::Atom;
  c.memory = true;
  c.name = std::move(location);
  c.rhs = std::move(rhs);
  return c;
}

Condition Condition::conj(std::vector<Condition> children) {
  Condition c;
  c.kind = Kind::And;
  c.children = std::move(children);
  return c;
}

Condition Condition::disj(std::vector<Condition> children) {
  Condition c;
  c.kind = Kind::Or;
  c.children = std::move(children);
  return c;
}

Condition Condition::negation(Condition child) {
  Condition c;
  c.kind = Kind::Not;
  c.children.push_back(std::move(child));
  return c;
}

bool Check::applies_to(ModelKind model) const {
  return models.empty() ||
         std::find(models.begin(), models.end(), model) != models.end();
}

bool BoundCheck::applies_to(ModelKind model) const {
  return models.empty() ||
         std::find(models.begin(), models.end(), model) != models.end();
}

std::size_t LitmusTest::instruction_count() const {
  std::size_t n = 0;
  for (const Thread& t : threads)
    for (const SurfaceInstr& i : t.code)
      if (!std::holds_alternative<LabelInstr>(i)) ++n;
  return n;
}

void AddressMap::add(std::string name, Address base) {
  entries_.emplace_back(std::move(name), base);
}

std::optional<Address> AddressMap::lookup(std::string_view name) const {
  for (const auto& [n, a] : entries_)
    if (n == name) return a;
  return std::nullopt;
}

std::optional<std::string_view> AddressMap::name_of(Address addr) const {
  for (const auto& [n, a] : entries_)
    if (a == addr) return std::string_view(n);
  return std::nullopt;
}

namespace {

void collect_symbols(const Expr& e, std::vector<std::string>& out) {
  for (const Term& t : e.terms)
    if (t.kind == Term::Kind::Symbol) out.push_back(t.name);
}

void collect_symbols(const Condition& c, std::vector<std::string>& out) {
  if (c.kind == Condition::Kind::Atom) {
    if (c.memory) out.push_back(c.name);
    if (c.rhs.kind == Term::Kind::Symbol) out.push_back(c.rhs.name);
    return;
  }
  for (const Condition& child : c.children) collect_symbols(child, out);
}

void collect_symbols(const SurfaceInstr& ins, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& i) {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, AssignInstr>) {
          collect_symbols(i.expr, out);
        } else if constexpr (std::is_same_v<T, LoadInstr>) {
          collect_symbols(i.addr, out);
        } else if constexpr (std::is_same_v<T, StoreInstr>) {
          collect_symbols(i.addr, out);
          collect_symbols(i.value, out);
        } else if constexpr (std::is_same_v<T, BranchInstr>) {
          collect_symbols(i.lhs, out);
          collect_symbols(i.rhs, out);
        }
      },
      ins);
}

void collect_registers(const Expr& e, std::vector<std::string>& out) {
  for (const Term& t : e.terms)
    if (t.kind == Term::Kind::Register) out.push_back(t.name);
}

std::vector<std::string> thread_registers(const Thread& thread) {
  std::vector<std::string> seen;
  for (const SurfaceInstr& ins : thread.code) {
    std::visit(
        [&](const auto& i) {
          using T = std::decay_t<decltype(i)>;
          if constexpr (std::is_same_v<T, AssignInstr>) {
            seen.push_back(i.dst);
            collect_registers(i.expr, seen);
          } else if constexpr (std::is_same_v<T, LoadInstr>) {
            seen.push_back(i.dst);
            collect_registers(i.addr, seen);
          } else if constexpr (std::is_same_v<T, StoreInstr>) {
            collect_registers(i.addr, seen);
            collect_registers(i.value, seen);
          } else if constexpr (std::is_same_v<T, BranchInstr>) {
            collect_registers(i.lhs, seen);
            collect_registers(i.rhs, seen);
          }
        },
        ins);
  }
  std::vector<std::string> unique;
  for (std::string& r : seen)
    if (std::find(unique.begin(), unique.end(), r) == unique.end())
      unique.push_back(std::move(r));
  return unique;
}

class Binder {
 public:
  explicit Binder(const LitmusTest& test) : test_(test) {}

  BoundTest run() {
    BoundTest out;
    out.source = test_;
    out.program.addresses = bind_addresses(test_);
    addresses_ = &out.program.addresses;

    for (const auto& [name, v] : test_.init)
      out.program.init.emplace_back(*addresses_->lookup(name), v);

    regs_.resize(test_.threads.size());
    for (std::size_t t = 0; t < test_.threads.size(); ++t)
      regs_[t] = thread_registers(test_.threads[t]);
    // Registers a check mentions but no instruction touches still belong to
    // the outcome (they read 0).
    for (const Check& c : test_.checks) add_check_registers(c.cond);

    for (std::size_t t = 0; t < test_.threads.size(); ++t)
      out.program.threads.push_back(bind_thread(t));

    for (const Check& c : test_.checks) {
      BoundCheck bc;
      bc.polarity = c.polarity;
      bc.models = c.models;
      bc.cond = bind_condition(c.cond);
      bc.text = to_text(c.cond);
      out.checks.push_back(std::move(bc));
    }
    return out;
  }

 private:
  std::size_t thread_index(const std::string& name) const {
    for (std::size_t t = 0; t < test_.threads.size(); ++t)
      if (test_.threads[t].name == name) return t;
    throw BindError("unknown thread '" + name + "' in condition");
  }

  std::size_t owner_of(const std::string& reg) const {
    std::size_t found = test_.threads.size();
    for (std::size_t t = 0; t < test_.threads.size(); ++t) {
      const auto& rs = regs_[t];
      if (std::find(rs.begin(), rs.end(), reg) == rs.end()) continue;
      if (found != test_.threads.size())
        throw BindError("register '" + reg +
                        "' is ambiguous; qualify it as <thread>:" + reg);
      found = t;
    }
    if (found == test_.threads.size())
      throw BindError("register '" + reg + "' is not used by any thread");
    return found;
  }

  void add_check_registers(const Condition& c) {
    if (c.kind != Condition::Kind::Atom) {
      for (const Condition& child : c.children) add_check_registers(child);
      return;
    }
    if (c.memory || c.thread.empty()) return;
    auto& rs = regs_[thread_index(c.thread)];
    if (std::find(rs.begin(), rs.end(), c.name) == rs.end())
      rs.push_back(c.name);
  }

  RegId reg_id(std::size_t thread, const std::string& name) const {
    const auto& rs = regs_[thread];
    auto it = std::find(rs.begin(), rs.end(), name);
    return static_cast<RegId>(it - rs.begin());
  }

  Value symbol(const std::string& name) const {
    auto a = addresses_->lookup(name);
    if (!a) throw BindError("unknown location '" + name + "'");
    return *a;
  }

  BoundExpr bind_expr(std::size_t thread, const Expr& e) const {
    BoundExpr out;
    for (const Term& t : e.terms) {
      BoundTerm bt;
      bt.negated = t.negated;
      switch (t.kind) {
        case Term::Kind::Literal:
          bt.constant = t.literal;
          break;
        case Term::Kind::Symbol:
          bt.constant = symbol(t.name);
          break;
        case Term::Kind::Register:
          bt.is_register = true;
          bt.reg = reg_id(thread, t.name);
          break;
      }
      out.terms.push_back(bt);
    }
    return out;
  }

  ThreadCode bind_thread(std::size_t t) const {
    const Thread& thread = test_.threads[t];
    ThreadCode code;
    code.name = thread.name;
    code.registers = regs_[t];

    std::map<std::string, std::size_t> labels;
    std::size_t index = 0;
    for (const SurfaceInstr& ins : thread.code) {
      if (const auto* l = std::get_if<LabelInstr>(&ins)) {
        labels[l->name] = index;
      } else {
        ++index;
      }
    }
    const std::size_t end = index;

    for (const SurfaceInstr& ins : thread.code) {
      Op op;
      bool emit = true;
      std::visit(
          [&](const auto& i) {
            using T = std::decay_t<decltype(i)>;
            if constexpr (std::is_same_v<T, AssignInstr>) {
              op.kind = Op::Kind::Assign;
              op.dst = reg_id(t, i.dst);
              op.a = bind_expr(t, i.expr);
            } else if constexpr (std::is_same_v<T, LoadInstr>) {
              op.kind = Op::Kind::Load;
              op.dst = reg_id(t, i.dst);
              op.a = bind_expr(t, i.addr);
            } else if constexpr (std::is_same_v<T, StoreInstr>) {
              op.kind = Op::Kind::Store;
              op.a = bind_expr(t, i.addr);
              op.b = bind_expr(t, i.value);
            } else if constexpr (std::is_same_v<T, FenceInstr>) {
              op.kind = Op::Kind::Fence;
              op.fence = i.kind;
            } else if constexpr (std::is_same_v<T, BranchInstr>) {
              op.kind = Op::Kind::Branch;
              op.a = bind_expr(t, i.lhs);
              op.b = bind_expr(t, i.rhs);
              op.cond = i.cond;
              if (i.target) {
                auto it = labels.find(*i.target);
                if (it == labels.end())
                  throw BindError("unresolved label '" + *i.target + "'");
                op.target = it->second;
              } else {
                op.target = end;
              }
            } else if constexpr (std::is_same_v<T, ExitInstr>) {
              op.kind = Op::Kind::Exit;
            } else {
              emit = false;
            }
          },
          ins);
      if (emit) code.ops.push_back(std::move(op));
    }
    return code;
  }

  BoundCondition bind_condition(const Condition& c) const {
    BoundCondition out;
    out.kind = c.kind;
    if (c.kind != Condition::Kind::Atom) {
      for (const Condition& child : c.children)
        out.children.push_back(bind_condition(child));
      return out;
    }
    out.memory = c.memory;
    if (c.memory) {
      const auto& entries = addresses_->entries();
      auto it = std::find_if(entries.begin(), entries.end(),
                             [&](const auto& e) { return e.first == c.name; });
      out.location = static_cast<std::size_t>(it - entries.begin());
    } else {
      out.thread = c.thread.empty() ? owner_of(c.name) : thread_index(c.thread);
      out.reg = reg_id(out.thread, c.name);
    }
    out.rhs = c.rhs.kind == Term::Kind::Symbol ? symbol(c.rhs.name)
                                                : c.rhs.literal;
    return out;
  }

  const LitmusTest& test_;
  const AddressMap* addresses_ = nullptr;
  std::vector<std::vector<std::string>> regs_;
};

}  // namespace

AddressMap bind_addresses(const LitmusTest& test) {
  std::vector<std::string> names;
  for (const auto& [name, _] : test.init) names.push_back(name);

  std::vector<std::size_t> order(test.threads.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return test.threads[x].name < test.threads[y].name;
  });
  for (std::size_t t : order)
    for (const SurfaceInstr& ins : test.threads[t].code)
      collect_symbols(ins, names);
  for (const Check& c : test.checks) collect_symbols(c.cond, names);

  AddressMap map;
  Address next = kAddressStride;
  for (std::string& n : names) {
    if (map.lookup(n)) continue;
    map.add(std::move(n), next);
    next += kAddressStride;
  }
  return map;
}

BoundTest bind(const LitmusTest& test) { return Binder(test).run(); }

bool eval_condition(const BoundCondition& cond, const Outcome& outcome) {
  switch (cond.kind) {
    case Condition::Kind::Atom: {
      if (cond.memory) {
        if (cond.location >= outcome.memory.size())
          throw EvalError("outcome has no such location");
        return outcome.memory[cond.location] == cond.rhs;
      }
      if (cond.thread >= outcome.registers.size() ||
          cond.reg >= outcome.registers[cond.thread].size())
        throw EvalError("outcome has no such register");
      return outcome.registers[cond.thread][cond.reg] == cond.rhs;
    }
    case Condition::Kind::Not:
      return !eval_condition(cond.children.front(), outcome);
    case Condition::Kind::And:
      return std::all_of(
          cond.children.begin(), cond.children.end(),
          [&](const BoundCondition& c) { return eval_condition(c, outcome); });
    case Condition::Kind::Or:
      return std::any_of(
          cond.children.begin(), cond.children.end(),
          [&](const BoundCondition& c) { return eval_condition(c, outcome); });
  }
  return false;
}

std::string format_outcome(const Program& program, const Outcome& outcome) {
  std::string out;
  auto sep = [&] {
    if (!out.empty()) out += ' ';
  };
  for (std::size_t t = 0; t < outcome.registers.size(); ++t) {
    const ThreadCode& code = program.threads[t];
    for (std::size_t r = 0; r < outcome.registers[t].size(); ++r) {
      sep();
      out += code.name + ":" + code.registers[r] + "=" +
             std::to_string(outcome.registers[t][r]);
    }
  }
  const auto& entries = program.addresses.entries();
  for (std::size_t i = 0; i < outcome.memory.size(); ++i) {
    sep();
    out += "m[" + entries[i].first + "]=" + std::to_string(outcome.memory[i]);
  }
  return out;
}

std::vector<LitmusTest> load_corpus() {
  std::vector<LitmusTest> tests;
  for (const CorpusEntry& e : corpus_sources()) tests.push_back(parse(e.text));
  return tests;
}

}  // namespace i2e::litmus
