#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "i2e/types.hpp"

namespace i2e::litmus {

/*
 * Surface syntax of a litmus test, as written in a `.litmus` file.
 *
 *   i2e-litmus v1
 *   name: mp-wmm
 *   model: wmm
 *   init:
 *     a = 0
 *   thread P1:
 *     St a 42
 *     Commit
 *     St f 1
 *   thread P2:
 *     r1 = Ld f
 *     Reconcile
 *     r2 = Ld a
 *   check forbidden under wmm,wmm-d: r1=1 & r2=0
 *
 * Registers are identifiers of the form r<digits> and are local to their
 * thread. Every other identifier in an expression names a memory location.
 */

inline constexpr std::string_view kFormatHeader = "i2e-litmus v1";

// Distance between the bases of two named locations. Offsets smaller than
// this never alias another named location.
inline constexpr Address kAddressStride = 1024;

struct Term {
  enum class Kind : std::uint8_t { Literal, Register, Symbol };

  Kind kind = Kind::Literal;
  bool negated = false;
  Value literal = 0;
  std::string name;

  static Term lit(Value v);
  static Term reg(std::string name);
  static Term sym(std::string name);

  friend bool operator==(const Term&, const Term&) = default;
};

// Integer expression kept as a flat signed sum: a + r2 - 1.
struct Expr {
  std::vector<Term> terms;

  bool is_simple() const { return terms.size() == 1 && !terms.front().negated; }
  friend bool operator==(const Expr&, const Expr&) = default;
};

enum class FenceKind : std::uint8_t { Commit, Reconcile };
enum class BranchCond : std::uint8_t { Eq, Ne };
enum class Polarity : std::uint8_t { Allowed, Forbidden };

struct AssignInstr {
  std::string dst;
  Expr expr;
  friend bool operator==(const AssignInstr&, const AssignInstr&) = default;
};

struct LoadInstr {
  std::string dst;
  Expr addr;
  friend bool operator==(const LoadInstr&, const LoadInstr&) = default;
};

struct StoreInstr {
  Expr addr;
  Expr value;
  friend bool operator==(const StoreInstr&, const StoreInstr&) = default;
};

struct FenceInstr {
  FenceKind kind = FenceKind::Commit;
  friend bool operator==(const FenceInstr&, const FenceInstr&) = default;
};

// if <lhs> ==|!= <rhs> goto <target>; no target means exit.
struct BranchInstr {
  Expr lhs;
  BranchCond cond = BranchCond::Eq;
  Expr rhs;
  std::optional<std::string> target;
  friend bool operator==(const BranchInstr&, const BranchInstr&) = default;
};

struct ExitInstr {
  friend bool operator==(const ExitInstr&, const ExitInstr&) = default;
};

struct LabelInstr {
  std::string name;
  friend bool operator==(const LabelInstr&, const LabelInstr&) = default;
};

using SurfaceInstr = std::variant<AssignInstr, LoadInstr, StoreInstr,
                                  FenceInstr, BranchInstr, ExitInstr,
                                  LabelInstr>;

struct Thread {
  std::string name;
  std::vector<SurfaceInstr> code;
  friend bool operator==(const Thread&, const Thread&) = default;
};

// Boolean condition over a final state.
struct Condition {
  enum class Kind : std::uint8_t { Atom, And, Or, Not };

  Kind kind = Kind::Atom;

  // Atom: <thread>:<register> = rhs, or m[<location>] = rhs. An empty
  // thread means "whichever thread owns this register".
  bool memory = false;
  std::string thread;
  std::string name;
  Term rhs;

  std::vector<Condition> children;

  static Condition reg_atom(std::string thread, std::string reg, Term rhs);
  static Condition mem_atom(std::string location, Term rhs);
  static Condition conj(std::vector<Condition> children);
  static Condition disj(std::vector<Condition> children);
  static Condition negation(Condition child);

  friend bool operator==(const Condition&, const Condition&) = default;
};

struct Check {
  Polarity polarity = Polarity::Forbidden;
  // Models the check applies to. Empty means every model.
  std::vector<ModelKind> models;
  Condition cond;

  bool applies_to(ModelKind model) const;
  friend bool operator==(const Check&, const Check&) = default;
};

struct LitmusTest {
  std::string name;
  std::optional<ModelKind> model_hint;
  std::vector<std::pair<std::string, Value>> init;
  std::vector<Thread> threads;
  std::vector<Check> checks;

  std::size_t instruction_count() const;
  friend bool operator==(const LitmusTest&, const LitmusTest&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

LitmusTest parse(std::string_view text);
std::string to_text(const LitmusTest& test);
std::string to_text(const Expr& expr);
std::string to_text(const Condition& cond);
std::string_view polarity_name(Polarity p);

// ---------------------------------------------------------------------------
// Binding: symbolic names to addresses, registers to dense indices.

class AddressMap {
 public:
  void add(std::string name, Address base);
  std::optional<Address> lookup(std::string_view name) const;
  std::optional<std::string_view> name_of(Address addr) const;

  const std::vector<std::pair<std::string, Address>>& entries() const {
    return entries_;
  }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::pair<std::string, Address>> entries_;
};

// Names get bases (k+1)*kAddressStride in first-appearance order, scanning
// init, then threads sorted by name, then checks.
AddressMap bind_addresses(const LitmusTest& test);

struct BoundTerm {
  bool negated = false;
  bool is_register = false;
  RegId reg = 0;
  Value constant = 0;
};

struct BoundExpr {
  std::vector<BoundTerm> terms;
};

struct Op {
  enum class Kind : std::uint8_t { Assign, Load, Store, Fence, Branch, Exit };

  Kind kind = Kind::Exit;
  RegId dst = 0;
  BoundExpr a;  // assign: value; load/store: address; branch: lhs
  BoundExpr b;  // store: value; branch: rhs
  FenceKind fence = FenceKind::Commit;
  BranchCond cond = BranchCond::Eq;
  std::size_t target = 0;  // branch target index; code size means exit
};

struct ThreadCode {
  std::string name;
  std::vector<Op> ops;
  std::vector<std::string> registers;  // index = RegId
};

struct Program {
  std::vector<ThreadCode> threads;
  AddressMap addresses;
  std::vector<std::pair<Address, Value>> init;
};

struct BoundCondition {
  Condition::Kind kind = Condition::Kind::Atom;
  bool memory = false;
  std::size_t thread = 0;
  RegId reg = 0;
  std::size_t location = 0;  // index into AddressMap::entries()
  Value rhs = 0;
  std::vector<BoundCondition> children;
};

struct BoundCheck {
  Polarity polarity = Polarity::Forbidden;
  std::vector<ModelKind> models;
  BoundCondition cond;
  std::string text;

  bool applies_to(ModelKind model) const;
};

struct BoundTest {
  LitmusTest source;
  Program program;
  std::vector<BoundCheck> checks;
};

class BindError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

BoundTest bind(const LitmusTest& test);

// Terminal valuation: registers[thread][reg], memory[location index].
struct Outcome {
  std::vector<std::vector<Value>> registers;
  std::vector<Value> memory;

  friend auto operator<=>(const Outcome&, const Outcome&) = default;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool eval_condition(const BoundCondition& cond, const Outcome& outcome);

// "P1:r1=0 P2:r2=1 m[a]=0"
std::string format_outcome(const Program& program, const Outcome& outcome);

// ---------------------------------------------------------------------------
// Embedded corpus.

struct CorpusEntry {
  std::string file_name;
  std::string_view text;
};

const std::vector<CorpusEntry>& corpus_sources();
std::vector<LitmusTest> load_corpus();

}  // namespace i2e::litmus
