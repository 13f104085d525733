#include <sstream>
#include <string>
#include <type_traits>
#include <variant>

#include "i2e/litmus.hpp"

namespace i2e::litmus {

namespace {

std::string term_body(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Literal:
      return std::to_string(t.literal);
    case Term::Kind::Register:
    case Term::Kind::Symbol:
      return t.name;
  }
  return {};
}

std::string operand(const Expr& e) {
  return e.is_simple() ? to_text(e) : "(" + to_text(e) + ")";
}

std::string models_text(const std::vector<ModelKind>& models) {
  std::string out;
  for (ModelKind m : models) {
    if (!out.empty()) out += ',';
    out += model_name(m);
  }
  return out;
}

void print_cond(const Condition& c, std::string& out, bool parenthesize) {
  switch (c.kind) {
    case Condition::Kind::Atom: {
      if (c.memory) {
        out += "m[" + c.name + "]";
      } else {
        if (!c.thread.empty()) out += c.thread + ":";
        out += c.name;
      }
      out += "=";
      if (c.rhs.kind == Term::Kind::Literal) {
        out += std::to_string(c.rhs.negated ? -c.rhs.literal : c.rhs.literal);
      } else {
        out += c.rhs.name;
      }
      return;
    }
    case Condition::Kind::Not:
      out += "!";
      print_cond(c.children.front(), out, true);
      return;
    case Condition::Kind::And:
    case Condition::Kind::Or: {
      const char* sep = c.kind == Condition::Kind::And ? " & " : " | ";
      if (parenthesize) out += "(";
      for (std::size_t i = 0; i < c.children.size(); ++i) {
        if (i) out += sep;
        const Condition& child = c.children[i];
        // '&' binds tighter than '|'.
        bool wrap = child.kind == Condition::Kind::Or ||
                    (child.kind == Condition::Kind::And &&
                     c.kind == Condition::Kind::And);
        print_cond(child, out, wrap);
      }
      if (parenthesize) out += ")";
      return;
    }
  }
}

}  // namespace

std::string_view polarity_name(Polarity p) {
  return p == Polarity::Allowed ? "allowed" : "forbidden";
}

std::string to_text(const Expr& expr) {
  std::string out;
  for (std::size_t i = 0; i < expr.terms.size(); ++i) {
    Term t = expr.terms[i];
    if (t.kind == Term::Kind::Literal && t.literal < 0) {
      t.literal = -t.literal;
      t.negated = !t.negated;
    }
    if (i == 0) {
      if (t.negated) out += "-";
    } else {
      out += t.negated ? " - " : " + ";
    }
    out += term_body(t);
  }
  return out;
}

std::string to_text(const Condition& cond) {
  std::string out;
  print_cond(cond, out, false);
  return out;
}

std::string to_text(const LitmusTest& test) {
  std::ostringstream os;
  os << kFormatHeader << "\n";
  os << "name: " << test.name << "\n";
  if (test.model_hint) os << "model: " << model_name(*test.model_hint) << "\n";
  if (!test.init.empty()) {
    os << "init:\n";
    for (const auto& [name, v] : test.init) os << "  " << name << " = " << v << "\n";
  }
  for (const Thread& t : test.threads) {
    os << "thread " << t.name << ":\n";
    for (const SurfaceInstr& ins : t.code) {
      std::visit(
          [&](const auto& i) {
            using T = std::decay_t<decltype(i)>;
            if constexpr (std::is_same_v<T, AssignInstr>) {
              os << "  " << i.dst << " = " << to_text(i.expr) << "\n";
            } else if constexpr (std::is_same_v<T, LoadInstr>) {
              os << "  " << i.dst << " = Ld " << to_text(i.addr) << "\n";
            } else if constexpr (std::is_same_v<T, StoreInstr>) {
              os << "  St " << operand(i.addr) << " " << operand(i.value)
                 << "\n";
            } else if constexpr (std::is_same_v<T, FenceInstr>) {
              os << "  "
                 << (i.kind == FenceKind::Commit ? "Commit" : "Reconcile")
                 << "\n";
            } else if constexpr (std::is_same_v<T, BranchInstr>) {
              os << "  if " << to_text(i.lhs)
                 << (i.cond == BranchCond::Eq ? " == " : " != ")
                 << to_text(i.rhs);
              if (i.target) {
                os << " goto " << *i.target << "\n";
              } else {
                os << " exit\n";
              }
            } else if constexpr (std::is_same_v<T, ExitInstr>) {
              os << "  exit\n";
            } else {
              os << i.name << ":\n";
            }
          },
          ins);
    }
  }
  for (const Check& c : test.checks) {
    os << "check " << polarity_name(c.polarity);
    if (!c.models.empty()) os << " under " << models_text(c.models);
    os << ": " << to_text(c.cond) << "\n";
  }
  return os.str();
}

}  // namespace i2e::litmus
