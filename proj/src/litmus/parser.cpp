#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "i2e/litmus.hpp"

namespace i2e::litmus {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

namespace {

bool is_register_name(std::string_view s) {
  if (s.size() < 2 || s[0] != 'r') return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

const std::set<std::string, std::less<>> kKeywords = {
    "Ld", "St", "Commit", "Reconcile", "if", "goto", "exit", "thread",
    "check", "init", "name", "model", "under"};

struct Token {
  enum class Kind : std::uint8_t { Ident, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  Value value = 0;
  int column = 0;
};

// Tokenizer and recursive-descent parser for the content of one line.
class LineParser {
 public:
  LineParser(std::string_view line, int line_no, int col_offset)
      : line_no_(line_no) {
    std::size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      Token t;
      t.column = static_cast<int>(i) + 1 + col_offset;
      if (is_ident_start(c)) {
        std::size_t j = i;
        while (j < line.size() && is_ident_char(line[j])) ++j;
        t.kind = Token::Kind::Ident;
        t.text = std::string(line.substr(i, j - i));
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < line.size() &&
               std::isdigit(static_cast<unsigned char>(line[j])))
          ++j;
        t.kind = Token::Kind::Int;
        t.text = std::string(line.substr(i, j - i));
        auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + j,
                                         t.value);
        if (ec != std::errc{})
          throw ParseError(line_no_, t.column, "integer out of range");
        i = j;
      } else {
        t.kind = Token::Kind::Punct;
        std::string_view two = line.substr(i, 2);
        if (two == "==" || two == "!=") {
          t.text = std::string(two);
          i += 2;
        } else if (std::string_view("+-()=:,&|!~[]").find(c) !=
                   std::string_view::npos) {
          t.text = std::string(1, c);
          ++i;
        } else {
          throw ParseError(line_no_, t.column,
                           std::string("unexpected character '") + c + "'");
        }
      }
      tokens_.push_back(std::move(t));
    }
    Token end;
    end.column = static_cast<int>(line.size()) + 1 + col_offset;
    tokens_.push_back(end);
  }

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  std::size_t size() const { return tokens_.size() - 1; }
  std::size_t position() const { return pos_; }
  void rewind(std::size_t p) { pos_ = p; }

  bool accept(std::string_view punct) {
    if (peek().kind == Token::Kind::Punct && peek().text == punct) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_word(std::string_view word) {
    if (peek().kind == Token::Kind::Ident && peek().text == word) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }
  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }
  Token take() { return tokens_[pos_++]; }

  std::string ident(std::string_view what) {
    if (peek().kind != Token::Kind::Ident) fail("expected " + std::string(what));
    return take().text;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line_no_, peek().column, msg);
  }

  // expr := term (('+' | '-') term)*
  Expr expr() {
    Expr e;
    signed_term(e, false);
    for (;;) {
      if (accept("+")) {
        signed_term(e, false);
      } else if (accept("-")) {
        signed_term(e, true);
      } else {
        return e;
      }
    }
  }

  // Single primary, used for a store's address operand.
  Expr primary_expr() {
    Expr e;
    signed_term(e, false);
    return e;
  }

  Condition condition() { return cond_or(); }

  Term cond_rhs() {
    bool neg = false;
    while (accept("-")) neg = !neg;
    const Token& t = peek();
    if (t.kind == Token::Kind::Int) {
      Value v = take().value;
      return Term::lit(neg ? -v : v);
    }
    if (t.kind == Token::Kind::Ident && !neg) {
      std::string name = take().text;
      if (is_register_name(name)) fail("right-hand side must be a value");
      return Term::sym(name);
    }
    fail("expected integer or location name");
  }

 private:
  void signed_term(Expr& out, bool negated) {
    while (accept("-")) negated = !negated;
    const Token& t = peek();
    if (accept("(")) {
      Expr inner = expr();
      expect(")");
      for (Term term : inner.terms) {
        term.negated = term.negated != negated;
        out.terms.push_back(std::move(term));
      }
      return;
    }
    Term term;
    if (t.kind == Token::Kind::Int) {
      term = Term::lit(take().value);
    } else if (t.kind == Token::Kind::Ident) {
      if (kKeywords.contains(t.text)) fail("unexpected keyword '" + t.text + "'");
      std::string name = take().text;
      term = is_register_name(name) ? Term::reg(name) : Term::sym(name);
    } else {
      fail(t.kind == Token::Kind::End ? "expected operand"
                                      : "unexpected '" + t.text + "'");
    }
    term.negated = negated;
    out.terms.push_back(std::move(term));
  }

  Condition cond_or() {
    std::vector<Condition> parts;
    parts.push_back(cond_and());
    while (accept("|")) parts.push_back(cond_and());
    if (parts.size() == 1) return std::move(parts.front());
    return Condition::disj(std::move(parts));
  }

  Condition cond_and() {
    std::vector<Condition> parts;
    parts.push_back(cond_unary());
    while (accept("&") || accept(",")) parts.push_back(cond_unary());
    if (parts.size() == 1) return std::move(parts.front());
    return Condition::conj(std::move(parts));
  }

  Condition cond_unary() {
    if (accept("!") || accept("~")) return Condition::negation(cond_unary());
    if (accept("(")) {
      Condition c = cond_or();
      expect(")");
      return c;
    }
    return cond_atom();
  }

  Condition cond_atom() {
    if (peek().kind == Token::Kind::Ident && peek().text == "m" &&
        peek(1).kind == Token::Kind::Punct && peek(1).text == "[") {
      take();
      take();
      std::string loc = ident("location name");
      if (is_register_name(loc)) fail("m[...] takes a location, not a register");
      expect("]");
      expect("=");
      return Condition::mem_atom(std::move(loc), cond_rhs());
    }
    std::string first = ident("register or m[location]");
    std::string thread;
    std::string reg = first;
    if (accept(":")) {
      thread = first;
      reg = ident("register");
    }
    if (!is_register_name(reg)) fail("'" + reg + "' is not a register");
    expect("=");
    return Condition::reg_atom(std::move(thread), std::move(reg), cond_rhs());
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int line_no_;
};

struct PendingBranch {
  std::string label;
  int line;
  int column;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  LitmusTest run() {
    bool saw_header = false;
    bool saw_content = false;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text_.size()) {
      std::size_t nl = text_.find('\n', start);
      if (nl == std::string_view::npos) nl = text_.size();
      std::string_view raw = text_.substr(start, nl - start);
      start = nl + 1;
      ++line_no;
      if (std::size_t hash = raw.find('#'); hash != std::string_view::npos)
        raw = raw.substr(0, hash);
      if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
      std::string_view line = trim(raw);
      if (line.empty()) continue;
      saw_content = true;
      int indent = static_cast<int>(raw.find_first_not_of(" \t"));
      if (!saw_header) {
        if (line != kFormatHeader)
          throw ParseError(line_no, indent + 1,
                           "expected header '" + std::string(kFormatHeader) +
                               "'");
        saw_header = true;
        continue;
      }
      handle_line(line, line_no, indent);
      if (nl == text_.size()) break;
    }
    if (!saw_content) throw ParseError(1, 1, "no threads");
    finish_thread();
    if (test_.threads.empty()) throw ParseError(line_no, 1, "no threads");
    if (test_.checks.empty()) throw ParseError(line_no, 1, "no checks");
    if (test_.name.empty()) throw ParseError(1, 1, "missing 'name:'");
    return std::move(test_);
  }

 private:
  enum class Section : std::uint8_t { Top, Init, Thread };

  static bool starts_with_word(std::string_view line, std::string_view word) {
    if (!line.starts_with(word)) return false;
    if (line.size() == word.size()) return true;
    char next = line[word.size()];
    return !is_ident_char(next) && next != '-';
  }

  void handle_line(std::string_view line, int line_no, int indent) {
    if (starts_with_word(line, "thread")) {
      finish_thread();
      std::string_view rest = trim(line.substr(6));
      if (rest.empty() || rest.back() != ':')
        throw ParseError(line_no, indent + 1, "expected 'thread <name>:'");
      std::string_view name = trim(rest.substr(0, rest.size() - 1));
      if (name.empty() || !is_ident_start(name.front()) ||
          !std::all_of(name.begin(), name.end(), is_ident_char))
        throw ParseError(line_no, indent + 8, "invalid thread name");
      for (const Thread& t : test_.threads)
        if (t.name == name)
          throw ParseError(line_no, indent + 8,
                           "duplicate thread name '" + std::string(name) + "'");
      Thread t;
      t.name = std::string(name);
      test_.threads.push_back(std::move(t));
      section_ = Section::Thread;
      return;
    }
    if (starts_with_word(line, "check")) {
      finish_thread();
      section_ = Section::Top;
      parse_check(line, line_no, indent);
      return;
    }
    if (starts_with_word(line, "init") &&
        trim(line.substr(4)).starts_with(":")) {
      finish_thread();
      section_ = Section::Init;
      std::string_view rest = trim(trim(line.substr(4)).substr(1));
      if (!rest.empty()) {
        int col = indent + static_cast<int>(line.size() - rest.size());
        parse_init_items(rest, line_no, col);
      }
      return;
    }
    if (starts_with_word(line, "name") &&
        trim(line.substr(4)).starts_with(":")) {
      finish_thread();
      section_ = Section::Top;
      std::string_view value = trim(trim(line.substr(4)).substr(1));
      if (value.empty() ||
          value.find_first_of(" \t") != std::string_view::npos)
        throw ParseError(line_no, indent + 1, "invalid test name");
      test_.name = std::string(value);
      return;
    }
    if (starts_with_word(line, "model") &&
        trim(line.substr(5)).starts_with(":")) {
      finish_thread();
      section_ = Section::Top;
      std::string_view value = trim(trim(line.substr(5)).substr(1));
      auto m = parse_model(value);
      if (!m)
        throw ParseError(line_no, indent + 1,
                         "unknown model '" + std::string(value) + "'");
      test_.model_hint = *m;
      return;
    }
    switch (section_) {
      case Section::Init:
        parse_init_items(line, line_no, indent);
        return;
      case Section::Thread:
        parse_instruction(line, line_no, indent);
        return;
      case Section::Top:
        throw ParseError(line_no, indent + 1, "unexpected line outside a section");
    }
  }

  void parse_init_items(std::string_view text, int line_no, int col) {
    LineParser p(text, line_no, col);
    do {
      std::string name = p.ident("location name");
      if (is_register_name(name) || kKeywords.contains(name))
        p.fail("'" + name + "' cannot name a location");
      p.expect("=");
      bool neg = false;
      while (p.accept("-")) neg = !neg;
      if (p.peek().kind != Token::Kind::Int) p.fail("expected integer");
      Value v = p.take().value;
      for (const auto& [n, _] : test_.init)
        if (n == name) p.fail("duplicate init for '" + name + "'");
      test_.init.emplace_back(std::move(name), neg ? -v : v);
    } while (p.accept(","));
    p.expect_end();
  }

  void parse_check(std::string_view line, int line_no, int indent) {
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      throw ParseError(line_no, indent + 1, "expected ':' in check");
    std::string_view head = trim(line.substr(5, colon - 5));
    Check check;
    std::string_view pol = head.substr(0, head.find_first_of(" \t"));
    if (pol == "allowed") {
      check.polarity = Polarity::Allowed;
    } else if (pol == "forbidden") {
      check.polarity = Polarity::Forbidden;
    } else {
      throw ParseError(line_no, indent + 7,
                       "expected 'allowed' or 'forbidden'");
    }
    std::string_view rest = trim(head.substr(pol.size()));
    if (!rest.empty()) {
      if (!starts_with_word(rest, "under"))
        throw ParseError(line_no, indent + 1, "expected 'under <models>'");
      std::string_view list = trim(rest.substr(5));
      while (!list.empty()) {
        std::size_t comma = list.find(',');
        std::string_view item = trim(list.substr(0, comma));
        auto m = parse_model(item);
        if (!m)
          throw ParseError(line_no, indent + 1,
                           "unknown model '" + std::string(item) + "'");
        if (std::find(check.models.begin(), check.models.end(), *m) ==
            check.models.end())
          check.models.push_back(*m);
        if (comma == std::string_view::npos) break;
        list = trim(list.substr(comma + 1));
      }
      if (check.models.empty())
        throw ParseError(line_no, indent + 1, "empty model list");
    }
    LineParser p(line.substr(colon + 1), line_no,
                 indent + static_cast<int>(colon) + 1);
    if (p.at_end()) p.fail("empty condition");
    check.cond = p.condition();
    p.expect_end();
    test_.checks.push_back(std::move(check));
  }

  void parse_instruction(std::string_view line, int line_no, int indent) {
    LineParser p(line, line_no, indent);
    Thread& thread = test_.threads.back();
    const Token& first = p.peek();

    // label:
    if (first.kind == Token::Kind::Ident && p.size() == 2 &&
        p.peek(1).kind == Token::Kind::Punct && p.peek(1).text == ":") {
      if (kKeywords.contains(first.text) || is_register_name(first.text))
        p.fail("invalid label name '" + first.text + "'");
      if (!labels_.insert(first.text).second)
        p.fail("duplicate label '" + first.text + "'");
      thread.code.emplace_back(LabelInstr{first.text});
      return;
    }

    if (p.accept_word("Commit")) {
      p.expect_end();
      thread.code.emplace_back(FenceInstr{FenceKind::Commit});
      return;
    }
    if (p.accept_word("Reconcile")) {
      p.expect_end();
      thread.code.emplace_back(FenceInstr{FenceKind::Reconcile});
      return;
    }
    if (p.accept_word("exit")) {
      p.expect_end();
      thread.code.emplace_back(ExitInstr{});
      return;
    }
    if (p.accept_word("St")) {
      StoreInstr st;
      st.addr = p.primary_expr();
      st.value = p.expr();
      p.expect_end();
      thread.code.emplace_back(std::move(st));
      return;
    }
    if (p.accept_word("if")) {
      thread.code.emplace_back(parse_branch(p, line_no));
      return;
    }
    if (first.kind == Token::Kind::Ident && p.peek(1).kind == Token::Kind::Punct &&
        p.peek(1).text == "=") {
      std::string dst = p.take().text;
      if (!is_register_name(dst))
        p.fail("assignment target '" + dst + "' is not a register");
      p.take();
      if (p.accept_word("Ld")) {
        LoadInstr ld{dst, p.expr()};
        p.expect_end();
        thread.code.emplace_back(std::move(ld));
      } else {
        AssignInstr as{dst, p.expr()};
        p.expect_end();
        thread.code.emplace_back(std::move(as));
      }
      return;
    }
    if (first.kind == Token::Kind::Ident && p.size() == 1 &&
        !is_register_name(first.text))
      p.fail("unknown fence keyword '" + first.text + "'");
    p.fail("syntax error");
  }

  BranchInstr parse_branch(LineParser& p, int line_no) {
    BranchInstr br;
    auto compare = [&](LineParser& lp) {
      br.lhs = lp.expr();
      if (lp.accept("==")) {
        br.cond = BranchCond::Eq;
      } else if (lp.accept("!=")) {
        br.cond = BranchCond::Ne;
      } else {
        lp.fail("expected '==' or '!='");
      }
      br.rhs = lp.expr();
    };
    std::size_t mark = p.position();
    bool parsed = false;
    if (p.accept("(")) {
      try {
        compare(p);
        p.expect(")");
        parsed = true;
      } catch (const ParseError&) {
        p.rewind(mark);
      }
    }
    if (!parsed) compare(p);
    if (p.accept_word("exit")) {
      br.target.reset();
    } else if (p.accept_word("goto")) {
      int column = p.peek().column;
      std::string label = p.ident("label");
      pending_.push_back({label, line_no, column});
      br.target = label;
    } else {
      p.fail("expected 'goto <label>' or 'exit'");
    }
    p.expect_end();
    return br;
  }

  void finish_thread() {
    for (const PendingBranch& b : pending_)
      if (!labels_.contains(b.label))
        throw ParseError(b.line, b.column,
                         "unresolved label '" + b.label + "'");
    pending_.clear();
    labels_.clear();
  }

  std::string_view text_;
  LitmusTest test_;
  Section section_ = Section::Top;
  std::set<std::string, std::less<>> labels_;
  std::vector<PendingBranch> pending_;
};

}  // namespace

LitmusTest parse(std::string_view text) { return Parser(text).run(); }

}  // namespace i2e::litmus
