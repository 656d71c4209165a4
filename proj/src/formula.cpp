#include "ftop/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <sstream>

#include "ftop/errors.hpp"

namespace ftop {

std::string sort_name(Sort s) {
  switch (s) {
    case Sort::Nat: return "Nat";
    case Sort::FinSeq: return "FinSeq";
    case Sort::Seq2: return "Seq2";
    case Sort::SeqN: return "SeqN";
  }
  return "?";
}

bool is_sequence_sort(Sort s) { return s == Sort::Seq2 || s == Sort::SeqN; }

bool operator==(const Term& a, const Term& b) {
  return a.kind == b.kind && a.sort == b.sort && a.name == b.name && a.slot == b.slot &&
         a.num == b.num && a.seq == b.seq && a.args == b.args;
}

bool operator==(const Formula& a, const Formula& b) {
  return a.kind == b.kind && a.name == b.name && a.args == b.args && a.sub == b.sub &&
         (a.kind != Formula::Kind::Exists && a.kind != Formula::Kind::Forall ? true
                                                                              : a.sort == b.sort);
}

Formula Formula::bot() { return Formula{}; }

Formula Formula::top() { return imp(bot(), bot()); }

Formula Formula::atom(std::string name, std::vector<Term> args) {
  Formula f;
  f.kind = Kind::Atom;
  f.name = std::move(name);
  f.args = std::move(args);
  return f;
}

namespace {

Formula binary(Formula::Kind k, Formula a, Formula b) {
  Formula f;
  f.kind = k;
  f.sub.push_back(std::move(a));
  f.sub.push_back(std::move(b));
  return f;
}

Formula quantifier(Formula::Kind k, std::string var, Sort s, Formula body) {
  Formula f;
  f.kind = k;
  f.name = std::move(var);
  f.sort = s;
  f.sub.push_back(std::move(body));
  return f;
}

}  // namespace

Formula Formula::conj(Formula a, Formula b) { return binary(Kind::And, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }
Formula Formula::imp(Formula a, Formula b) { return binary(Kind::Imp, std::move(a), std::move(b)); }
Formula Formula::exists(std::string var, Sort s, Formula body) {
  return quantifier(Kind::Exists, std::move(var), s, std::move(body));
}
Formula Formula::forall(std::string var, Sort s, Formula body) {
  return quantifier(Kind::Forall, std::move(var), s, std::move(body));
}

int Formula::depth() const {
  int d = 0;
  for (const auto& s : sub) d = std::max(d, s.depth() + 1);
  return d;
}

Signature default_signature() {
  Signature sig;
  sig.constants["pi"] = Sort::Seq2;
  sig.relations["InBar"] = {Sort::FinSeq};
  return sig;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
  enum Kind { Ident, Number, Sym, End } kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = s[i];
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' ||
                              s[j] == '\''))
        ++j;
      out.push_back({Token::Ident, s.substr(i, j - i), i});
      i = j;
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j - i > 9) throw SyntaxError(i, "number too large");
      out.push_back({Token::Number, s.substr(i, j - i), i});
      i = j;
      continue;
    }
    if (s.compare(i, 2, "->") == 0) {
      out.push_back({Token::Sym, "->", i});
      i += 2;
      continue;
    }
    if (std::string("()&|.:,<>+").find(static_cast<char>(c)) != std::string::npos) {
      out.push_back({Token::Sym, std::string(1, static_cast<char>(c)), i});
      ++i;
      continue;
    }
    throw SyntaxError(i, std::string("unexpected character '") + static_cast<char>(c) + "'");
  }
  out.push_back({Token::End, "", s.size()});
  return out;
}

bool is_keyword(const std::string& w) {
  return w == "exists" || w == "forall" || w == "false" || w == "true" || w == "len";
}

class Parser {
 public:
  Parser(const std::string& text, const Signature& sig) : toks_(lex(text)), sig_(sig) {}

  Formula parse() {
    Formula f = formula();
    if (peek().kind != Token::End) throw SyntaxError(peek().pos, "unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  bool at_sym(const char* s) const { return peek().kind == Token::Sym && peek().text == s; }
  bool at_word(const char* w) const { return peek().kind == Token::Ident && peek().text == w; }
  void expect(const char* s) {
    if (!at_sym(s)) throw SyntaxError(peek().pos, std::string("expected '") + s + "'" + found());
    ++i_;
  }
  std::string found() const {
    return peek().kind == Token::End ? " at end of input" : " before '" + peek().text + "'";
  }

  Formula formula() {
    if (at_word("exists") || at_word("forall")) return quant();
    return imp();
  }

  Formula quant() {
    const std::size_t pos = peek().pos;
    const bool ex = peek().text == "exists";
    ++i_;
    if (peek().kind != Token::Ident || is_keyword(peek().text))
      throw SyntaxError(peek().pos, "expected a variable name" + found());
    std::string var = peek().text;
    ++i_;
    expect(":");
    Sort s = sort();
    expect(".");
    scope_.push_back({var, s});
    Formula body = formula();
    scope_.pop_back();
    Formula f = ex ? Formula::exists(var, s, std::move(body)) : Formula::forall(var, s, std::move(body));
    f.pos = pos;
    return f;
  }

  Sort sort() {
    const Token& t = peek();
    if (t.kind == Token::Ident) {
      for (Sort s : {Sort::Nat, Sort::FinSeq, Sort::Seq2, Sort::SeqN})
        if (t.text == sort_name(s)) {
          ++i_;
          return s;
        }
    }
    throw SyntaxError(t.pos, "expected a sort (Nat, FinSeq, Seq2, SeqN)" + found());
  }

  Formula imp() {
    Formula a = disj();
    if (!at_sym("->")) return a;
    const std::size_t pos = peek().pos;
    ++i_;
    Formula f = Formula::imp(std::move(a), formula());
    f.pos = pos;
    return f;
  }

  Formula disj() {
    Formula a = conj();
    while (at_sym("|")) {
      const std::size_t pos = peek().pos;
      ++i_;
      a = Formula::disj(std::move(a), conj());
      a.pos = pos;
    }
    return a;
  }

  Formula conj() {
    Formula a = primary();
    while (at_sym("&")) {
      const std::size_t pos = peek().pos;
      ++i_;
      a = Formula::conj(std::move(a), primary());
      a.pos = pos;
    }
    return a;
  }

  Formula primary() {
    const Token& t = peek();
    if (at_sym("(")) {
      ++i_;
      Formula f = formula();
      expect(")");
      return f;
    }
    if (at_word("exists") || at_word("forall")) return quant();
    if (at_word("false")) {
      ++i_;
      Formula f = Formula::bot();
      f.pos = t.pos;
      return f;
    }
    if (at_word("true")) {
      ++i_;
      Formula f = Formula::top();
      f.pos = t.pos;
      return f;
    }
    if (t.kind == Token::Ident && !is_keyword(t.text)) return atom();
    throw SyntaxError(t.pos, "expected a formula" + found());
  }

  Formula atom() {
    const Token name = peek();
    ++i_;
    expect("(");
    std::vector<Term> args;
    if (!at_sym(")")) {
      args.push_back(term());
      while (at_sym(",")) {
        ++i_;
        args.push_back(term());
      }
    }
    expect(")");
    Formula f = Formula::atom(name.text, std::move(args));
    f.pos = name.pos;
    check_atom(f);
    return f;
  }

  Term term() {
    Term t = term_atom();
    while (at_sym("+")) {
      const std::size_t pos = peek().pos;
      ++i_;
      Term r = term_atom();
      if (t.sort != Sort::Nat || r.sort != Sort::Nat)
        throw SortError(pos, "'+' needs Nat operands");
      Term s;
      s.kind = Term::Kind::Add;
      s.sort = Sort::Nat;
      s.pos = pos;
      s.args = {std::move(t), std::move(r)};
      t = std::move(s);
    }
    return t;
  }

  Term term_atom() {
    const Token& tok = peek();
    Term t;
    t.pos = tok.pos;
    if (tok.kind == Token::Number) {
      t.kind = Term::Kind::Num;
      t.num = std::stoi(tok.text);
      ++i_;
      return t;
    }
    if (at_sym("<")) {
      ++i_;
      t.kind = Term::Kind::SeqLit;
      t.sort = Sort::FinSeq;
      if (!at_sym(">")) {
        for (;;) {
          if (peek().kind != Token::Number) throw SyntaxError(peek().pos, "expected a number" + found());
          t.seq.push_back(std::stoi(peek().text));
          ++i_;
          if (!at_sym(",")) break;
          ++i_;
        }
      }
      expect(">");
      return t;
    }
    if (at_sym("(")) {
      ++i_;
      t = term();
      expect(")");
      return t;
    }
    if (at_word("len")) {
      ++i_;
      expect("(");
      Term a = term();
      expect(")");
      if (a.sort != Sort::FinSeq) throw SortError(a.pos, "len needs a FinSeq argument");
      t.kind = Term::Kind::Len;
      t.args = {std::move(a)};
      return t;
    }
    if (tok.kind == Token::Ident && !is_keyword(tok.text)) {
      ++i_;
      t.name = tok.text;
      for (int k = static_cast<int>(scope_.size()) - 1; k >= 0; --k)
        if (scope_[k].first == tok.text) {
          t.kind = Term::Kind::Var;
          t.slot = k;
          t.sort = scope_[k].second;
          return t;
        }
      auto c = sig_.constants.find(tok.text);
      if (c == sig_.constants.end()) throw SortError(tok.pos, "unbound identifier '" + tok.text + "'");
      t.kind = Term::Kind::Const;
      t.sort = c->second;
      return t;
    }
    throw SyntaxError(tok.pos, "expected a term" + found());
  }

  void check_atom(const Formula& f) {
    const auto& a = f.args;
    auto fail = [&](const std::string& why) { throw SortError(f.pos, f.name + ": " + why); };
    auto arity = [&](std::size_t n) {
      if (a.size() != n) fail("expects " + std::to_string(n) + " arguments");
    };
    if (f.name == "Eq") {
      arity(2);
      if (a[0].sort != a[1].sort)
        fail("arguments of sorts " + sort_name(a[0].sort) + " and " + sort_name(a[1].sort));
    } else if (f.name == "Leq") {
      arity(2);
      if (a[0].sort != a[1].sort || is_sequence_sort(a[0].sort))
        fail("needs two Nat or two FinSeq arguments");
    } else if (f.name == "Prefix") {
      arity(2);
      if (a[0].sort == Sort::Nat || a[1].sort != Sort::FinSeq)
        fail("needs a sequence and a FinSeq");
    } else if (f.name == "App") {
      arity(3);
      if (a[0].sort == Sort::Nat || a[1].sort != Sort::Nat || a[2].sort != Sort::Nat)
        fail("needs a sequence and two Nat arguments");
    } else {
      auto r = sig_.relations.find(f.name);
      if (r == sig_.relations.end()) fail("unknown predicate");
      arity(r->second.size());
      for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].sort != r->second[k])
          fail("argument " + std::to_string(k + 1) + " must be " + sort_name(r->second[k]));
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  const Signature& sig_;
  std::vector<std::pair<std::string, Sort>> scope_;
};

}  // namespace

Formula parse_formula(const std::string& text, const Signature& sig) {
  return Parser(text, sig).parse();
}

// ---------------------------------------------------------------------------
// Printer

std::string to_string(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var:
    case Term::Kind::Const: return t.name;
    case Term::Kind::Num: return std::to_string(t.num);
    case Term::Kind::SeqLit: {
      std::string s = "<";
      for (std::size_t i = 0; i < t.seq.size(); ++i) s += (i ? "," : "") + std::to_string(t.seq[i]);
      return s + ">";
    }
    case Term::Kind::Add: return "(" + to_string(t.args[0]) + " + " + to_string(t.args[1]) + ")";
    case Term::Kind::Len: return "len(" + to_string(t.args[0]) + ")";
  }
  return "?";
}

std::string to_string(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Bot: return "false";
    case Formula::Kind::Atom: {
      std::string s = f.name + "(";
      for (std::size_t i = 0; i < f.args.size(); ++i) s += (i ? ", " : "") + to_string(f.args[i]);
      return s + ")";
    }
    case Formula::Kind::And: return "(" + to_string(f.sub[0]) + " & " + to_string(f.sub[1]) + ")";
    case Formula::Kind::Or: return "(" + to_string(f.sub[0]) + " | " + to_string(f.sub[1]) + ")";
    case Formula::Kind::Imp: return "(" + to_string(f.sub[0]) + " -> " + to_string(f.sub[1]) + ")";
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      return std::string("(") + (f.kind == Formula::Kind::Exists ? "exists " : "forall ") + f.name +
             ":" + sort_name(f.sort) + ". " + to_string(f.sub[0]) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Random formulas

namespace {

class Generator {
 public:
  Generator(std::mt19937_64& rng, const Signature& sig, const RandomFormulaOptions& opt)
      : rng_(rng), sig_(sig), opt_(opt) {}

  Formula formula(int depth) {
    if (depth == 0 || pick(4) == 0) return leaf();
    switch (pick(5)) {
      case 0: return Formula::conj(formula(depth - 1), formula(depth - 1));
      case 1: return Formula::disj(formula(depth - 1), formula(depth - 1));
      case 2: return Formula::imp(formula(depth - 1), formula(depth - 1));
      default: {
        const Sort s = opt_.sorts[pick(static_cast<int>(opt_.sorts.size()))];
        std::string var = std::string(1, static_cast<char>('a' + scope_.size() % 26));
        if (scope_.size() >= 26) var += std::to_string(scope_.size() / 26);
        scope_.push_back({var, s});
        Formula body = formula(depth - 1);
        scope_.pop_back();
        return pick(2) ? Formula::exists(var, s, std::move(body))
                       : Formula::forall(var, s, std::move(body));
      }
    }
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::vector<Term> candidates(Sort s) {
    std::vector<Term> out;
    for (int k = 0; k < static_cast<int>(scope_.size()); ++k)
      if (scope_[k].second == s) {
        Term t;
        t.kind = Term::Kind::Var;
        t.sort = s;
        t.name = scope_[k].first;
        t.slot = k;
        out.push_back(t);
      }
    for (const auto& [name, cs] : sig_.constants)
      if (cs == s) {
        Term t;
        t.kind = Term::Kind::Const;
        t.sort = s;
        t.name = name;
        out.push_back(t);
      }
    return out;
  }

  Term literal(Sort s) {
    Term t;
    if (s == Sort::Nat) {
      t.num = pick(opt_.nat_literals);
      return t;
    }
    t.kind = Term::Kind::SeqLit;
    t.sort = Sort::FinSeq;
    const int len = pick(opt_.seq_max_length + 1);
    for (int i = 0; i < len; ++i) t.seq.push_back(pick(opt_.seq_alphabet));
    return t;
  }

  // A term of sort s; literals are used when nothing else is in scope.
  std::optional<Term> term(Sort s) {
    auto c = candidates(s);
    if (is_sequence_sort(s)) {
      if (c.empty()) return std::nullopt;
      return c[pick(static_cast<int>(c.size()))];
    }
    if (c.empty() || pick(3) == 0) {
      if (s == Sort::Nat && pick(4) == 0) {
        auto lists = candidates(Sort::FinSeq);
        if (!lists.empty()) {
          Term t;
          t.kind = Term::Kind::Len;
          t.args = {lists[pick(static_cast<int>(lists.size()))]};
          return t;
        }
      }
      return literal(s);
    }
    Term v = c[pick(static_cast<int>(c.size()))];
    if (s == Sort::Nat && pick(4) == 0) {
      Term t;
      t.kind = Term::Kind::Add;
      t.args = {v, literal(Sort::Nat)};
      return t;
    }
    return v;
  }

  std::optional<Term> sequence_term() {
    std::vector<Term> c;
    for (Sort s : {Sort::Seq2, Sort::SeqN, Sort::FinSeq})
      for (Term& t : candidates(s)) c.push_back(std::move(t));
    if (c.empty()) return std::nullopt;
    return c[pick(static_cast<int>(c.size()))];
  }

  Formula leaf() {
    for (int attempt = 0; attempt < 20; ++attempt) {
      const int choice = pick(8);
      if (choice == 0) return Formula::bot();
      if (choice == 1 || choice == 2) {
        const Sort s = pick(3) ? Sort::Nat : Sort::FinSeq;
        auto a = term(s), b = term(s);
        return Formula::atom(choice == 1 ? "Eq" : "Leq", {*a, *b});
      }
      if (choice == 3) {
        std::vector<Term> seqs;
        for (Sort s : {Sort::Seq2, Sort::SeqN})
          for (Term& t : candidates(s)) seqs.push_back(std::move(t));
        if (seqs.size() < 1) continue;
        Term a = seqs[pick(static_cast<int>(seqs.size()))];
        Term b = seqs[pick(static_cast<int>(seqs.size()))];
        if (a.sort != b.sort) continue;
        return Formula::atom("Eq", {a, b});
      }
      if (choice == 4 || choice == 5) {
        auto a = sequence_term();
        if (!a) continue;
        return Formula::atom("Prefix", {*a, *term(Sort::FinSeq)});
      }
      if (choice == 6) {
        auto a = sequence_term();
        if (!a) continue;
        Term n = literal(Sort::Nat), m = literal(Sort::Nat);
        n.num %= std::max(1, opt_.seq_max_length + 1);
        m.num %= std::max(1, opt_.seq_alphabet);
        return Formula::atom("App", {*a, n, m});
      }
      if (sig_.relations.empty()) continue;
      auto it = sig_.relations.begin();
      std::advance(it, pick(static_cast<int>(sig_.relations.size())));
      std::vector<Term> args;
      bool ok = true;
      for (Sort s : it->second) {
        auto t = term(s);
        if (!t) {
          ok = false;
          break;
        }
        args.push_back(*t);
      }
      if (ok) return Formula::atom(it->first, std::move(args));
    }
    return Formula::bot();
  }

  std::mt19937_64& rng_;
  const Signature& sig_;
  const RandomFormulaOptions& opt_;
  std::vector<std::pair<std::string, Sort>> scope_;
};

}  // namespace

Formula random_formula(std::mt19937_64& rng, const Signature& sig, const RandomFormulaOptions& opt) {
  return Generator(rng, sig, opt).formula(opt.max_depth);
}

}  // namespace ftop
