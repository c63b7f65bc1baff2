#include "pacqe/parser.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <vector>

namespace pacqe {

namespace {

struct Token {
  std::string text;
  int line;
  int col;
  bool is_paren(char c) const { return text.size() == 1 && text[0] == c; }
};

[[noreturn]] void syntax_error(const Token& at, const std::string& message) {
  std::ostringstream os;
  os << at.line << ":" << at.col << ": " << message;
  fail(ErrorCode::Parse, os.str());
}

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> tokens;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ';') {  // comment to end of line
      while (i < src.size() && src[i] != '\n') advance(src[i++]);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(c);
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      tokens.push_back({std::string(1, c), line, col});
      advance(c);
      ++i;
      continue;
    }
    int tl = line, tc = col;
    std::string word;
    while (i < src.size()) {
      char d = src[i];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' ||
          d == ')' || d == ';')
        break;
      word.push_back(d);
      advance(d);
      ++i;
    }
    tokens.push_back({std::move(word), tl, tc});
  }
  tokens.push_back({"", line, col});  // end marker
  return tokens;
}

const std::set<std::string> kReserved = {
    "not",   "and", "or", "implies", "iff",  "exists", "forall", "lt",
    "le",    "eq",  "ge", "gt",      "mod",  "cong",   "true",   "false"};

bool is_integer_token(const std::string& s) {
  size_t start = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (start >= s.size()) return false;
  for (size_t i = start; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

bool is_variable_token(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])))
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return kReserved.count(s) == 0;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : tokens_(tokenize(src)) {}

  Formula parse_all() {
    Formula f = parse_formula();
    const Token& t = peek();
    if (!t.text.empty()) syntax_error(t, "trailing input after formula");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  void expect(char c) {
    const Token& t = next();
    if (!t.is_paren(c))
      syntax_error(t, std::string("expected '") + c + "', found '" + t.text +
                          "'");
  }

  Int parse_int() {
    const Token& t = next();
    if (!is_integer_token(t.text)) syntax_error(t, "expected an integer");
    // mpz does not accept a leading '+'
    return Int(t.text[0] == '+' ? t.text.substr(1) : t.text);
  }

  std::string parse_var() {
    const Token& t = next();
    if (t.text.size() > 0 && t.text[0] == '$')
      syntax_error(t, "variable names may not start with the reserved '$'");
    if (!is_variable_token(t.text))
      syntax_error(t, "expected a variable, found '" + t.text + "'");
    return t.text;
  }

  LinearTerm parse_term() {
    const Token& t = peek();
    if (t.is_paren('(')) {
      next();
      const Token& head = next();
      LinearTerm result;
      if (head.text == "+") {
        result = parse_term();
        while (!peek().is_paren(')')) result = result + parse_term();
      } else if (head.text == "-") {
        LinearTerm a = parse_term();
        LinearTerm b = parse_term();
        result = a - b;
      } else if (head.text == "*") {
        Int c = parse_int();
        LinearTerm a = parse_term();
        result = a.scaled(c);
      } else {
        syntax_error(head, "expected a term operator (+, -, *), found '" +
                               head.text + "'");
      }
      expect(')');
      return result;
    }
    if (is_integer_token(t.text)) return LinearTerm::constant(parse_int());
    return LinearTerm::variable(parse_var());
  }

  Formula parse_formula() {
    const Token& t = peek();
    if (t.text == "true") {
      next();
      return Formula::boolean(true);
    }
    if (t.text == "false") {
      next();
      return Formula::boolean(false);
    }
    if (!t.is_paren('('))
      syntax_error(t, "expected a formula, found '" + t.text + "'");
    next();
    const Token& head = next();
    Formula result = parse_head(head);
    expect(')');
    return result;
  }

  Formula parse_head(const Token& head) {
    const std::string& op = head.text;
    if (op == "not") return Formula::negation(parse_formula());
    if (op == "and" || op == "or") {
      std::vector<Formula> children;
      children.push_back(parse_formula());
      while (!peek().is_paren(')')) children.push_back(parse_formula());
      return op == "and" ? Formula::conjunction(std::move(children))
                         : Formula::disjunction(std::move(children));
    }
    if (op == "implies") {
      Formula a = parse_formula();
      Formula b = parse_formula();
      return Formula::implies(std::move(a), std::move(b));
    }
    if (op == "iff") {
      Formula a = parse_formula();
      Formula b = parse_formula();
      return Formula::iff(std::move(a), std::move(b));
    }
    if (op == "exists" || op == "forall") {
      expect('(');
      std::string y = parse_var();
      expect(')');
      Formula body = parse_formula();
      return op == "exists" ? Formula::exists(y, std::move(body))
                            : Formula::forall(y, std::move(body));
    }
    if (op == "count-geq" || op == "count-eq") {
      std::string x = parse_var();
      std::string y = parse_var();
      if (x == y)
        syntax_error(head, "counting binder variables must differ, got '" + x +
                               "' twice");
      Formula body = parse_formula();
      return op == "count-geq" ? Formula::count_geq(x, y, std::move(body))
                               : Formula::count_eq(x, y, std::move(body));
    }
    if (op == "count-geq-const") {
      Int c = parse_int();
      std::string y = parse_var();
      Formula body = parse_formula();
      return Formula::count_geq_const(std::move(c), y, std::move(body));
    }
    if (op == "count-mod") {
      std::string x = parse_var();
      Int q = parse_int();
      if (sign(q) <= 0) syntax_error(head, "counting modulus must be >= 1");
      std::string y = parse_var();
      if (x == y)
        syntax_error(head, "counting binder variables must differ, got '" + x +
                               "' twice");
      Formula body = parse_formula();
      return Formula::count_mod(x, std::move(q), y, std::move(body));
    }
    if (op == "lt" || op == "le" || op == "eq" || op == "ge" || op == "gt") {
      LinearTerm a = parse_term();
      LinearTerm b = parse_term();
      if (op == "lt") return Formula::lt(a, b);
      if (op == "le") return Formula::le(a, b);
      if (op == "eq") return Formula::eq(a, b);
      if (op == "ge") return Formula::ge(a, b);
      return Formula::gt(a, b);
    }
    if (op == "mod") {
      LinearTerm a = parse_term();
      Int q = parse_int();
      Int r = parse_int();
      if (sign(q) <= 0) syntax_error(head, "modulus must be >= 1");
      if (sign(r) < 0 || r >= q)
        syntax_error(head, "residue must lie in [0, modulus)");
      return Formula::mod(std::move(a), std::move(q), std::move(r));
    }
    if (op == "cong") {
      LinearTerm a = parse_term();
      LinearTerm b = parse_term();
      Int q = parse_int();
      if (sign(q) <= 0) syntax_error(head, "modulus must be >= 1");
      return Formula::cong(a, b, std::move(q));
    }
    syntax_error(head, "unknown operator '" + op + "'");
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

void render_rec(const Formula& f, std::ostream& os);

}  // namespace

Formula parse(const std::string& source) { return Parser(source).parse_all(); }

std::string render_term(const LinearTerm& t) {
  std::vector<std::string> pieces;
  for (const auto& [v, c] : t.coeffs()) {
    if (c == 1)
      pieces.push_back(v);
    else
      pieces.push_back("(* " + to_string(c) + " " + v + ")");
  }
  if (sign(t.constant_part()) != 0 || pieces.empty())
    pieces.push_back(to_string(t.constant_part()));
  if (pieces.size() == 1) return pieces.front();
  std::string out = "(+";
  for (const std::string& p : pieces) out += " " + p;
  return out + ")";
}

namespace {

void render_rec(const Formula& f, std::ostream& os) {
  switch (f.kind()) {
    case Kind::True:
      os << "true";
      return;
    case Kind::False:
      os << "false";
      return;
    case Kind::Lt:
      os << "(lt " << render_term(f.term()) << " 0)";
      return;
    case Kind::Mod:
      os << "(mod " << render_term(f.term()) << " " << to_string(f.modulus())
         << " " << to_string(f.residue()) << ")";
      return;
    case Kind::Not:
      os << "(not ";
      render_rec(f.child(), os);
      os << ")";
      return;
    case Kind::And:
    case Kind::Or:
      os << (f.kind() == Kind::And ? "(and" : "(or");
      for (const Formula& c : f.children()) {
        os << " ";
        render_rec(c, os);
      }
      os << ")";
      return;
    case Kind::Exists:
    case Kind::ForAll:
      os << (f.kind() == Kind::Exists ? "(exists (" : "(forall (")
         << f.var_y() << ") ";
      render_rec(f.child(), os);
      os << ")";
      return;
    case Kind::CountGeqVar:
    case Kind::CountEqVar:
      os << (f.kind() == Kind::CountGeqVar ? "(count-geq " : "(count-eq ")
         << f.var_x() << " " << f.var_y() << " ";
      render_rec(f.child(), os);
      os << ")";
      return;
    case Kind::CountGeqConst:
      os << "(count-geq-const " << to_string(f.threshold()) << " "
         << f.var_y() << " ";
      render_rec(f.child(), os);
      os << ")";
      return;
    case Kind::CountMod:
      os << "(count-mod " << f.var_x() << " " << to_string(f.count_modulus())
         << " " << f.var_y() << " ";
      render_rec(f.child(), os);
      os << ")";
      return;
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::ostringstream os;
  render_rec(f, os);
  return os.str();
}

}  // namespace pacqe
