#include "holoflow/parser.hpp"

#include "holoflow/dim2.hpp"
#include "holoflow/flow.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace holoflow {

ParseError::ParseError(const std::string& what, int column)
    : Error(fmt::format("column {}: {}", column, what)), column_(column) {}

namespace {

/// Untyped parse tree; converted to a HoloMap once the arity is known.
struct Expr {
  enum Kind { Num, Var, Neg, Exp, Pow, Add, Sub, Mul, Div } kind = Num;
  Complex value{};
  int index = 0;  // Var: 0-based variable; Pow: exponent
  std::unique_ptr<Expr> lhs, rhs;
};
using ExprPtr = std::unique_ptr<Expr>;

ExprPtr node(Expr::Kind k, ExprPtr l = nullptr, ExprPtr r = nullptr) {
  auto e = std::make_unique<Expr>();
  e->kind = k;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text, int offset = 0) : text_(text), offset_(offset) {}

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip();
    return pos_ >= text_.size();
  }
  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(fmt::format("expected '{}'", c));
  }
  int column() const { return offset_ + static_cast<int>(pos_) + 1; }
  std::string_view text() const { return text_; }
  /// True when the character right after the cursor is exactly 'i' ending a token.
  bool imaginary_suffix() const {
    if (pos_ >= text_.size() || text_[pos_] != 'i') return false;
    const std::size_t next = pos_ + 1;
    return next >= text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[next])) || text_[next] == '_');
  }
  [[noreturn]] void fail(const std::string& what) const {
    if (pos_ >= text_.size()) throw ParseError(what + " at end of input", column());
    throw ParseError(fmt::format("{} near '{}'", what, text_.substr(pos_, 8)), column());
  }

  std::string identifier() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    skip();
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  /// Text of a balanced argument list entry, up to the next top-level ',' or ')'.
  std::pair<std::string_view, int> raw_argument() {
    skip();
    const std::size_t start = pos_;
    int depth = 0;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(') ++depth;
      if (c == ')' || c == ',') {
        if (depth == 0) break;
        if (c == ')') --depth;
      }
      ++pos_;
    }
    if (pos_ >= text_.size()) fail("unterminated argument list");
    return {text_.substr(start, pos_ - start), offset_ + static_cast<int>(start)};
  }

  void advance() { ++pos_; }

 private:
  std::size_t pos_ = 0;
  std::string_view text_;
  int offset_;
};

class ExprParser {
 public:
  explicit ExprParser(Lexer& lex) : lex_(lex) {}

  ExprPtr parse() {
    ExprPtr e = sum();
    if (!lex_.done()) lex_.fail("unexpected input");
    return e;
  }

  int max_index() const { return max_index_; }

 private:
  ExprPtr sum() {
    ExprPtr e = product();
    for (;;) {
      if (lex_.accept('+')) e = node(Expr::Add, std::move(e), product());
      else if (lex_.accept('-')) e = node(Expr::Sub, std::move(e), product());
      else return e;
    }
  }

  ExprPtr product() {
    ExprPtr e = unary();
    for (;;) {
      if (lex_.accept('*')) e = node(Expr::Mul, std::move(e), unary());
      else if (lex_.accept('/')) e = node(Expr::Div, std::move(e), unary());
      else return e;
    }
  }

  ExprPtr unary() {
    if (lex_.accept('-')) return node(Expr::Neg, unary());
    if (lex_.accept('+')) return unary();
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (!lex_.accept('^')) return base;
    int sign = 1;
    if (lex_.accept('-')) sign = -1;
    const int col = lex_.column();
    const double k = lex_.number();
    if (k != std::floor(k) || std::abs(k) > 64) throw ParseError("exponent must be an integer with |k| <= 64", col);
    ExprPtr e = node(Expr::Pow, std::move(base));
    e->index = sign * static_cast<int>(k);
    return e;
  }

  ExprPtr atom() {
    const char c = lex_.peek();
    if (c == '(') {
      lex_.expect('(');
      ExprPtr e = sum();
      lex_.expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const double v = lex_.number();
      auto e = node(Expr::Num);
      e->value = v;
      // A literal followed directly by 'i' is imaginary: 3i, 2.5e-1i.
      if (lex_.imaginary_suffix()) {
        lex_.advance();
        e->value = Complex(0.0, v);
      }
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const int col = lex_.column();
      const std::string id = lex_.identifier();
      if (id == "i") {
        auto e = node(Expr::Num);
        e->value = kI;
        return e;
      }
      if (id == "pi") {
        auto e = node(Expr::Num);
        e->value = std::numbers::pi;
        return e;
      }
      if (id == "exp") {
        lex_.expect('(');
        ExprPtr arg = sum();
        lex_.expect(')');
        return node(Expr::Exp, std::move(arg));
      }
      int index = -1;
      if (id == "z") index = 0;
      else if (id == "w") index = 1;
      else if (id.size() >= 2 && id[0] == 'z' && std::all_of(id.begin() + 1, id.end(), ::isdigit)) index = std::stoi(id.substr(1)) - 1;
      if (index < 0 || index >= kMaxArity) throw ParseError(fmt::format("unknown identifier '{}'", id), col);
      auto e = node(Expr::Var);
      e->index = index;
      max_index_ = std::max(max_index_, index);
      return e;
    }
    lex_.fail("expected a number, variable or '('");
  }

 private:
  Lexer& lex_;
  int max_index_ = -1;
};

HoloMap build(const Expr& e, int n, Domain source) {
  switch (e.kind) {
    case Expr::Num: return constant(e.value, n, source);
    case Expr::Var: return coordinate(e.index, n, source).with_target(Domain::Plane);
    case Expr::Neg: return -build(*e.lhs, n, source);
    case Expr::Exp: return exp(build(*e.lhs, n, source));
    case Expr::Pow: return pow(build(*e.lhs, n, source), e.index);
    case Expr::Add: return build(*e.lhs, n, source) + build(*e.rhs, n, source);
    case Expr::Sub: return build(*e.lhs, n, source) - build(*e.rhs, n, source);
    case Expr::Mul: return build(*e.lhs, n, source) * build(*e.rhs, n, source);
    case Expr::Div: return build(*e.lhs, n, source) / build(*e.rhs, n, source);
  }
  throw Error("unreachable");
}

HoloMap parse_at(std::string_view text, int offset, Domain source, int min_arity) {
  Lexer lex(text, offset);
  ExprParser p(lex);
  if (lex.done()) throw ParseError("empty expression", offset + 1);
  ExprPtr e = p.parse();
  const int n = std::max(min_arity, p.max_index() + 1);
  return build(*e, n, source);
}

/// Evaluates a constant expression (no variables).
double real_constant(std::string_view text, int offset) {
  Lexer lex(text, offset);
  ExprParser p(lex);
  if (lex.done()) throw ParseError("expected a numeric argument", offset + 1);
  ExprPtr e = p.parse();
  if (p.max_index() >= 0) throw ParseError("numeric argument must not contain variables", offset + 1);
  const Complex v = eval_raw(build(*e, 1, Domain::Plane), CVector::Zero(1));
  if (v.imag() != 0.0) throw ParseError("numeric argument must be real", offset + 1);
  return v.real();
}

bool is_inf(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s == "inf" || s == "infinity";
}

Family parse_family_at(std::string_view text, int offset);

Family from_map(std::string_view text, HoloMap m) {
  Family f;
  f.text = std::string(text);
  f.map = std::move(m);
  return f;
}

Family parse_family_at(std::string_view text, int offset) {
  Lexer lex(text, offset);
  if (lex.done()) throw ParseError("empty family text", offset + 1);
  const int name_col = lex.column();
  const std::string name = lex.identifier();
  if (name.empty()) lex.fail("expected a family name");

  std::vector<std::pair<std::string_view, int>> args;
  if (lex.accept('(')) {
    if (!lex.accept(')')) {
      do {
        args.push_back(lex.raw_argument());
      } while (lex.accept(','));
      lex.expect(')');
    }
  }
  if (!lex.done()) lex.fail("unexpected input after family");

  auto arity_check = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw ParseError(fmt::format("'{}' takes {} to {} arguments, got {}", name, lo, hi, args.size()), name_col);
  };
  auto num = [&](std::size_t k) { return real_constant(args[k].first, args[k].second); };
  auto integer = [&](std::size_t k) {
    const double v = num(k);
    if (v != std::floor(v)) throw ParseError("expected an integer", args[k].second + 1);
    return static_cast<int>(v);
  };

  try {
    if (name == "mean") {
      arity_check(0, 1);
      return from_map(text, mean_map(args.empty() ? 2 : integer(0)));
    }
    if (name == "linear") {
      arity_check(1, kMaxArity);
      RVector alpha(static_cast<Eigen::Index>(args.size()));
      for (std::size_t k = 0; k < args.size(); ++k) alpha[static_cast<Eigen::Index>(k)] = num(k);
      return from_map(text, linear_map(alpha));
    }
    if (name == "proj") {
      arity_check(1, 2);
      return from_map(text, projection(integer(0) - 1, args.size() > 1 ? integer(1) : 2));
    }
    if (name == "h_r") {
      arity_check(1, 1);
      return from_map(text, h_r(is_inf(args[0].first) ? Extended::infinity() : Extended(num(0))));
    }
    if (name == "g_nu") {
      arity_check(1, 1);
      return from_map(text, g_nu(num(0)));
    }
    if (name == "am") {
      arity_check(1, 1);
      const HoloMap theta = parse_at(args[0].first, args[0].second, Domain::Disk, 2);
      if (theta.arity() != 2) throw ParseError("Theta must be a function of z, w", args[0].second + 1);
      return from_map(text, am_map(SchurParam::theta(theta)));
    }
    if (name == "be") {
      arity_check(1, 1);
      if (is_inf(args[0].first)) return from_map(text, be_map(SchurParam::phi_infinity()));
      const HoloMap phi = parse_at(args[0].first, args[0].second, Domain::HalfPlane, 2);
      if (phi.arity() != 2) throw ParseError("Phi must be a function of z, w", args[0].second + 1);
      return from_map(text, be_map(SchurParam::phi(phi)));
    }
    if (name == "blend") {
      arity_check(1, 1);
      return from_map(text, example13(num(0)));
    }
    if (name == "translate") {
      arity_check(2, 2);
      const Family inner = parse_family_at(args[0].first, args[0].second);
      if (inner.entire) return [&] {
        Family f;
        f.text = std::string(text);
        f.entire = translate_prime(*inner.entire, num(1));
        return f;
      }();
      return from_map(text, translate(half_plane_model(*inner.map), num(1)));
    }
    if (name == "average") {
      arity_check(2, 3);
      const Family inner = parse_family_at(args[0].first, args[0].second);
      if (!inner.map) throw ParseError("average needs a holomorphic family", args[0].second + 1);
      const int nodes = args.size() > 2 ? integer(2) : kDefaultAverageNodes;
      return from_map(text, average(half_plane_model(*inner.map), num(1), nodes));
    }
    if (name == "periodic") {
      arity_check(1, 2);
      const int k = integer(0);
      const int n = args.size() > 1 ? integer(1) : 2;
      Family f;
      f.text = std::string(text);
      f.phi = exp((2.0 * std::numbers::pi * kI / static_cast<double>(k)) * EntireMap::coordinate(0, n));
      f.entire = periodic_point(k, n);
      return f;
    }
    if (name == "entire") {
      arity_check(1, 1);
      Family f;
      f.text = std::string(text);
      f.phi = EntireMap(parse_at(args[0].first, args[0].second, Domain::Plane, 2));
      f.entire = build_F(*f.phi);
      return f;
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(fmt::format("{}: {}", name, e.what()), name_col);
  }
  throw ParseError(fmt::format("unknown family '{}'", name), name_col);
}

}  // namespace

HoloMap parse_expression(std::string_view text, Domain source, int min_arity) {
  return parse_at(text, 0, source, min_arity);
}

Family parse_family(std::string_view text) { return parse_family_at(text, 0); }

}  // namespace holoflow
