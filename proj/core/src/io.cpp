#include "pw1d/io.hpp"

#include <cctype>
#include <sstream>

#include "json.hpp"

namespace pw1d {

namespace {

class Cursor {
 public:
  explicit Cursor(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    if (pos_ >= s_.size()) err("unexpected end of input");
    return s_[pos_];
  }
  void expect(char c) {
    if (peek() != c) err(std::string("expected '") + c + "'");
    advance();
  }
  bool accept(char c) {
    if (!done() && peek() == c) {
      advance();
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    std::string out;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      out += s_[pos_];
      advance();
    }
    if (out.empty()) err("expected an identifier");
    return out;
  }
  mpz_class integer() {
    skip_ws();
    std::string digits;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      digits += s_[pos_];
      advance();
    }
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      digits += s_[pos_];
      advance();
    }
    if (digits.empty() || digits == "-" || digits == "+") err("expected an integer");
    return mpz_class(digits);
  }
  [[noreturn]] void err(const std::string& msg) {
    fail(Errc::parse_error,
         "line " + std::to_string(line_) + " col " + std::to_string(col_) + ": " + msg);
  }
  void end() {
    if (!done()) err("trailing input");
  }

 private:
  void advance() {
    if (pos_ < s_.size()) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }
  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

mpq_class rational(Cursor& c) {
  mpz_class num = c.integer();
  if (c.accept('/')) {
    mpz_class den = c.integer();
    if (den == 0) c.err("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  return mpq_class(num);
}

Scalar scalar(Cursor& c, const ParseSession& session) {
  mpq_class a = rational(c);
  if (!c.done() && (c.peek() == '+' || c.peek() == '-')) {
    char op = c.peek();
    c.expect(op);
    mpq_class b = rational(c);
    c.expect('*');
    std::string tok = c.ident();
    if (tok != "rt") c.err("expected 'rt'");
    if (session.surd_base < 2) c.err("'rt' needs a session surd base (--sqrt k)");
    if (op == '-') b = -b;
    return Scalar::from_parts(a, b, session.surd_base);
  }
  return Scalar(a);
}

ProjPoint point(Cursor& c, const ParseSession& session) {
  char ch = c.peek();
  if (std::isalpha(static_cast<unsigned char>(ch))) {
    std::string tok = c.ident();
    if (tok == "inf") return ProjPoint::infinity();
    c.err("expected a scalar or 'inf'");
  }
  return ProjPoint::finite(scalar(c, session));
}

Homography homography_body(Cursor& c, const ParseSession& session) {
  Scalar a = scalar(c, session);
  c.expect(',');
  Scalar b = scalar(c, session);
  c.expect(';');
  Scalar cc = scalar(c, session);
  c.expect(',');
  Scalar d = scalar(c, session);
  return Homography(a, b, cc, d);
}

}  // namespace

Scalar parse_scalar(const std::string& text, const ParseSession& session) {
  Cursor c(text);
  Scalar s = scalar(c, session);
  c.end();
  return s;
}

ProjPoint parse_point(const std::string& text, const ParseSession& session) {
  Cursor c(text);
  ProjPoint p = point(c, session);
  c.end();
  return p;
}

Homography parse_homography(const std::string& text, const ParseSession& session) {
  Cursor c(text);
  c.expect('[');
  Homography h = homography_body(c, session);
  c.expect(']');
  c.end();
  return h;
}

PiecewiseMap parse_map(const std::string& text, const ParseSession& session) {
  Cursor c(text);
  std::string tag = c.ident();
  Model model;
  if (tag == "circ")
    model = Model::circ;
  else if (tag == "proj")
    model = Model::proj;
  else
    c.err("expected 'circ' or 'proj'");
  c.expect('{');
  std::vector<Piece> pieces;
  while (!c.accept('}')) {
    c.expect('[');
    ProjPoint left = point(c, session);
    c.expect(':');
    Homography map;
    if (model == Model::circ) {
      Scalar p = scalar(c, session);
      c.expect(',');
      Scalar q = scalar(c, session);
      map = Homography::affine(p, q);
    } else {
      map = homography_body(c, session);
    }
    c.expect(']');
    pieces.push_back({left, map});
  }
  c.end();
  return PiecewiseMap::make(model, std::move(pieces));
}

std::vector<int> parse_word(const std::string& text, const std::vector<std::string>& generators) {
  Cursor c(text);
  std::vector<int> word;
  while (!c.done()) {
    if (c.accept('*')) continue;
    std::string name = c.ident();
    long exp = 1;
    if (!c.done() && c.peek() == '^') {
      c.expect('^');
      exp = c.integer().get_si();
    }
    int idx = -1;
    for (size_t i = 0; i < generators.size(); ++i)
      if (generators[i] == name) idx = static_cast<int>(i);
    if (idx < 0) fail(Errc::unknown_generator, name);
    int letter = idx + 1;
    for (long k = 0; k < (exp < 0 ? -exp : exp); ++k) word.push_back(exp < 0 ? -letter : letter);
  }
  return word;
}

std::string word_str(const std::vector<int>& word, const std::vector<std::string>& generators) {
  if (word.empty()) return "e";
  std::ostringstream os;
  for (size_t i = 0; i < word.size();) {
    int letter = word[i];
    size_t j = i;
    while (j < word.size() && word[j] == letter) ++j;
    long run = static_cast<long>(j - i);
    long exp = letter > 0 ? run : -run;
    if (i) os << " ";
    os << generators[(letter > 0 ? letter : -letter) - 1];
    if (exp != 1) os << "^" << exp;
    i = j;
  }
  return os.str();
}

PartialSpecFile load_partial_spec_text(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    fail(Errc::parse_error, std::string("spec file: ") + e.what());
  }
  PartialSpecFile out;
  try {
    out.generators = j.at("generators").get<std::vector<std::string>>();
    if (j.contains("sqrt")) out.surd_base = j["sqrt"].get<unsigned long>();
    const auto& carrier = j.at("carrier");
    if (carrier.contains("finite")) {
      out.finite_carrier = true;
      for (const auto& p : carrier["finite"])
        out.finite_points.push_back(p.is_string() ? p.get<std::string>() : p.dump());
      const auto& tables = j.at("tables");
      for (auto it = tables.begin(); it != tables.end(); ++it) {
        std::map<std::string, std::string> t;
        for (auto e = it.value().begin(); e != it.value().end(); ++e)
          t[e.key()] = e.value().is_string() ? e.value().get<std::string>() : e.value().dump();
        out.tables[it.key()] = t;
      }
    } else if (carrier.contains("piecewise")) {
      out.finite_carrier = false;
      out.piecewise_maps = carrier["piecewise"].get<std::vector<std::string>>();
    } else {
      fail(Errc::parse_error, "carrier must be 'finite' or 'piecewise'");
    }
    if (j.contains("relations")) out.relations = j["relations"].get<std::vector<std::string>>();
    if (j.contains("seeds"))
      for (const auto& s : j["seeds"])
        out.seeds.push_back(s.is_string() ? s.get<std::string>() : s.dump());
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(Errc::parse_error, std::string("spec file: ") + e.what());
  }
  return out;
}

}  // namespace pw1d
