// pw1d: exact piecewise homographic and affine circle maps, partial-action
// globalization experiments, and regularization of finite piecewise groups.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pw1d/io.hpp"
#include "pw1d/partial.hpp"
#include "pw1d/regularize.hpp"

using namespace pw1d;
using nlohmann::ordered_json;

namespace {

constexpr const char* kHeader = "pw1d-format 1";

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kResource = 3 };

int code_for(const Error& e) {
  switch (e.code()) {
    case Errc::parse_error:
    case Errc::unknown_generator:
      return kUsage;
    case Errc::too_large:
    case Errc::ball_too_small:
    case Errc::not_closed:
      return kResource;
    default:
      return kValidation;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<PiecewiseMap> load_gens(const std::string& path, const ParseSession& session) {
  std::istringstream in(slurp(path));
  std::vector<PiecewiseMap> out;
  std::string line;
  while (std::getline(in, line)) {
    size_t h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    out.push_back(parse_map(line, session));
  }
  if (out.empty()) fail(Errc::parse_error, "no maps in '" + path + "'");
  return out;
}

struct GlobSetup {
  std::unique_ptr<PartialAction> action;  // owns the ball's action
  GlobalizationBall ball;
  std::vector<std::string> relations;
};

GlobSetup load_ball(const std::string& path, int radius) {
  PartialSpecFile spec = load_partial_spec_text(slurp(path));
  auto action = std::make_unique<PartialAction>(PartialAction::from_spec(spec));
  ParseSession session{spec.surd_base};
  std::vector<PointId> seeds;
  if (spec.seeds.empty()) {
    seeds = action->default_seeds();
  } else {
    for (const auto& s : spec.seeds) seeds.push_back(action->point_by_name(s, session));
  }
  GlobalizationBall ball = globalize_ball(*action, seeds, radius);
  return {std::move(action), std::move(ball), spec.relations};
}

std::string letter_name(const GlobalizationBall& ball, int li) {
  int letter = GlobalizationBall::index_letter(li);
  std::string n = ball.action().generators()[(letter > 0 ? letter : -letter) - 1];
  return letter > 0 ? n : n + "^-1";
}

std::string class_word(const GlobalizationBall& ball, int c) {
  return word_str(ball.classes()[c].word, ball.action().generators());
}

void print_ball_text(std::ostream& os, const GlobalizationBall& ball) {
  os << "ball: radius " << ball.radius() << ", classes " << ball.classes().size()
     << ", boundary " << ball.boundary().size() << ", closed "
     << (ball.closed() ? "true" : "false") << "\n";
  for (size_t c = 0; c < ball.classes().size(); ++c) {
    const BallClass& bc = ball.classes()[c];
    os << "class " << c << ": word " << class_word(ball, static_cast<int>(c)) << " point "
       << ball.action().point_name(bc.point) << " depth " << bc.depth
       << (bc.depth == ball.radius() ? " boundary" : "") << "\n";
  }
  for (size_t c = 0; c < ball.classes().size(); ++c)
    for (int li = 0; li < ball.letter_count(); ++li) {
      int t = ball.edge(static_cast<int>(c), li);
      if (t >= 0) os << "edge " << c << " " << letter_name(ball, li) << " " << t << "\n";
    }
}

void print_ball_json(std::ostream& os, const GlobalizationBall& ball) {
  ordered_json j;
  j["radius"] = ball.radius();
  j["closed"] = ball.closed();
  j["classes"] = ordered_json::array();
  for (size_t c = 0; c < ball.classes().size(); ++c) {
    const BallClass& bc = ball.classes()[c];
    j["classes"].push_back({{"id", c},
                            {"word", class_word(ball, static_cast<int>(c))},
                            {"point", ball.action().point_name(bc.point)},
                            {"depth", bc.depth},
                            {"boundary", bc.depth == ball.radius()}});
  }
  j["edges"] = ordered_json::array();
  for (size_t c = 0; c < ball.classes().size(); ++c)
    for (int li = 0; li < ball.letter_count(); ++li) {
      int t = ball.edge(static_cast<int>(c), li);
      if (t >= 0)
        j["edges"].push_back({{"from", c}, {"letter", letter_name(ball, li)}, {"to", t}});
    }
  os << j.dump(2) << "\n";
}

void print_ball_dot(std::ostream& os, const GlobalizationBall& ball) {
  os << "digraph ball {\n  node [shape=circle];\n";
  for (size_t c = 0; c < ball.classes().size(); ++c) {
    const BallClass& bc = ball.classes()[c];
    os << "  c" << c << " [label=\"" << class_word(ball, static_cast<int>(c)) << "|"
       << ball.action().point_name(bc.point) << "\"";
    if (bc.word.empty()) os << ", peripheries=2";
    if (bc.depth == ball.radius()) os << ", style=dashed";
    os << "];\n";
  }
  for (size_t c = 0; c < ball.classes().size(); ++c)
    for (int li = 0; li < ball.letter_count(); li += 2) {  // positive letters only
      int t = ball.edge(static_cast<int>(c), li);
      if (t >= 0)
        os << "  c" << c << " -> c" << t << " [label=\"" << letter_name(ball, li) << "\"];\n";
    }
  os << "}\n";
}

void print_manifold_dot(std::ostream& os, const ChartedManifold& M) {
  os << "graph manifold {\n  node [shape=box];\n";
  for (size_t i = 0; i < M.arcs().size(); ++i)
    os << "  a" << i << " [label=\"(" << M.arcs()[i].lo.str() << ", " << M.arcs()[i].hi.str()
       << ")\"];\n";
  for (const auto& g : M.gluings())
    os << "  a" << g.end_a / 2 << " -- a" << g.end_b / 2 << " [label=\""
       << g.transition.str() << "\"];\n";
  os << "}\n";
}

std::vector<int> parse_x_list(const GlobalizationBall& ball, const std::string& xlist) {
  if (xlist.empty()) return ball.seed_classes();
  std::vector<int> out;
  std::stringstream ss(xlist);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    PointId p = ball.action().point_by_name(tok, ParseSession{});
    bool found = false;
    for (int c : ball.seed_classes())
      if (ball.classes()[c].point == p) {
        out.push_back(c);
        found = true;
      }
    if (!found) fail(Errc::bad_input, "point '" + tok + "' is not a seed");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact piecewise circle maps, partial actions, regularization"};
  app.require_subcommand(1);

  unsigned long sqrt_base = 0;
  app.add_option("--sqrt", sqrt_base, "squarefree base k: scalars live in Q(sqrt k)");

  std::string format = "text";

  auto* pw = app.add_subcommand("pw", "piecewise map operations");
  pw->require_subcommand(1);
  std::vector<std::string> pw_maps;
  unsigned long pw_bound = 64;
  auto add_pw = [&](const char* name, const char* desc, int nmaps) {
    auto* sub = pw->add_subcommand(name, desc);
    sub->add_option("maps", pw_maps, "map strings")->expected(nmaps);
    sub->add_option("--format", format, "text|json")->capture_default_str();
    return sub;
  };
  auto* pw_canon = add_pw("canon", "canonical form", 1);
  auto* pw_compose = add_pw("compose", "compose two maps (left after right)", 2);
  auto* pw_inverse = add_pw("inverse", "inverse map", 1);
  auto* pw_classify = add_pw("classify", "predicate bundle", 1);
  auto* pw_order = add_pw("order", "least n with f^n = id, up to the bound", 1);
  pw_order->add_option("--bound", pw_bound, "order search bound")->capture_default_str();
  auto* pw_convert = add_pw("convert", "switch between circ and proj models", 1);

  auto* glob = app.add_subcommand("glob", "partial actions and globalization");
  glob->require_subcommand(1);
  std::string spec_path, xlist;
  int radius = 4, collar = 2, trim_bound = 3, word_len = 3, samples = 64;
  auto add_glob = [&](const char* name, const char* desc) {
    auto* sub = glob->add_subcommand(name, desc);
    sub->add_option("spec", spec_path, "spec file (JSON)")->required();
    sub->add_option("--radius", radius, "ball radius")->capture_default_str();
    sub->add_option("--format", format, "text|json|dot")->capture_default_str();
    return sub;
  };
  auto* glob_ball = add_glob("ball", "globalization ball");
  auto* glob_comm = add_glob("commensurated", "X symmetric-difference sX per generator");
  glob_comm->add_option("--x", xlist, "comma list of carrier points (default: all seeds)");
  auto* glob_trim = add_glob("trim", "remove finite orbits meeting the defect");
  glob_trim->add_option("--x", xlist, "comma list of carrier points (default: all seeds)");
  glob_trim->add_option("--bound", trim_bound, "subset size bound")->capture_default_str();
  auto* glob_ends = add_glob("ends", "ends lower bound from collar components");
  glob_ends->add_option("--collar", collar, "collar width")->capture_default_str();
  auto* glob_verify = add_glob("verify", "check partial-action axioms and relations");
  glob_verify->add_option("--len", word_len, "word length bound")->capture_default_str();
  glob_verify->add_option("--samples", samples, "sample bound")->capture_default_str();

  auto* reg = app.add_subcommand("reg", "regularization of finite piecewise groups");
  reg->require_subcommand(1);
  std::string gens_path;
  unsigned long group_bound = 64;
  auto add_reg = [&](const char* name, const char* desc) {
    auto* sub = reg->add_subcommand(name, desc);
    sub->add_option("gens", gens_path, "generator file: one map per line")->required();
    sub->add_option("--bound", group_bound, "group size bound")->capture_default_str();
    sub->add_option("--format", format, "text|json|dot")->capture_default_str();
    return sub;
  };
  auto* reg_build = add_reg("build", "cut-and-glue manifold");
  auto* reg_classify = add_reg("classify", "classify the glued components");
  auto* reg_conjugate = add_reg("conjugate", "piecewise conjugator into R/Z or P^1");
  auto* reg_verify = add_reg("verify", "conjugate and check every element is global");

  CLI11_PARSE(app, argc, argv);
  ParseSession session{sqrt_base};
  std::ostream& os = std::cout;

  try {
    if (format != "text" && format != "json" && format != "dot")
      fail(Errc::parse_error, "unknown format '" + format + "'");
    os << kHeader << "\n";

    if (pw_canon->parsed() || pw_compose->parsed() || pw_inverse->parsed() ||
        pw_convert->parsed()) {
      PiecewiseMap f = parse_map(pw_maps[0], session);
      PiecewiseMap out = f;
      if (pw_compose->parsed()) out = f.compose(parse_map(pw_maps[1], session));
      if (pw_inverse->parsed()) out = f.inverse();
      if (pw_convert->parsed()) out = f.convert_model();
      if (format == "json")
        os << ordered_json{{"map", out.str()}}.dump(2) << "\n";
      else
        os << out.str() << "\n";
    } else if (pw_classify->parsed()) {
      PiecewiseMap f = parse_map(pw_maps[0], session);
      if (format == "json") {
        ordered_json j{{"map", f.str()},
                       {"global", f.is_global()},
                       {"continuous", f.is_continuous()},
                       {"c1", f.is_C1()},
                       {"piecewise-affine", f.is_piecewise_affine()},
                       {"iet", f.is_IET()}};
        os << j.dump(2) << "\n";
      } else {
        os << "map: " << f.str() << "\n";
        os << "global: " << (f.is_global() ? "true" : "false") << "\n";
        os << "continuous: " << (f.is_continuous() ? "true" : "false") << "\n";
        os << "c1: " << (f.is_C1() ? "true" : "false") << "\n";
        os << "piecewise-affine: " << (f.is_piecewise_affine() ? "true" : "false") << "\n";
        os << "iet: " << (f.is_IET() ? "true" : "false") << "\n";
      }
    } else if (pw_order->parsed()) {
      PiecewiseMap f = parse_map(pw_maps[0], session);
      auto ord = f.order_of(pw_bound);
      if (format == "json") {
        ordered_json j;
        j["known"] = ord.known;
        if (ord.known)
          j["order"] = ord.value;
        else
          j["bound"] = ord.bound;
        os << j.dump(2) << "\n";
      } else if (ord.known) {
        os << "order: " << ord.value << "\n";
      } else {
        os << "order: unknown (bound " << ord.bound << ")\n";
      }
    } else if (glob_ball->parsed()) {
      GlobSetup s = load_ball(spec_path, radius);
      if (format == "json")
        print_ball_json(os, s.ball);
      else if (format == "dot")
        print_ball_dot(os, s.ball);
      else
        print_ball_text(os, s.ball);
    } else if (glob_comm->parsed()) {
      GlobSetup s = load_ball(spec_path, radius);
      std::vector<int> X = parse_x_list(s.ball, xlist);
      CommensuratedResult r = commensurated_check(s.ball, X, false);
      if (format == "json") {
        ordered_json j;
        j["subset-size"] = X.size();
        j["generators"] = ordered_json::array();
        for (const auto& pg : r.per_generator) {
          ordered_json e{{"generator", pg.generator},
                         {"difference-size", pg.difference.size()},
                         {"stale", pg.stale}};
          e["difference"] = ordered_json::array();
          for (int c : pg.difference)
            e["difference"].push_back(class_word(s.ball, c) + "|" +
                                      s.ball.action().point_name(s.ball.classes()[c].point));
          j["generators"].push_back(e);
        }
        os << j.dump(2) << "\n";
      } else {
        os << "subset: " << X.size() << " classes\n";
        for (const auto& pg : r.per_generator) {
          os << "generator " << pg.generator << ": difference size " << pg.difference.size()
             << ", stale " << (pg.stale ? "true" : "false") << ", classes";
          for (int c : pg.difference)
            os << " " << class_word(s.ball, c) << "|"
               << s.ball.action().point_name(s.ball.classes()[c].point);
          os << "\n";
        }
        os << "commensuration certified for the generators: "
           << (r.all_finite_certified ? "true" : "false") << "\n";
      }
    } else if (glob_trim->parsed()) {
      GlobSetup s = load_ball(spec_path, radius);
      std::vector<int> X = parse_x_list(s.ball, xlist);
      NeumannReport r = neumann_trim(s.ball, X, trim_bound);
      auto names = [&](const std::vector<int>& cs) {
        std::string out;
        for (int c : cs)
          out += (out.empty() ? "" : " ") + class_word(s.ball, c) + "|" +
                 s.ball.action().point_name(s.ball.classes()[c].point);
        return out;
      };
      if (format == "json") {
        ordered_json j{{"removed", names(r.removed)},
                       {"kept", names(r.kept)},
                       {"checks", r.checks.size()},
                       {"unwitnessed", r.unwitnessed.size()}};
        os << j.dump(2) << "\n";
      } else {
        os << "removed: " << names(r.removed) << "\n";
        os << "kept: " << names(r.kept) << "\n";
        os << "checks: " << r.checks.size() << ", unwitnessed: " << r.unwitnessed.size()
           << "\n";
        for (const auto& c : r.checks)
          os << "subset {" << names(c.subset) << "}: witness "
             << word_str(c.witness, s.action->generators()) << "\n";
      }
    } else if (glob_ends->parsed()) {
      GlobSetup s = load_ball(spec_path, radius);
      EndsReport r = ends_estimate(s.ball, collar);
      if (format == "json") {
        ordered_json j{{"estimate", r.value}, {"stable-from", r.stable_from}};
        j["per-radius"] = ordered_json::array();
        for (auto& [rho, v] : r.per_radius)
          j["per-radius"].push_back({{"radius", rho}, {"components", v}});
        os << j.dump(2) << "\n";
      } else {
        os << "ends estimate (lower bound): " << r.value << "\n";
        os << "stable from radius: " << r.stable_from << "\n";
        for (auto& [rho, v] : r.per_radius) os << "radius " << rho << ": " << v << "\n";
      }
    } else if (glob_verify->parsed()) {
      GlobSetup s = load_ball(spec_path, radius);
      std::vector<Word> rels;
      for (const auto& rs : s.relations) rels.push_back(parse_word(rs, s.action->generators()));
      AxiomReport r = verify_axioms(*s.action, word_len, samples, rels);
      if (format == "json") {
        ordered_json j{{"pass", r.pass}, {"words", r.words_checked}, {"samples", r.sample_count}};
        j["violations"] = ordered_json::array();
        for (const auto& v : r.violations) j["violations"].push_back(v.kind + ": " + v.detail);
        os << j.dump(2) << "\n";
      } else {
        os << "axioms: " << (r.pass ? "pass" : "fail") << " (words " << r.words_checked
           << ", samples " << r.sample_count << ")\n";
        for (const auto& v : r.violations)
          os << "violation " << v.kind << ": " << v.detail << "\n";
      }
      if (!r.pass) return kValidation;
    } else if (reg_build->parsed() || reg_classify->parsed() || reg_conjugate->parsed() ||
               reg_verify->parsed()) {
      std::vector<PiecewiseMap> gens = load_gens(gens_path, session);
      std::vector<PiecewiseMap> G = enumerate_group(gens, group_bound);
      ChartedManifold M = cut_and_glue(G);
      if (reg_build->parsed()) {
        if (format == "dot")
          print_manifold_dot(os, M);
        else
          os << "group order: " << G.size() << "\n" << M.str();
      } else if (reg_classify->parsed()) {
        os << "components: " << M.components().size() << "\n";
        for (size_t c = 0; c < M.components().size(); ++c) {
          std::string what;
          try {
            what = classify_component(M, static_cast<int>(c), M.model()).str();
          } catch (const Error& e) {
            what = e.what();
          }
          os << "component " << c << ": " << what << "\n";
        }
      } else {
        ConjugatorResult r = conjugator(G, M);
        if (reg_conjugate->parsed()) {
          os << "conjugator: " << r.map->str() << "\n";
        } else {
          bool ok = verify_regularized(G, *r.map);
          os << "conjugator: " << r.map->str() << "\n";
          os << "verified: " << (ok ? "true" : "false") << "\n";
        }
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == Errc::ball_too_small || e.code() == Errc::not_closed)
      std::cerr << "hint: raise --radius\n";
    return code_for(e);
  }
  return kOk;
}
