#ifndef PW1D_IO_HPP
#define PW1D_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "pw1d/piecewise.hpp"

namespace pw1d {

/// Session-level parsing options. surd_base = k enables the `a+b*rt` scalar
/// forms meaning a + b*sqrt(k); 0 keeps the field rational.
struct ParseSession {
  unsigned long surd_base = 0;
};

/// Grammar (whitespace-insensitive, round-trips bit-exactly with printing):
///   scalar ::= p | p/q | a+b*rt | a-b*rt
///   point  ::= scalar | inf
///   homography ::= [a,b;c,d]
///   map ::= circ{ [x0: p,q] ... } | proj{ [x0: a,b;c,d] ... }
Scalar parse_scalar(const std::string& text, const ParseSession& session = {});
ProjPoint parse_point(const std::string& text, const ParseSession& session = {});
Homography parse_homography(const std::string& text, const ParseSession& session = {});
PiecewiseMap parse_map(const std::string& text, const ParseSession& session = {});

/// Free-group word over named generators: whitespace/'*'-separated tokens,
/// each `name`, `name^k` or `name^-k`. Letters are encoded +/-(index+1).
std::vector<int> parse_word(const std::string& text, const std::vector<std::string>& generators);
std::string word_str(const std::vector<int>& word, const std::vector<std::string>& generators);

/// Structured partial-action spec file (JSON).
struct PartialSpecFile {
  std::vector<std::string> generators;
  bool finite_carrier = true;
  std::vector<std::string> finite_points;
  std::map<std::string, std::map<std::string, std::string>> tables;  // gen -> from -> to
  std::vector<std::string> piecewise_maps;  // one map string per generator
  std::vector<std::string> relations;       // asserted words, validated only
  std::vector<std::string> seeds;
  unsigned long surd_base = 0;
};
PartialSpecFile load_partial_spec_text(const std::string& json_text);

}  // namespace pw1d

#endif
