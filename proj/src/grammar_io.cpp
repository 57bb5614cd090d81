#include "gcs/grammar_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace gcs {

namespace {

[[noreturn]] void bad_file(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kInvalidGrammarFile, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

Grammar read_gcs1(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) bad_file(0, "missing header");
  std::istringstream header(line);
  std::string magic;
  std::uint64_t sigma = 0, nrules = 0, root_id = 0;
  if (!(header >> magic >> sigma >> nrules >> root_id) || magic != "GCS1")
    bad_file(line_no, "expected 'GCS1 <sigma> <nrules> <root-id>'");

  std::unordered_map<std::uint64_t, RuleId> ids;
  std::vector<Rule> rules;
  rules.reserve(nrules);
  // References to ids that have not been defined yet; resolved at the end to
  // tell forward references (order violation) from dangling ones.
  std::vector<std::uint64_t> pending;

  auto lookup = [&](std::uint64_t id) -> RuleId {
    auto it = ids.find(id);
    if (it != ids.end()) return it->second;
    pending.push_back(id);
    return kNoRule;
  };

  while (next_line()) {
    std::istringstream ls(line);
    std::string tag;
    std::uint64_t id = 0;
    if (!(ls >> tag >> id)) bad_file(line_no, "malformed rule line");
    if (ids.count(id)) bad_file(line_no, "duplicate rule id " + std::to_string(id));
    Rule rule;
    if (tag == "T") {
      std::uint64_t sym = 0;
      if (!(ls >> sym)) bad_file(line_no, "terminal rule needs a symbol");
      rule = Rule::terminal(static_cast<Symbol>(sym));
    } else if (tag == "P") {
      std::uint64_t l = 0, r = 0;
      if (!(ls >> l >> r)) bad_file(line_no, "pair rule needs two ids");
      rule = Rule::pair(lookup(l), lookup(r), 0);
    } else {
      bad_file(line_no, "unknown rule tag '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) bad_file(line_no, "trailing tokens");
    ids.emplace(id, static_cast<RuleId>(rules.size()));
    rules.push_back(rule);
  }
  if (rules.size() != nrules)
    bad_file(line_no, "header announces " + std::to_string(nrules) + " rules, found " +
                          std::to_string(rules.size()));
  for (std::uint64_t id : pending) {
    if (ids.count(id)) throw Error(ErrorCode::kCyclicRule, "rule " + std::to_string(id) + " is referenced before its definition");
    throw Error(ErrorCode::kDanglingReference, "rule id " + std::to_string(id) + " is never defined");
  }
  auto root = ids.find(root_id);
  if (root == ids.end()) throw Error(ErrorCode::kDanglingReference, "root id is never defined");
  return make_grammar(std::move(rules), root->second, static_cast<std::uint32_t>(sigma));
}

Grammar read_gcs1_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return read_gcs1(in);
}

void write_gcs1(std::ostream& out, const Grammar& g) {
  out << "GCS1 " << g.sigma << ' ' << g.rules.size() << ' ' << g.root + 1 << '\n';
  for (RuleId r = 0; r < g.rules.size(); ++r) {
    const Rule& rule = g.rules[r];
    if (rule.is_terminal())
      out << "T " << r + 1 << ' ' << rule.symbol << '\n';
    else
      out << "P " << r + 1 << ' ' << rule.left + 1 << ' ' << rule.right + 1 << '\n';
  }
}

}  // namespace gcs
