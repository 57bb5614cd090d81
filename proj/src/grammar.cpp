#include "gcs/grammar.hpp"

#include <algorithm>
#include <utility>

#include "gcs/serialize.hpp"

namespace gcs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kCyclicRule: return "CyclicRule";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNotCNF: return "NotCNF";
    case ErrorCode::kUnreachable: return "Unreachable";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kPositionOutOfRange: return "PositionOutOfRange";
    case ErrorCode::kOccurrenceOutOfRange: return "OccurrenceOutOfRange";
    case ErrorCode::kInvalidSymbol: return "InvalidSymbol";
    case ErrorCode::kCyclicInput: return "CyclicInput";
    case ErrorCode::kNoSink: return "NoSink";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kNotASink: return "NotASink";
    case ErrorCode::kPathLimitExceeded: return "PathLimitExceeded";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidGrammarFile: return "InvalidGrammarFile";
    case ErrorCode::kInvalidDagFile: return "InvalidDagFile";
    case ErrorCode::kCorruptIndex: return "CorruptIndex";
  }
  return "Unknown";
}

Grammar make_grammar(std::vector<Rule> rules, RuleId root, std::uint32_t sigma) {
  for (std::size_t r = 0; r < rules.size(); ++r) {
    Rule& rule = rules[r];
    if (rule.is_terminal()) {
      rule.length = 1;
    } else if (rule.left < r && rule.right < r) {
      rule.length = rules[rule.left].length + rules[rule.right].length;
    }
  }
  Grammar g{std::move(rules), root, sigma};
  require_valid(g, false);
  return g;
}

std::optional<ValidationError> validate(const Grammar& g, bool require_reachable) {
  const std::size_t n = g.rules.size();
  if (n == 0) return ValidationError{ErrorCode::kEmptyInput, 0, "grammar has no rules"};
  if (g.sigma == 0) return ValidationError{ErrorCode::kNotCNF, 0, "alphabet size must be positive"};
  if (g.root >= n)
    return ValidationError{ErrorCode::kDanglingReference, g.root, "root id out of range"};

  for (RuleId r = 0; r < n; ++r) {
    const Rule& rule = g.rules[r];
    if (rule.is_terminal()) {
      if (rule.symbol < 1 || rule.symbol > g.sigma)
        return ValidationError{ErrorCode::kNotCNF, r, "terminal symbol outside [1..sigma]"};
      if (rule.length != 1)
        return ValidationError{ErrorCode::kLengthMismatch, r, "terminal rule length must be 1"};
      continue;
    }
    if (rule.kind != RuleKind::kPair)
      return ValidationError{ErrorCode::kNotCNF, r, "unknown rule kind"};
    for (RuleId child : {rule.left, rule.right}) {
      if (child >= n)
        return ValidationError{ErrorCode::kDanglingReference, r, "reference to undefined rule"};
      if (child >= r)
        return ValidationError{ErrorCode::kCyclicRule, r,
                               "reference to a rule that is not defined earlier"};
    }
    const Length l = g.rules[rule.left].length;
    const Length rr = g.rules[rule.right].length;
    if (l + rr < l || rule.length != l + rr)
      return ValidationError{ErrorCode::kLengthMismatch, r, "stored length differs from |left|+|right|"};
  }

  if (require_reachable) {
    std::vector<char> seen(n, 0);
    seen[g.root] = 1;
    for (RuleId r = static_cast<RuleId>(n); r-- > 0;) {
      if (!seen[r] || g.rules[r].is_terminal()) continue;
      seen[g.rules[r].left] = seen[g.rules[r].right] = 1;
    }
    for (RuleId r = 0; r < n; ++r)
      if (!seen[r]) return ValidationError{ErrorCode::kUnreachable, r, "rule unreachable from root"};
  }
  return std::nullopt;
}

void require_valid(const Grammar& g, bool require_reachable) {
  if (auto err = validate(g, require_reachable))
    throw Error(err->code, "rule " + std::to_string(err->rule) + ": " + err->message);
}

std::vector<Symbol> expand_naive(const Grammar& g, RuleId r) {
  std::vector<Symbol> out;
  out.reserve(g.rules[r].length);
  std::vector<RuleId> stack{r};
  while (!stack.empty()) {
    const Rule& rule = g.rules[stack.back()];
    stack.pop_back();
    if (rule.is_terminal()) {
      out.push_back(rule.symbol);
    } else {
      stack.push_back(rule.right);
      stack.push_back(rule.left);
    }
  }
  return out;
}

Grammar prune(const Grammar& g) {
  const std::size_t n = g.rules.size();
  std::vector<char> seen(n, 0);
  seen[g.root] = 1;
  for (RuleId r = static_cast<RuleId>(n); r-- > 0;) {
    if (!seen[r] || g.rules[r].is_terminal()) continue;
    seen[g.rules[r].left] = seen[g.rules[r].right] = 1;
  }
  std::vector<RuleId> remap(n, kNoRule);
  Grammar out;
  out.sigma = g.sigma;
  for (RuleId r = 0; r < n; ++r) {
    if (!seen[r]) continue;
    Rule rule = g.rules[r];
    if (!rule.is_terminal()) {
      rule.left = remap[rule.left];
      rule.right = remap[rule.right];
    }
    remap[r] = static_cast<RuleId>(out.rules.size());
    out.rules.push_back(rule);
  }
  out.root = remap[g.root];
  return out;
}

Length Grammar::max_length() const {
  Length m = 0;
  for (const Rule& r : rules) m = std::max(m, r.length);
  return m;
}

std::uint32_t height(const Grammar& g) {
  std::vector<std::uint32_t> h(g.rules.size(), 0);
  for (RuleId r = 0; r < g.rules.size(); ++r) {
    const Rule& rule = g.rules[r];
    if (!rule.is_terminal()) h[r] = 1 + std::max(h[rule.left], h[rule.right]);
  }
  return h[g.root];
}

Grammar cnf_normalize(const GeneralGrammar& g) {
  const std::size_t n = g.rules.size();
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "grammar has no rules");
  if (g.root >= n) throw Error(ErrorCode::kDanglingReference, "root id out of range");

  // Post-order from the root; colour 1 = on stack, 2 = done.
  std::vector<std::uint8_t> colour(n, 0);
  std::vector<std::uint32_t> order;
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{g.root, 0}};
  colour[g.root] = 1;
  while (!stack.empty()) {
    auto& [r, next] = stack.back();
    const auto& rhs = g.rules[r];
    if (rhs.empty()) throw Error(ErrorCode::kNotCNF, "rule " + std::to_string(r) + " is empty");
    if (next == rhs.size()) {
      colour[r] = 2;
      order.push_back(r);
      stack.pop_back();
      continue;
    }
    const GeneralSymbol s = rhs[next++];
    if (s.terminal) continue;
    if (s.value >= n) throw Error(ErrorCode::kDanglingReference, "reference to undefined rule");
    if (colour[s.value] == 1) throw Error(ErrorCode::kCyclicRule, "rule " + std::to_string(s.value));
    if (colour[s.value] == 0) {
      colour[s.value] = 1;
      stack.emplace_back(s.value, 0);
    }
  }

  std::vector<Rule> out;
  std::vector<RuleId> terminal_of(static_cast<std::size_t>(g.sigma) + 1, kNoRule);
  std::vector<RuleId> id_of(n, kNoRule);
  auto terminal_rule = [&](Symbol c) {
    if (c < 1 || c > g.sigma) throw Error(ErrorCode::kNotCNF, "terminal symbol outside [1..sigma]");
    if (terminal_of[c] == kNoRule) {
      terminal_of[c] = static_cast<RuleId>(out.size());
      out.push_back(Rule::terminal(c));
    }
    return terminal_of[c];
  };
  auto resolve = [&](GeneralSymbol s) { return s.terminal ? terminal_rule(s.value) : id_of[s.value]; };

  for (std::uint32_t r : order) {
    const auto& rhs = g.rules[r];
    if (rhs.size() == 1) {
      id_of[r] = resolve(rhs[0]);
      continue;
    }
    std::vector<RuleId> ids;
    ids.reserve(rhs.size());
    for (const auto& s : rhs) ids.push_back(resolve(s));
    auto add_pair = [&](RuleId l, RuleId rr) {
      out.push_back(Rule::pair(l, rr, 0));
      return static_cast<RuleId>(out.size() - 1);
    };
    RuleId cur = add_pair(ids[ids.size() - 2], ids.back());
    for (std::size_t i = ids.size() - 2; i-- > 0;) cur = add_pair(ids[i], cur);
    id_of[r] = cur;
  }
  return make_grammar(std::move(out), id_of[g.root], g.sigma);
}

void Grammar::save(BinaryWriter& out) const {
  out.u64(sigma);
  out.u64(root);
  out.u64(rules.size());
  for (const Rule& r : rules) {
    out.u64(static_cast<std::uint64_t>(r.kind));
    if (r.is_terminal()) {
      out.u64(r.symbol);
      out.u64(0);
    } else {
      out.u64(r.left);
      out.u64(r.right);
    }
    out.u64(r.length);
  }
}

Grammar Grammar::load(BinaryReader& in) {
  Grammar g;
  g.sigma = static_cast<std::uint32_t>(in.u64());
  g.root = static_cast<RuleId>(in.u64());
  const std::size_t n = in.count(32);
  g.rules.resize(n);
  for (Rule& r : g.rules) {
    const std::uint64_t kind = in.u64();
    const std::uint64_t a = in.u64();
    const std::uint64_t b = in.u64();
    r.length = in.u64();
    if (kind == 0) {
      r.kind = RuleKind::kTerminal;
      r.symbol = static_cast<Symbol>(a);
    } else if (kind == 1) {
      r.kind = RuleKind::kPair;
      r.left = static_cast<RuleId>(a);
      r.right = static_cast<RuleId>(b);
    } else {
      throw Error(ErrorCode::kCorruptIndex, "unknown rule kind");
    }
  }
  if (auto err = validate(g, false)) throw Error(ErrorCode::kCorruptIndex, err->message);
  return g;
}

}  // namespace gcs
