#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>

#include "gcs/engine.hpp"
#include "gcs/grammar_io.hpp"
#include "gcs/oracle.hpp"

namespace gcs {

namespace {

const char* const kBenchColumns =
    "CSV columns:\n"
    "  op                 access | extract | rank | select\n"
    "  a, b               access: i, i; extract: i, j; rank: c, i; select: c, k\n"
    "  answer             symbol code, extracted length, count or position\n"
    "  light_transitions  light heavy-path edges taken (unbalanced engine)\n"
    "  nodes_visited      heavy-path probes or expanded nodes visited\n"
    "  decompress_nodes   nodes of the decompression tree walked\n"
    "  work               total instrumented work units\n";

struct BuildOptions {
  std::string input, output, grammar_in, alphabet;
  bool balanced = false;
  double epsilon = 0.5;
};

struct QueryOptions {
  std::string index, script;
  std::vector<std::string> words;
  bool oracle = false;
};

struct BenchOptions {
  std::string index, workload = "access", output;
  std::uint64_t count = 1000, length = 1, seed = 1;
};

struct PathBuildOptions {
  std::string dag, output;
};

struct PathQueryOptions {
  std::string index, node, sink;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint64_t parse_number(const std::string& s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

Length max_paths_from_env() {
  const char* env = std::getenv("GCS_MAX_PATHS");
  if (!env || !*env) return kDefaultMaxPaths;
  try {
    return parse_number(env);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument(std::string("GCS_MAX_PATHS: not a number: '") + env + "'");
  }
}

void print_stats(std::ostream& out, const Grammar& g, std::size_t bytes, EngineKind kind) {
  out << "n=" << g.size() << "\n"
      << "N=" << g.text_length() << "\n"
      << "sigma=" << g.sigma << "\n"
      << "height=" << height(g) << "\n"
      << "bytes=" << bytes << "\n"
      << "engine=" << engine_name(kind) << "\n";
}

int cmd_build(const BuildOptions& o, std::ostream& out) {
  Grammar g;
  std::string alphabet;
  if (!o.grammar_in.empty()) {
    g = read_gcs1_file(o.grammar_in);
    alphabet = o.alphabet;
    if (!alphabet.empty()) {
      std::string sorted = alphabet;
      std::sort(sorted.begin(), sorted.end());
      if (alphabet.size() != g.sigma || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("--alphabet must list " + std::to_string(g.sigma) + " distinct bytes");
    }
  } else {
    if (o.input.empty()) throw std::invalid_argument("an input file or --grammar-in is required");
    const std::string bytes = read_file(o.input);
    if (bytes.empty()) throw Error(ErrorCode::kEmptyInput, o.input + " is empty");
    bool seen[256] = {};
    for (unsigned char b : bytes) seen[b] = true;
    Symbol code[256] = {};
    for (int b = 0; b < 256; ++b)
      if (seen[b]) {
        alphabet.push_back(static_cast<char>(b));
        code[b] = static_cast<Symbol>(alphabet.size());
      }
    std::vector<Symbol> text(bytes.size());
    std::transform(bytes.begin(), bytes.end(), text.begin(), [&](char b) { return code[static_cast<unsigned char>(b)]; });
    g = build_grammar(text, static_cast<std::uint32_t>(alphabet.size()));
  }
  auto shared = std::make_shared<const Grammar>(prune(g));
  IndexFile f;
  f.kind = o.balanced ? EngineKind::kBalanced : EngineKind::kUnbalanced;
  f.alphabet = alphabet;
  f.text = build_index(shared, f.kind, o.epsilon);
  const std::string bytes = serialize_index(f);
  std::ofstream file(o.output, std::ios::binary);
  if (!file || !file.write(bytes.data(), static_cast<std::streamsize>(bytes.size())))
    throw Error(ErrorCode::kIoError, "cannot write " + o.output);
  print_stats(out, *shared, bytes.size(), f.kind);
  return 0;
}

// Maps query tokens to symbol codes and back.
class Symbols {
 public:
  Symbols(const std::string& alphabet, std::uint32_t sigma) : alphabet_(alphabet), sigma_(sigma) {}

  // nullopt: a valid byte that does not occur in the text.
  std::optional<Symbol> parse(const std::string& token) const {
    if (alphabet_.empty()) {
      const std::uint64_t v = parse_number(token);
      if (v < 1 || v > sigma_) throw Error(ErrorCode::kInvalidSymbol, "symbol " + token);
      return static_cast<Symbol>(v);
    }
    if (token.size() != 1) throw Error(ErrorCode::kInvalidSymbol, "expected a single byte, got '" + token + "'");
    const auto pos = alphabet_.find(token[0]);
    if (pos == std::string::npos) return std::nullopt;
    return static_cast<Symbol>(pos + 1);
  }

  std::string render(const std::vector<Symbol>& s) const {
    std::string r;
    for (Symbol c : s) {
      if (alphabet_.empty()) {
        if (!r.empty()) r += ' ';
        r += std::to_string(c);
      } else {
        r += alphabet_[c - 1];
      }
    }
    return r;
  }

 private:
  const std::string& alphabet_;
  std::uint32_t sigma_;
};

class QueryRunner {
 public:
  QueryRunner(const IndexFile& f, bool oracle)
      : f_(f), symbols_(f.alphabet, f.grammar().sigma) {
    if (oracle && f.text) text_ = expand_naive(f.text->grammar());
    oracle_ = oracle;
  }

  bool mismatch() const { return mismatch_; }

  std::string run(const std::vector<std::string>& q) {
    if (q.empty()) throw std::invalid_argument("empty query");
    const std::string& op = q[0];
    if (op == "pathcount") {
      need(q, 3);
      if (!f_.paths) throw std::invalid_argument("not a path-count index");
      const Length n = f_.paths->count_paths(q[1], q[2]);
      if (oracle_) {
        const InputDag dag = f_.paths->input_dag();
        check(std::to_string(n), std::to_string(oracle::naive_count_paths(dag, dag.find(q[1]), dag.find(q[2]))));
      }
      return std::to_string(n);
    }
    if (!f_.text) throw std::invalid_argument("not a text index");
    const TextIndex& t = *f_.text;
    if (op == "access") {
      if (q.size() != 2) need(q, 3);
      const Position i = parse_number(q[1]);
      const Position j = q.size() == 3 ? parse_number(q[2]) : i;
      const std::string ans = symbols_.render(t.extract(i, j));
      if (oracle_) check(ans, symbols_.render(oracle::naive_access(text_, i, j)));
      return ans;
    }
    if (op == "rank") {
      need(q, 3);
      const auto c = symbols_.parse(q[1]);
      const Position i = parse_number(q[2]);
      if (!c && i > t.length()) throw Error(ErrorCode::kPositionOutOfRange, "position " + q[2]);
      const std::string ans = std::to_string(c ? t.rank(*c, i) : 0);
      if (oracle_) check(ans, std::to_string(c ? oracle::naive_rank(text_, *c, i) : 0));
      return ans;
    }
    if (op == "select") {
      need(q, 3);
      const auto c = symbols_.parse(q[1]);
      const Length k = parse_number(q[2]);
      if (!c) throw Error(ErrorCode::kOccurrenceOutOfRange, "symbol '" + q[1] + "' does not occur");
      const std::string ans = std::to_string(t.select(*c, k));
      if (oracle_) check(ans, std::to_string(oracle::naive_select(text_, *c, k)));
      return ans;
    }
    throw std::invalid_argument("unknown query '" + op + "'");
  }

 private:
  static void need(const std::vector<std::string>& q, std::size_t n) {
    if (q.size() != n) throw std::invalid_argument("'" + q[0] + "' takes " + std::to_string(n - 1) + " arguments");
  }

  void check(const std::string& got, const std::string& expected) {
    if (got == expected) return;
    mismatch_ = true;
    throw std::runtime_error("oracle mismatch: index says " + got + ", oracle says " + expected);
  }

  const IndexFile& f_;
  Symbols symbols_;
  std::vector<Symbol> text_;
  bool oracle_ = false;
  bool mismatch_ = false;
};

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  return {std::istream_iterator<std::string>(in), std::istream_iterator<std::string>()};
}

std::string join(const std::vector<std::string>& words) {
  std::string s;
  for (const auto& w : words) s += (s.empty() ? "" : " ") + w;
  return s;
}

int cmd_query(const QueryOptions& o, std::ostream& out) {
  const IndexFile f = load_index(o.index);
  QueryRunner runner(f, o.oracle);
  std::vector<std::vector<std::string>> queries;
  if (!o.script.empty()) {
    std::istringstream lines(read_file(o.script));
    std::string line;
    while (std::getline(lines, line)) {
      auto words = split_words(line);
      if (!words.empty() && words[0][0] != '#') queries.push_back(std::move(words));
    }
  }
  if (!o.words.empty()) queries.push_back(o.words);
  for (const auto& q : queries) {
    out << join(q) << " -> ";
    try {
      out << runner.run(q) << "\n";
    } catch (const std::exception& e) {
      out << "error: " << e.what() << "\n";
    }
  }
  return runner.mismatch() ? 1 : 0;
}

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  const IndexFile f = load_index(o.index);
  if (!f.text) throw std::invalid_argument("bench needs a text index");
  const TextIndex& t = *f.text;
  const Length n = t.length();
  std::mt19937_64 rng(o.seed);
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); };

  std::vector<Symbol> present;
  for (Symbol c = 1; c <= t.sigma(); ++c)
    if (t.rank(c, n) > 0) present.push_back(c);

  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) throw Error(ErrorCode::kIoError, "cannot write " + o.output);
  }
  std::ostream& csv = o.output.empty() ? out : file;
  csv << "op,a,b,answer,light_transitions,nodes_visited,decompress_nodes,work\n";
  const std::string& w = o.workload;
  if (w != "access" && w != "extract" && w != "rank" && w != "select")
    throw std::invalid_argument("unknown workload '" + w + "'");
  const Length m = std::clamp<Length>(o.length, 1, n);
  for (std::uint64_t q = 0; q < o.count; ++q) {
    QueryStats st;
    std::uint64_t a = 0, b = 0, answer = 0;
    if (w == "access") {
      a = b = pick(1, n);
      answer = t.access(a, &st);
    } else if (w == "extract") {
      a = pick(1, n - m + 1);
      b = a + m - 1;
      answer = t.extract(a, b, &st).size();
    } else if (w == "rank") {
      a = pick(1, t.sigma());
      b = pick(0, n);
      answer = t.rank(static_cast<Symbol>(a), b, &st);
    } else {
      a = present[pick(0, present.size() - 1)];
      b = pick(1, t.rank(static_cast<Symbol>(a), n));
      answer = t.select(static_cast<Symbol>(a), b, &st);
    }
    csv << w << ',' << a << ',' << b << ',' << answer << ',' << st.light_transitions << ',' << st.nodes_visited
        << ',' << st.decompress_nodes << ',' << st.work << '\n';
  }
  return 0;
}

int cmd_path_build(const PathBuildOptions& o, std::ostream& out) {
  const InputDag dag = read_dag_file(o.dag);
  IndexFile f;
  f.kind = EngineKind::kPathCount;
  f.paths = std::make_shared<const PathCountIndex>(dag, max_paths_from_env());
  const std::string bytes = serialize_index(f);
  std::ofstream file(o.output, std::ios::binary);
  if (!file || !file.write(bytes.data(), static_cast<std::streamsize>(bytes.size())))
    throw Error(ErrorCode::kIoError, "cannot write " + o.output);
  out << "nodes=" << dag.size() << "\n"
      << "edges=" << dag.edges.size() << "\n";
  print_stats(out, f.paths->grammar(), bytes.size(), f.kind);
  return 0;
}

int cmd_path_query(const PathQueryOptions& o, std::ostream& out) {
  const IndexFile f = load_index(o.index);
  if (!f.paths) throw std::invalid_argument("not a path-count index");
  out << f.paths->count_paths(o.node, o.sink) << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank, select and access on grammar-compressed strings"};
  app.require_subcommand(1);

  BuildOptions build;
  auto* b = app.add_subcommand("build", "Compress a file and write an index");
  b->add_option("input", build.input, "Input file (bytes)");
  b->add_option("-o,--output", build.output, "Index file to write")->required();
  b->add_flag("--balanced", build.balanced, "Use the shallow-tree engine");
  b->add_option("--epsilon", build.epsilon, "Expansion exponent for --balanced")->check(CLI::Range(0.01, 1.0));
  b->add_option("--grammar-in", build.grammar_in, "Use this GCS1 grammar instead of compressing input");
  b->add_option("--alphabet", build.alphabet, "Byte for each symbol code of --grammar-in, in code order");

  QueryOptions query;
  auto* q = app.add_subcommand("query", "Answer queries: access i [j] | rank c i | select c k | pathcount u v");
  q->add_option("index", query.index, "Index file")->required();
  q->add_option("query", query.words, "One query given as words");
  q->add_option("--script", query.script, "File with one query per line");
  q->add_flag("--oracle", query.oracle, "Cross-check every answer against a plain scan");

  BenchOptions bench;
  auto* be = app.add_subcommand("bench", "Instrumented random workload, CSV on stdout");
  be->add_option("index", bench.index, "Index file")->required();
  be->add_option("--workload", bench.workload, "access | extract | rank | select")
      ->check(CLI::IsMember({"access", "extract", "rank", "select"}));
  be->add_option("--count", bench.count, "Number of queries");
  be->add_option("--length", bench.length, "Substring length for extract");
  be->add_option("--seed", bench.seed, "Random seed");
  be->add_option("--output", bench.output, "Write the CSV here instead of stdout");
  be->footer(kBenchColumns);

  auto* p = app.add_subcommand("pathcount", "Count paths in a DAG via rank queries");
  p->require_subcommand(1);
  PathBuildOptions pbuild;
  auto* pb = p->add_subcommand("build", "Index a DAG (lines 'V id' and 'E from to')");
  pb->add_option("dag", pbuild.dag, "DAG file")->required();
  pb->add_option("-o,--output", pbuild.output, "Index file to write")->required();
  pb->footer("GCS_MAX_PATHS caps the number of source-to-sink paths (default 2^48).");
  PathQueryOptions pquery;
  auto* pq = p->add_subcommand("query", "Number of paths from a node to a sink");
  pq->add_option("-i,--index", pquery.index, "Index file")->required();
  pq->add_option("node", pquery.node, "Start node")->required();
  pq->add_option("sink", pquery.sink, "Sink node")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (*b) return cmd_build(build, out);
    if (*q) return cmd_query(query, out);
    if (*be) return cmd_bench(bench, out);
    if (*pb) return cmd_path_build(pbuild, out);
    if (*pq) return cmd_path_query(pquery, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace gcs
