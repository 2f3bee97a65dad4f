// Command line front end: analyze XML documents, run the verification
// suites, emit family members, and convert trees to and from the
// first-child next-sibling encoding.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "treent/treent.hpp"

namespace {

using namespace treent;

struct pad_options {
  bool sentinel = false;
  std::string symbol;  // empty = use the mode default

  /// Resolves against a document alphabet; `default_symbol` empty means the
  /// sentinel convention is the default.
  pad_policy resolve(alphabet& sigma, const std::string& default_symbol) const {
    if (sentinel) return pad_policy::sentinel();
    const std::string& sym = symbol.empty() ? default_symbol : symbol;
    if (sym.empty()) return pad_policy::sentinel();
    return pad_policy::in_alphabet(sigma.intern(sym));
  }
};

void add_pad_flags(CLI::App* cmd, pad_options& pad) {
  auto* a = cmd->add_flag("--pad-sentinel", pad.sentinel,
                          "pad histories with a symbol outside the alphabet");
  auto* b = cmd->add_option("--pad-symbol", pad.symbol,
                            "pad histories with this label");
  a->excludes(b);
}

unsigned thread_cap() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("TREE_ENTROPY_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v < 1024) n = std::min<unsigned long>(n, v);
  }
  return n;
}

struct file_result {
  std::vector<report_row> rows;
  std::string log;
  bool failed = false;
};

file_result analyze_one(const std::string& path, const std::vector<std::uint32_t>& ks,
                        const pad_options& pad_opt) {
  file_result fr;
  try {
    alphabet sigma;
    const tree t = parse_xml_file(path, sigma);
    const std::size_t distinct = sigma.size();
    const pad_policy pad = pad_opt.resolve(sigma, "");
    const binary_tree enc = fcns(t, pad);
    for (std::uint32_t k : ks) {
      report_row row;
      row.file = path;
      row.rep = report(t, enc, k, pad);
      fr.rows.push_back(std::move(row));
    }
    std::ostringstream log;
    log << path << ": n=" << t.size() << ", sigma=" << distinct;
    fr.log = log.str();
  } catch (const std::exception& e) {
    report_row row;
    row.file = path;
    row.error = e.what();
    fr.rows.push_back(std::move(row));
    fr.log = "error: " + path + ": " + e.what();
    fr.failed = true;
  }
  return fr;
}

int run_analyze(const std::vector<std::string>& files, const std::vector<std::uint32_t>& ks,
                const pad_options& pad_opt, output_format fmt, bool normalized) {
  report_writer writer(std::cout, fmt, normalized);
  writer.begin();
  bool any_failed = false;

  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(thread_cap(), files.size()));
  if (threads <= 1) {
    for (const std::string& f : files) {
      file_result fr = analyze_one(f, ks, pad_opt);
      std::cerr << fr.log << '\n';
      for (const report_row& row : fr.rows) writer.write(row);
      any_failed = any_failed || fr.failed;
    }
  } else {
    std::vector<file_result> results(files.size());
    std::vector<char> ready(files.size(), 0);
    std::mutex m;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= files.size()) break;
        file_result fr = analyze_one(files[i], ks, pad_opt);
        {
          std::lock_guard<std::mutex> lock(m);
          results[i] = std::move(fr);
          ready[i] = 1;
        }
        cv.notify_all();
      }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
    // Emit in input order as results arrive.
    for (std::size_t i = 0; i < files.size(); ++i) {
      std::unique_lock<std::mutex> lock(m);
      cv.wait(lock, [&]() { return ready[i] != 0; });
      file_result fr = std::move(results[i]);
      lock.unlock();
      std::cerr << fr.log << '\n';
      for (const report_row& row : fr.rows) writer.write(row);
      any_failed = any_failed || fr.failed;
    }
    for (std::thread& th : pool) th.join();
  }

  writer.finish();
  return any_failed ? 2 : 0;
}

void print_summary(const verify_summary& s) {
  for (const suite_result& r : s.suites) {
    std::printf("%-60s %s  checks=%llu failures=%llu\n", r.name.c_str(),
                r.ok() ? "ok  " : "FAIL", static_cast<unsigned long long>(r.checks),
                static_cast<unsigned long long>(r.failures));
    if (!r.ok()) std::printf("  first counterexample: %s\n", r.first_counterexample.c_str());
  }
}

int run_verify(const verify_params& vp, bool families, bool inequalities) {
  const auto start = std::chrono::steady_clock::now();
  verify_summary all;
  if (inequalities) {
    verify_summary s = run_inequality_suites(vp);
    all.suites.insert(all.suites.end(), s.suites.begin(), s.suites.end());
  }
  if (families) {
    verify_summary s = run_family_checks();
    all.suites.insert(all.suites.end(), s.suites.begin(), s.suites.end());
  }
  print_summary(all);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("total: %zu suites, %llu checks, %llu failures (%.1fs)\n", all.suites.size(),
              static_cast<unsigned long long>(all.total_checks()),
              static_cast<unsigned long long>(all.total_failures()), secs);
  return all.ok() ? 0 : 1;
}

void write_xml(std::ostream& os, const tree& t, const alphabet& sigma) {
  if (t.empty()) return;
  struct frame {
    node_index v;
    bool open;
  };
  std::vector<frame> stack{{t.root(), true}};
  std::vector<node_index> kids;
  while (!stack.empty()) {
    const frame f = stack.back();
    stack.pop_back();
    const std::string_view name = sigma.text(t.label(f.v));
    if (!f.open) {
      os << "</" << name << '>';
      continue;
    }
    if (t.first_child(f.v) == nil_node) {
      os << '<' << name << "/>";
      continue;
    }
    os << '<' << name << '>';
    stack.push_back({f.v, false});
    kids.clear();
    for (node_index c = t.first_child(f.v); c != nil_node; c = t.next_sibling(c))
      kids.push_back(c);
    for (std::size_t i = kids.size(); i-- > 0;) stack.push_back({kids[i], true});
  }
  os << '\n';
}

int run_family(const std::string& name, std::uint64_t n, std::uint32_t k,
               const std::string& emit, const std::vector<std::uint32_t>& ks,
               const pad_options& pad_opt, output_format fmt, bool normalized) {
  const family_kind kind = family_from_name(name);
  if (kind != family_kind::permutation && k != 0)
    throw std::invalid_argument("--k is a permutation family parameter; " + name +
                                " only takes --n");

  alphabet sigma;
  tree t;
  std::string display;
  std::optional<binary_tree> direct;
  switch (kind) {
    case family_kind::left_chain: {
      direct.emplace(left_chain(n, sigma));
      t = direct->as_tree();
      display = "left_chain(n=" + std::to_string(n) + ")";
      break;
    }
    case family_kind::comb:
      t = comb(n, sigma);
      display = "comb(n=" + std::to_string(n) + ")";
      break;
    case family_kind::two_branch:
      t = two_branch(n, sigma);
      display = "two_branch(n=" + std::to_string(n) + ")";
      break;
    case family_kind::permutation: {
      const std::uint32_t kk = k == 0 ? 1 : k;
      t = permutation_family(n, kk, sigma);
      display = "permutation(n=" + std::to_string(n) + ",k=" + std::to_string(kk) + ")";
      break;
    }
  }

  if (emit == "term") {
    std::cout << to_term(t, sigma) << '\n';
    return 0;
  }
  if (emit == "xml") {
    write_xml(std::cout, t, sigma);
    return 0;
  }
  if (emit != "report")
    throw std::invalid_argument("unknown --emit value: " + emit +
                                " (expected term, xml or report)");

  const pad_policy pad = pad_opt.resolve(sigma, "a");
  const binary_tree enc = fcns(t, pad);
  report_writer writer(std::cout, fmt, normalized);
  writer.begin();
  for (std::uint32_t kv : ks) {
    report_row row;
    row.file = display;
    row.rep = report(t, enc, kv, pad);
    // Binary families report the entropy of the tree itself rather than of
    // its encoding.
    if (direct.has_value()) row.rep.h_shape = shape_entropy_binary(*direct, kv, pad);
    writer.write(row);
  }
  writer.finish();
  return 0;
}

std::string read_file_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_like_xml(std::string_view text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
    return c == '<' || static_cast<unsigned char>(c) == 0xef;  // tag or BOM
  }
  return false;
}

int run_fcns(const std::string& term, const std::string& file, bool decode,
             const pad_options& pad_opt) {
  alphabet sigma;
  tree t;
  if (!file.empty()) {
    const std::string text = read_file_text(file);
    t = looks_like_xml(text) ? parse_xml_text(text, sigma) : build_tree(text, sigma);
  } else {
    t = build_tree(term, sigma);
  }

  if (decode) {
    const binary_tree bt(std::move(t));
    std::cout << to_term(fcns_decode(bt), sigma) << '\n';
    return 0;
  }
  const pad_policy pad = pad_opt.resolve(sigma, "");
  std::cout << to_term(fcns(t, pad).as_tree(), sigma) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"empirical entropy measures for ordered labeled trees"};
  app.require_subcommand(1);

  // analyze
  auto* an = app.add_subcommand("analyze", "entropy report for XML documents");
  std::vector<std::string> an_files;
  std::vector<std::uint32_t> an_ks{0, 1, 2, 4};
  pad_options an_pad;
  std::string an_format = "csv";
  bool an_normalized = false;
  an->add_option("files", an_files, "XML documents, gzip transparently unpacked")
      ->required()
      ->expected(-1);
  an->add_option("--k", an_ks, "history lengths, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  add_pad_flags(an, an_pad);
  an->add_option("--format", an_format, "csv, markdown or json")->capture_default_str();
  an->add_flag("--normalized", an_normalized, "append per-node columns");

  // verify
  auto* ve = app.add_subcommand("verify", "randomized checks of all entropy relations");
  verify_params vp;
  bool ve_general = false, ve_unlabeled = false, ve_binary = false, ve_families = false;
  ve->add_option("--trials", vp.trials, "random trees per kind")->capture_default_str();
  ve->add_option("--max-size", vp.max_size, "maximum tree size")->capture_default_str();
  ve->add_option("--sigma", vp.sigma, "number of distinct labels")->capture_default_str();
  ve->add_option("--k-max", vp.k_max, "largest history length")->capture_default_str();
  ve->add_option("--seed", vp.seed, "base random seed")->capture_default_str();
  ve->add_flag("--general", ve_general, "only labeled unranked trees");
  ve->add_flag("--unlabeled", ve_unlabeled, "only single-label trees");
  ve->add_flag("--binary", ve_binary, "only binary trees");
  ve->add_flag("--families", ve_families, "only family predictions");

  // family
  auto* fa = app.add_subcommand("family", "emit or analyze a named tree family member");
  std::string fa_name, fa_emit = "report", fa_format = "csv";
  std::uint64_t fa_n = 0;
  std::uint32_t fa_k = 0;
  std::vector<std::uint32_t> fa_ks{0, 1, 2, 4};
  pad_options fa_pad;
  bool fa_normalized = false;
  fa->add_option("name", fa_name, "left_chain, comb, two_branch or permutation")->required();
  fa->add_option("--n", fa_n, "family size parameter")->required();
  fa->add_option("--k", fa_k, "tuple length (permutation family only)");
  fa->add_option("--emit", fa_emit, "term, xml or report")->capture_default_str();
  fa->add_option("--k-values", fa_ks, "history lengths for the report")
      ->delimiter(',')
      ->capture_default_str();
  add_pad_flags(fa, fa_pad);
  fa->add_option("--format", fa_format, "csv, markdown or json")->capture_default_str();
  fa->add_flag("--normalized", fa_normalized, "append per-node columns");

  // fcns
  auto* fc = app.add_subcommand("fcns",
                                "first-child next-sibling encoding of a tree, or its inverse");
  std::string fc_term, fc_file;
  bool fc_decode = false;
  pad_options fc_pad;
  auto* fc_term_opt = fc->add_option("--term", fc_term, "tree as a term, e.g. a(b c)");
  auto* fc_file_opt = fc->add_option("--file", fc_file, "file holding a term or an XML document");
  fc_term_opt->excludes(fc_file_opt);
  fc->add_flag("--decode", fc_decode, "treat the input as an encoding and invert it");
  add_pad_flags(fc, fc_pad);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (an->parsed())
      return run_analyze(an_files, an_ks, an_pad, output_format_from_name(an_format),
                         an_normalized);
    if (ve->parsed()) {
      const bool any = ve_general || ve_unlabeled || ve_binary || ve_families;
      if (any) {
        vp.general = ve_general;
        vp.unlabeled = ve_unlabeled;
        vp.binary = ve_binary;
      }
      const bool families = any ? ve_families : true;
      const bool inequalities = !any || ve_general || ve_unlabeled || ve_binary;
      return run_verify(vp, families, inequalities);
    }
    if (fa->parsed())
      return run_family(fa_name, fa_n, fa_k, fa_emit, fa_ks, fa_pad,
                        output_format_from_name(fa_format), fa_normalized);
    if (fc->parsed()) {
      if (fc_term.empty() && fc_file.empty())
        throw std::invalid_argument("fcns needs --term or --file");
      return run_fcns(fc_term, fc_file, fc_decode, fc_pad);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
