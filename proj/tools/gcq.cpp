// Command-line front end: check, eval, translate, export-dot, axioms-verify.
// Exit status: 0 holds / success, 1 fails, 2 error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <variant>

#include "gcq/axioms.hpp"
#include "gcq/containment.hpp"
#include "gcq/error.hpp"
#include "gcq/json_io.hpp"
#include "gcq/translate.hpp"

namespace fs = std::filesystem;
using namespace gcq;

namespace {

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kError = 2;

struct Config {
  std::string sig_path;
  std::string format = "text";
  std::uint64_t budget = SearchOptions{}.budget;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t max_carrier = 3;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A query file: optional "signature:" header (inline JSON or a path relative
// to the file), "#" comment lines, then one GCQ term or one CCQ judgment.
struct QueryFile {
  std::optional<Signature> header_sig;
  std::string body;
};

QueryFile read_query(const std::string& path) {
  QueryFile q;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    std::string_view v = line;
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    if (v.starts_with("#")) continue;
    if (v.starts_with("signature:")) {
      std::string source(v.substr(10));
      source.erase(0, source.find_first_not_of(" \t"));
      if (!source.empty() && source.front() == '{') {
        q.header_sig = load_signature(source);
      } else {
        fs::path p = fs::path(path).parent_path() / source;
        q.header_sig = load_signature(read_file(p.string()));
      }
      continue;
    }
    q.body += line;
    q.body += '\n';
  }
  return q;
}

// The --sig flag wins over the header line.
Signature signature_for(const Config& cfg, const QueryFile& q) {
  if (!cfg.sig_path.empty()) return load_signature(read_file(cfg.sig_path));
  if (q.header_sig) return *q.header_sig;
  return {};
}

bool is_judgment(const std::string& body) { return body.find("|-") != std::string::npos; }

struct Query {
  Signature sig;  // the signature the text was checked against
  std::variant<Term, ccq::Judgment> value;

  // The query as a GCQ term; judgments go through Θ.
  Term term() const {
    if (auto* t = std::get_if<Term>(&value)) return *t;
    return theta(std::get<ccq::Judgment>(value));
  }
};

Query load_query(const Config& cfg, const std::string& path) {
  QueryFile f = read_query(path);
  Query q{signature_for(cfg, f), Term::id0()};
  try {
    if (is_judgment(f.body))
      q.value = ccq::parse_ccq(f.body, q.sig);
    else
      q.value = parse_gcq(f.body, q.sig);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
  return q;
}

json verdict_json(const InclusionVerdict& v) { return parse_json_strict(dump_verdict(v)); }

int cmd_check(const Config& cfg, const std::string& a_path, const std::string& b_path, const std::string& mode) {
  Term a = load_query(cfg, a_path).term();
  Term b = load_query(cfg, b_path).term();
  if (mode == "inclusion") {
    InclusionVerdict v = decide_inclusion(a, b, cfg.budget);
    if (cfg.format == "json") {
      std::cout << dump_verdict(v) << "\n";
    } else {
      std::cout << (v.holds ? "holds" : "fails") << ": " << print_gcq(a) << " <= " << print_gcq(b) << "\n";
      if (v.witness) std::cout << "witness " << dump_morphism(*v.witness) << "\n";
      if (v.countermodel) std::cout << "countermodel " << dump_model(*v.countermodel) << "\n";
    }
    return v.holds ? kHolds : kFails;
  }
  EquivalenceVerdict v = decide_equivalence(a, b, cfg.budget);
  if (cfg.format == "json") {
    json out{{"holds", v.holds}, {"forward", verdict_json(v.forward)}, {"backward", verdict_json(v.backward)}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << (v.holds ? "holds" : "fails") << ": " << print_gcq(a) << " == " << print_gcq(b) << "\n";
    for (const auto* side : {&v.forward, &v.backward}) {
      const char* dir = side == &v.forward ? "forward" : "backward";
      if (side->witness) std::cout << dir << " witness " << dump_morphism(*side->witness) << "\n";
      if (side->countermodel) std::cout << dir << " countermodel " << dump_model(*side->countermodel) << "\n";
    }
  }
  return v.holds ? kHolds : kFails;
}

int cmd_eval(const Config& cfg, const std::string& q_path, const std::string& m_path) {
  Query q = load_query(cfg, q_path);
  RelModel m = load_model(read_file(m_path), q.sig);
  Relation r = std::holds_alternative<Term>(q.value) ? eval_gcq(std::get<Term>(q.value), m)
                                                     : ccq::eval_ccq(std::get<ccq::Judgment>(q.value), m);
  std::cout << dump_relation(r, m.carrier()) << "\n";
  return kHolds;
}

std::set<Tuple> flattened(const Relation& r) {
  std::set<Tuple> out;
  for (const auto& [a, b] : r.pairs()) {
    Tuple t = a;
    t.insert(t.end(), b.begin(), b.end());
    out.insert(t);
  }
  return out;
}

int cmd_translate(const Config& cfg, const std::string& q_path, bool verify) {
  Query q = load_query(cfg, q_path);
  std::string output;
  std::size_t mismatches = 0;
  std::mt19937_64 rng(cfg.seed);
  if (auto* j = std::get_if<ccq::Judgment>(&q.value)) {
    Term t = theta(*j);
    output = print_gcq(t);
    for (std::size_t i = 0; verify && i <= cfg.trials; ++i) {
      RelModel m = i == 0 ? RelModel(q.sig) : random_model(q.sig, cfg.max_carrier, rng);
      mismatches += flattened(ccq::eval_ccq(*j, m)) != flattened(eval_gcq(t, theta_model(m)));
    }
  } else {
    Term t = std::get<Term>(q.value);
    TwoSidedJudgment two = lambda(t);
    output = to_string(two);
    ccq::Judgment single = two.single();
    for (std::size_t i = 0; verify && i <= cfg.trials; ++i) {
      RelModel m = i == 0 ? RelModel(q.sig) : random_model(q.sig, cfg.max_carrier, rng);
      mismatches += flattened(eval_gcq(t, m)) != flattened(ccq::eval_ccq(single, lambda_model(m)));
    }
  }
  if (cfg.format == "json") {
    json out{{"output", output}};
    if (verify) out["verify"] = {{"models", cfg.trials + 1}, {"mismatches", mismatches}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << output << "\n";
    if (verify) std::cout << "verify: " << cfg.trials + 1 << " models, " << mismatches << " mismatches\n";
  }
  return mismatches == 0 ? kHolds : kFails;
}

int cmd_export(const Config& cfg, const std::string& q_path) {
  Cospan c = term_to_cospan(load_query(cfg, q_path).term());
  if (cfg.format == "json")
    std::cout << dump_cospan(c) << "\n";
  else
    std::cout << cospan_to_dot(c);
  return kHolds;
}

Signature default_axiom_signature() {
  Signature sig;
  sig.add("P", {1, 0});
  sig.add("Q", {2, 0});
  sig.add("R", {1, 1});
  sig.add("T", {2, 1});
  return sig;
}

int cmd_axioms_verify(const Config& cfg) {
  Signature sig = cfg.sig_path.empty() ? default_axiom_signature() : load_signature(read_file(cfg.sig_path));
  bool all = true;
  json rows = json::array();
  for (const AxiomEntry& a : axiom_catalog(sig)) {
    AxiomReport sem = verify_axiom_semantic(a, sig, cfg.trials, cfg.max_carrier, cfg.seed);
    bool graphical = verify_axiom_graphical(a).passed;
    bool ok = sem.passed && graphical;
    all = all && ok;
    if (cfg.format == "json") {
      json row{{"name", a.name}, {"passed", ok}, {"semantic", sem.passed}, {"graphical", graphical},
               {"models", sem.models_checked}};
      if (sem.countermodel) row["countermodel"] = model_to_json(*sem.countermodel);
      rows.push_back(row);
    } else {
      std::cout << (ok ? "PASS " : "FAIL ") << a.name;
      if (!graphical) std::cout << " graphical";
      if (sem.countermodel) std::cout << " countermodel " << dump_model(*sem.countermodel);
      std::cout << "\n";
    }
  }
  if (cfg.format == "json") std::cout << rows.dump() << "\n";
  return all ? kHolds : kFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graphical conjunctive queries: containment, evaluation, translation"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--sig", cfg.sig_path, "signature JSON file; overrides signature: headers");
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json", "dot"}));
  app.add_option("--budget", cfg.budget, "search step budget")->check(CLI::PositiveNumber);

  std::string a_path, b_path, mode = "inclusion";
  auto* check = app.add_subcommand("check", "decide c <= d, or c == d with --mode equivalence");
  check->add_option("c", a_path)->required()->check(CLI::ExistingFile);
  check->add_option("d", b_path)->required()->check(CLI::ExistingFile);
  check->add_option("--mode", mode)->check(CLI::IsMember({"inclusion", "equivalence"}));

  std::string q_path, m_path;
  auto* eval = app.add_subcommand("eval", "evaluate a term or judgment in a model");
  eval->add_option("query", q_path)->required()->check(CLI::ExistingFile);
  eval->add_option("model", m_path)->required()->check(CLI::ExistingFile);

  bool verify = false;
  auto* translate = app.add_subcommand("translate", "judgment to term, or term to two-sided judgment");
  translate->add_option("query", q_path)->required()->check(CLI::ExistingFile);
  translate->add_flag("--verify", verify, "compare both sides on random models");
  translate->add_option("--seed", cfg.seed);
  translate->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);

  auto* dot = app.add_subcommand("export-dot", "DOT rendering of the compiled cospan");
  dot->add_option("query", q_path)->required()->check(CLI::ExistingFile);

  auto* axioms = app.add_subcommand("axioms-verify", "check every axiom semantically and graphically");
  axioms->add_option("--seed", cfg.seed);
  axioms->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
  axioms->add_option("--max-carrier", cfg.max_carrier);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (*check) return cmd_check(cfg, a_path, b_path, mode);
    if (*eval) return cmd_eval(cfg, q_path, m_path);
    if (*translate) return cmd_translate(cfg, q_path, verify);
    if (*dot) return cmd_export(cfg, q_path);
    if (*axioms) return cmd_axioms_verify(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
