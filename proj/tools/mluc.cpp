#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mluc/errors.hpp"
#include "mluc/frontend.hpp"
#include "mluc/oracle.hpp"
#include "mluc/partition.hpp"
#include "mluc/solver.hpp"
#include "mluc/tgraph.hpp"

namespace {

using namespace mluc;
using nlohmann::json;

enum Exit { kSat = 0, kUnsat = 1, kError = 2 };

struct Options {
  std::string format = "text";
  std::string inline_formula;
  std::string input;
  std::string model_file;
  SolverLimits limits;
  OracleConfig oracle;
  bool dump_certificate = false;
  bool dump_graph = false;
};

std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), {}}; }

std::string read_file(const std::string& path) {
  if (path == "-") return read_all(std::cin);
  std::ifstream f(path);
  if (!f) throw Error("cannot open '" + path + "'");
  return read_all(f);
}

std::string formula_text(const Options& o) {
  const bool inline_given = !o.inline_formula.empty();
  const bool file_given = !o.input.empty();
  if (inline_given == file_given) throw Error("give exactly one of -e FORMULA or an input file ('-' for stdin)");
  return inline_given ? o.inline_formula : read_file(o.input);
}

SetAssignment load_model(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw BadModel(std::string("model file is not JSON: ") + e.what());
  }
  // A verdict printed by `solve --format json` is accepted as is.
  if (j.is_object() && j.contains("model")) j = j["model"];
  return model_from_json(j);
}

void print_model(std::ostream& out, const SetAssignment& m) {
  for (const auto& [v, s] : m) out << "  " << v << " = " << s.str() << "\n";
}

int cmd_solve(const Options& o, std::ostream& out) {
  const FormulaPtr f = parse(formula_text(o));
  const Verdict v = solve(*f, o.limits);
  if (o.format == "json") {
    json j = to_json(v);
    if (!o.dump_certificate && !v.cycle) j.erase("certificate");  // cycle ids refer to its places
    if (o.dump_graph && v.cert) j["graph"] = to_dot(v.cert->graph);
    out << j.dump(2) << "\n";
  } else if (o.format == "dot") {
    if (v.cert) out << to_dot(v.cert->graph);
  } else {
    out << "status: " << status_name(v.status) << "\n";
    if (v.model) {
      out << "model:\n";
      print_model(out, *v.model);
    }
    if (v.cycle) out << "cycle: " << to_json(*v.cycle).dump() << "\n";
    if (o.dump_certificate && v.cert) out << "certificate: " << to_json(*v.cert).dump() << "\n";
    if (o.dump_graph && v.cert) out << to_dot(v.cert->graph);
  }
  return v.status == Verdict::Status::Unsat ? kUnsat : kSat;
}

void collect_atoms(const Formula& f, std::vector<Atom>& out) {
  if (f.kind == Formula::Kind::AtomF) {
    out.push_back(f.atom);
    return;
  }
  if (f.lhs) collect_atoms(*f.lhs, out);
  if (f.rhs) collect_atoms(*f.rhs, out);
}

int cmd_check(const Options& o, std::ostream& out) {
  if (o.model_file.empty()) throw Error("check needs --model FILE");
  const FormulaPtr f = parse(formula_text(o));
  const SetAssignment m = load_model(o.model_file);
  std::vector<Atom> atoms;
  collect_atoms(*f, atoms);
  const bool truth = eval_formula(m, *f);
  if (o.format == "json") {
    json rows = json::array();
    for (const auto& a : atoms) rows.push_back({{"atom", print(a)}, {"value", eval_atom(m, a)}});
    out << json{{"atoms", rows}, {"formula", truth}}.dump(2) << "\n";
  } else {
    for (const auto& a : atoms) out << (eval_atom(m, a) ? "true " : "false") << "  " << print(a) << "\n";
    out << "formula: " << (truth ? "true" : "false") << "\n";
  }
  return truth ? kSat : kUnsat;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  const FormulaPtr f = parse(formula_text(o));
  const auto vars = vars_of(*f);
  std::optional<SetAssignment> found;
  for (const auto& branch : to_dnf(*f, o.limits.dnf_cap)) {
    found = oracle_search(normalize_branch(branch, vars), o.oracle);
    if (found) break;
  }
  if (found) {
    SetAssignment restricted;
    for (const auto& v : vars) restricted[v] = found->at(v);
    found = std::move(restricted);
  }
  if (o.format == "json") {
    out << (found ? model_to_json(*found) : json{{"model", nullptr}}).dump(2) << "\n";
  } else if (found) {
    out << "model:\n";
    print_model(out, *found);
  } else {
    out << "none within bounds\n";
  }
  return found ? kSat : kUnsat;
}

int cmd_graph(const Options& o, std::ostream& out) {
  std::optional<PlaceCertificate> cert;
  if (!o.model_file.empty()) {
    const SetAssignment m = load_model(o.model_file);
    std::vector<std::string> vars;
    for (const auto& [v, _] : m) vars.push_back(v);
    cert = certificate_of(m, vars);
  } else {
    const Verdict v = solve(*parse(formula_text(o)), o.limits);
    cert = v.cert;
  }
  if (!cert) {
    out << (o.format == "json" ? "null\n" : "");
    return kUnsat;
  }
  if (o.format == "json") out << to_json(*cert).dump(2) << "\n";
  else out << to_dot(cert->graph);
  return kSat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedure for Boolean set formulas with unordered Cartesian product"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "formula file, or - for stdin");
    sub->add_option("-e,--expr", o.inline_formula, "inline formula");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json", "dot"}));
    sub->add_option("--max-vars", o.limits.max_vars, "variable limit per branch")->check(CLI::PositiveNumber);
    sub->add_option("--dnf-cap", o.limits.dnf_cap, "DNF branch limit")->check(CLI::PositiveNumber);
    sub->add_option("--budget", o.limits.element_budget, "builder element budget")->check(CLI::PositiveNumber);
    sub->add_option("--oracle-rank", o.oracle.max_rank, "oracle maximal rank")->check(CLI::PositiveNumber);
    sub->add_option("--oracle-universe", o.oracle.universe_cap, "oracle universe size")->check(CLI::PositiveNumber);
    sub->add_option("--oracle-vars", o.oracle.var_cap, "oracle variable cap")->check(CLI::PositiveNumber);
    sub->add_flag("--dump-certificate", o.dump_certificate, "print the place certificate");
    sub->add_flag("--dump-graph", o.dump_graph, "print the certificate graph as DOT");
  };
  auto* solve_cmd = app.add_subcommand("solve", "decide a formula");
  auto* check_cmd = app.add_subcommand("check", "evaluate a formula under a model");
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force search for a small model");
  auto* graph_cmd = app.add_subcommand("graph", "print the certificate graph of a formula or model");
  for (auto* sub : {solve_cmd, check_cmd, oracle_cmd, graph_cmd}) add_common(sub);
  for (auto* sub : {check_cmd, graph_cmd}) sub->add_option("--model", o.model_file, "model JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*solve_cmd) return cmd_solve(o, std::cout);
    if (*check_cmd) return cmd_check(o, std::cout);
    if (*oracle_cmd) return cmd_oracle(o, std::cout);
    return cmd_graph(o, std::cout);
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const SizeLimit& e) {
    std::cerr << "size limit: " << e.what() << "\n";
  } catch (const BadModel& e) {
    std::cerr << "bad model: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kError;
}
