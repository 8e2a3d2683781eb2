#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qvl/annotations.hpp"
#include "qvl/assembly.hpp"
#include "qvl/kb.hpp"
#include "qvl/kb_text.hpp"
#include "qvl/project.hpp"
#include "qvl/reasoner.hpp"
#include "qvl/verifier.hpp"

namespace qvl::cli {

/// Exit codes: 0 success / all obligations satisfied, 1 violated or not derived, 2 error.
enum ExitCode : int { kOk = 0, kViolated = 1, kError = 2 };

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Loads `.kb` files (default namespace = file stem) and merges them under `root`. Without an
/// explicit root, the last loaded spec that no other loaded spec imports is used.
inline KnowledgeBase load_ontology(const std::vector<std::string>& files, const std::string& root_arg) {
  std::vector<KnowledgeBase> modules;
  for (const auto& f : files) {
    auto kbs = parse_kb(read_file(f), std::filesystem::path(f).stem().string(), f);
    for (auto& kb : kbs) modules.push_back(std::move(kb));
  }
  if (modules.empty()) throw Error("no spec found in ontology files");

  Name root;
  if (!root_arg.empty()) {
    const auto colon = root_arg.find(':');
    std::vector<Name> matches;
    for (const auto& m : modules) {
      bool hit = colon == std::string::npos ? m.name.local == root_arg : qualified(m.name) == root_arg;
      if (hit) matches.push_back(m.name);
    }
    if (matches.size() != 1) throw UnknownImport(root_arg);
    root = matches.front();
  } else {
    std::set<Name> imported;
    for (const auto& m : modules) imported.insert(m.imports.begin(), m.imports.end());
    root = modules.back().name;
    for (auto it = modules.rbegin(); it != modules.rend(); ++it)
      if (!imported.count(it->name)) {
        root = it->name;
        break;
      }
  }
  KnowledgeBase merged = merge_modules(modules, root);
  for (const auto& r : merged.rules) check_rule_safety(r);
  return merged;
}

inline int cmd_verify(const std::string& psa, const std::string& asm_file, const std::vector<std::string>& onto,
                      const std::string& root, const std::string& format, bool explain_flag, std::ostream& out,
                      std::ostream& err) {
  const std::string psa_text = read_file(psa);
  const std::string asm_text = read_file(asm_file);
  const PrincipleSolutionDoc doc = parse_annotations(psa_text, psa);
  for (const auto& w : doc.warnings) err << "warning: " << w << "\n";
  const AssemblyModel model = parse_assembly(asm_text, asm_file);
  const KnowledgeBase background = load_ontology(onto, root);

  VerificationReport report = verify_view(requirements_of(doc), assembly_to_abox(model), background);
  report.inputs.push_back({"requirements", psa, fnv1a64_digest(psa_text)});
  report.inputs.push_back({"design", asm_file, fnv1a64_digest(asm_text)});
  for (const auto& f : onto) report.inputs.push_back({"ontology", f, fnv1a64_digest(read_file(f))});

  const ReportFormat fmt = format == "machine" ? ReportFormat::Machine : ReportFormat::Text;
  out << render_report(report, fmt, RenderOptions{explain_flag});
  return report.all_satisfied() ? kOk : kViolated;
}

inline FactStore build_store(const KnowledgeBase& background, const std::string& abox_file,
                             std::vector<HornRule>& rules) {
  rules = compile_axioms(background);
  std::vector<Atom> facts;
  if (!abox_file.empty()) facts = assembly_to_abox(parse_assembly(read_file(abox_file), abox_file));
  facts.insert(facts.end(), background.assertions.begin(), background.assertions.end());
  return materialize(rules, facts);
}

inline int cmd_materialize(const std::vector<std::string>& onto, const std::string& abox, std::ostream& out) {
  std::vector<HornRule> rules;
  const FactStore store = build_store(load_ontology(onto, ""), abox, rules);
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto& j = store.justification(i);
    out << to_string(store.fact(i)) << '\t' << (j.asserted() ? std::string("asserted") : j.rule->local) << '\n';
  }
  return kOk;
}

inline int cmd_explain(const std::vector<std::string>& onto, const std::string& abox, const std::string& fact,
                       std::ostream& out) {
  const Atom goal = parse_atom(fact, AtomNamespaces{vocab::kGeometry, vocab::kDesign}, "--fact");
  if (goal.kind == AtomKind::Builtin || !is_ground(goal)) throw Error("--fact must be a ground concept or property atom");
  std::vector<HornRule> rules;
  const FactStore store = build_store(load_ontology(onto, ""), abox, rules);
  if (!entails(store, goal)) {
    out << "not derived: " << display(goal) << '\n';
    return kViolated;
  }
  std::string text;
  detail::render_proof(explain(store, goal), 0, text);
  out << text;
  return kOk;
}

inline int cmd_trace(const std::string& project, const std::string& fragment, bool up, std::ostream& out) {
  const ProjectGraph g = parse_project(read_file(project), project);
  for (const auto& f : trace(g, fragment, up ? TraceDirection::Up : TraceDirection::Down)) out << f << '\n';
  return kOk;
}

inline int cmd_check(const std::vector<std::string>& files, std::ostream& out, std::ostream& err) {
  int code = kOk;
  for (const auto& f : files) {
    try {
      const std::string ext = std::filesystem::path(f).extension().string();
      const std::string text = read_file(f);
      if (ext == ".kb") {
        for (const auto& kb : parse_kb(text, std::filesystem::path(f).stem().string(), f))
          for (const auto& r : kb.rules) check_rule_safety(r);
      } else if (ext == ".asm") {
        parse_assembly(text, f);
      } else if (ext == ".psa") {
        for (const auto& w : parse_annotations(text, f).warnings) err << "warning: " << f << ": " << w << "\n";
      } else if (ext == ".proj") {
        parse_project(text, f);
      } else {
        throw Error("unknown file type " + f);
      }
      out << "ok " << f << '\n';
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      code = kError;
    }
  }
  return code;
}

/// Entry point behind the `qvl` binary. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Qualitative verification of CAD designs against principle-solution requirements", "qvl"};
  app.require_subcommand(1);

  std::string psa, design, root, format = "text", abox, fact, project, fragment;
  std::vector<std::string> onto, files;
  bool explain_flag = false, up = false, down = false;

  auto* verify = app.add_subcommand("verify", "check every requirement against the design");
  verify->add_option("--requirements", psa, "annotated principle solution (.psa)")->required();
  verify->add_option("--design", design, "assembly description (.asm)")->required();
  verify->add_option("--ontology", onto, "knowledge-base files (.kb)")->required()->expected(1, -1);
  verify->add_option("--root", root, "root spec name");
  verify->add_option("--format", format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
  verify->add_flag("--explain", explain_flag, "include proof trees in text output");

  auto* mat = app.add_subcommand("materialize", "print the materialized fact store");
  mat->add_option("--ontology", onto, "knowledge-base files (.kb)")->required()->expected(1, -1);
  mat->add_option("--abox", abox, "assembly description (.asm)");

  auto* expl = app.add_subcommand("explain", "print the proof of one fact");
  expl->add_option("--ontology", onto, "knowledge-base files (.kb)")->required()->expected(1, -1);
  expl->add_option("--abox", abox, "assembly description (.asm)")->required();
  expl->add_option("--fact", fact, "ground atom, e.g. \"isParallelWith(leg1,leg2)\"")->required();

  auto* tr = app.add_subcommand("trace", "follow the refinement relation");
  tr->add_option("--project", project, "project description (.proj)")->required();
  tr->add_option("--fragment", fragment, "fragment id DOC#LOCAL")->required();
  auto* up_flag = tr->add_flag("--up", up, "toward earlier stages");
  auto* down_flag = tr->add_flag("--down", down, "toward later stages");
  up_flag->excludes(down_flag);

  auto* chk = app.add_subcommand("check", "parse and lint input files");
  chk->add_option("files", files, "files to check")->required()->expected(1, -1);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kError;
  }

  try {
    if (verify->parsed()) return cmd_verify(psa, design, onto, root, format, explain_flag, out, err);
    if (mat->parsed()) return cmd_materialize(onto, abox, out);
    if (expl->parsed()) return cmd_explain(onto, abox, fact, out);
    if (tr->parsed()) {
      if (!up && !down) {
        err << "error: trace needs --up or --down\n" << tr->help();
        return kError;
      }
      return cmd_trace(project, fragment, up, out);
    }
    if (chk->parsed()) return cmd_check(files, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace qvl::cli
