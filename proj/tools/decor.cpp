// Command-line front door: check derivations, decide equations, normalize
// terms, reduce to pure goals, evaluate in finite models, dualize artifacts.
//
// Exit codes are the machine contract: 0 success / equivalent, 1 rejected /
// not-equivalent, 2 parse or type error, 3 unknown verdict, 4 outside the
// supported fragment.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "decor/exc_theory.hpp"
#include "decor/kernel_io.hpp"
#include "decor/parse.hpp"
#include "decor/semantics.hpp"
#include "decor/state_theory.hpp"

using namespace decor;

namespace {

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'", 0, 0);
  out << text;
}

// One self-describing document, key:value lines in fixed order; multi-line
// values (models, derivations) follow their key verbatim.
struct Report {
  bool structured = false;
  std::string command;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, std::string>> fields;

  void put(const std::string& k, const std::string& v) { fields.emplace_back(k, v); }

  int finish(const std::string& verdict, int code) {
    long ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    if (structured) {
      std::cout << "command: " << command << "\n";
      std::cout << "verdict: " << verdict << "\n";
      for (auto& [k, v] : fields)
        std::cout << k << ": " << (v.find('\n') != std::string::npos ? "\n" + v : v + "\n");
      std::cout << "time-ms: " << ms << "\n";
    } else {
      std::cout << command << ": " << verdict << "\n";
      for (auto& [k, v] : fields) std::cout << k << ": " << (v.find('\n') != std::string::npos ? "\n" + v : v + "\n");
    }
    return code;
  }
};

Theory parseTheory(const std::string& s) {
  if (s == "com") return Theory::Com;
  if (s == "mon") return Theory::Mon;
  if (s == "st") return Theory::St;
  if (s == "exc") return Theory::Exc;
  throw ParseError("unknown theory '" + s + "'", 0, 0);
}

int cmdCheck(const std::string& sigFile, const std::string& drvFile, Report& rep) {
  Signature sig = parseSignature(readFile(sigFile));
  Derivation d = parseDerivation(readFile(drvFile), sig);
  CheckResult r = checkDerivation(d, sig);
  rep.put("steps", std::to_string(d.steps.size()));
  if (r.ok) return rep.finish("ok", 0);
  rep.put("failed-step", std::to_string(r.failedStep));
  rep.put("message", r.message);
  return rep.finish("rejected", 1);
}

int cmdDecide(const std::string& sigFile, const std::string& eqText, Theory th, OracleMode mode, long maxSize,
              const std::string& emitCert, Report& rep) {
  if (th != Theory::St && th != Theory::Exc)
    throw FragmentError("decide covers the state and exceptions theories only");
  Signature sig = parseSignature(readFile(sigFile));
  Equation e = parseEquation(eqText, sig);

  Verdict v;
  std::optional<Derivation> cert;
  std::optional<Equation> failedPure;
  std::string modelText, note;
  if (th == Theory::St) {
    DecideResult r = decide(e, sig, mode, maxSize);
    v = r.verdict;
    cert = r.cert;
    failedPure = r.failedPure;
    if (r.countermodel) modelText = showModel(*r.countermodel);
    note = r.note;
  } else {
    ExcDecideResult r = decide_exc_core(e, sig, mode, maxSize);
    v = r.verdict;
    cert = r.cert;
    failedPure = r.failedPure;
    if (r.countermodel) modelText = showModel(*r.countermodel);
    note = r.note;
  }

  if (!note.empty()) rep.put("note", note);
  if (v == Verdict::Equivalent) {
    if (!emitCert.empty() && cert) {
      writeFile(emitCert, printDerivation(*cert));
      rep.put("certificate", emitCert);
    }
    return rep.finish("equivalent", 0);
  }
  if (v == Verdict::NotEquivalent) {
    if (failedPure) rep.put("failed-pure", show(*failedPure));
    if (!modelText.empty()) rep.put("countermodel", modelText);
    return rep.finish("not-equivalent", 1);
  }
  return rep.finish("unknown", 3);
}

int cmdNormalize(const std::string& sigFile, const std::string& termText, const std::string& emitCert, Report& rep) {
  Signature sig = parseSignature(readFile(sigFile));
  Term t = parseTerm(termText, sig);
  ModifierNormalization r = normalize_modifier(t, sig);
  rep.put("canonical", show(r.form.term()));
  rep.put("shape", r.form.isAccessor ? "accessor" : "modifier");
  if (!emitCert.empty()) {
    writeFile(emitCert, printDerivation(r.cert));
    rep.put("certificate", emitCert);
  }
  return rep.finish("ok", 0);
}

int cmdReduce(const std::string& sigFile, const std::string& eqText, const std::string& emitCert, Report& rep) {
  Signature sig = parseSignature(readFile(sigFile));
  Equation e = parseEquation(eqText, sig);
  ReductionResult r = reduce_equation(e, sig);
  rep.put("pure-goals", std::to_string(r.pureEquations.size()));
  for (auto& pe : r.pureEquations) rep.put("pure-goal", show(pe));
  if (!emitCert.empty()) {
    writeFile(emitCert, printDerivation(r.forward));
    writeFile(emitCert + ".backward", printDerivation(r.backward));
    rep.put("certificate", emitCert);
    rep.put("certificate-backward", emitCert + ".backward");
  }
  return rep.finish("ok", 0);
}

int cmdEval(const std::string& sigFile, const std::string& termText, const std::string& modelFile, Report& rep) {
  Signature sig = parseSignature(readFile(sigFile));
  Term t = parseTerm(termText, sig);
  Model m = parseModel(readFile(modelFile), sig);
  rep.put("table", showTable(t, m));
  return rep.finish("ok", 0);
}

int cmdDualize(const std::string& sigFile, const std::string& drvFile, const std::string& outFile, Report& rep) {
  Signature sig = parseSignature(readFile(sigFile));
  std::string text;
  if (drvFile.empty()) {
    text = showSignature(dualSignature(sig));
  } else {
    text = printDerivation(dualDerivation(parseDerivation(readFile(drvFile), sig)));
  }
  if (!outFile.empty()) {
    writeFile(outFile, text);
    rep.put("output", outFile);
  } else {
    rep.put("dual", text);
  }
  return rep.finish("ok", 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decorated-logic toolkit"};
  app.require_subcommand(1);

  std::string sigFile, drvFile, eqText, termText, modelFile, emitCert, outFile;
  std::string theory = "st", oracle = "syntactic", format = "text";
  long maxSize = 3;

  auto addCommon = [&](CLI::App* c) {
    c->add_option("--format", format, "text | structured")->check(CLI::IsMember({"text", "structured"}));
  };

  auto* check = app.add_subcommand("check", "replay a derivation file through the kernel");
  check->add_option("sig", sigFile, "signature file")->required();
  check->add_option("drv", drvFile, "derivation file")->required();
  addCommon(check);

  auto* dec = app.add_subcommand("decide", "decide an equation in the state or exceptions theory");
  dec->add_option("sig", sigFile)->required();
  dec->add_option("eq", eqText, "equation text")->required();
  dec->add_option("--theory", theory)->check(CLI::IsMember({"com", "mon", "st", "exc"}));
  dec->add_option("--oracle", oracle)->check(CLI::IsMember({"syntactic", "semantic"}));
  dec->add_option("--max-size", maxSize, "carrier size bound for model search");
  dec->add_option("--emit-cert", emitCert, "write the certificate here");
  addCommon(dec);

  auto* nrm = app.add_subcommand("normalize", "canonical form of a state term, with certificate");
  nrm->add_option("sig", sigFile)->required();
  nrm->add_option("term", termText)->required();
  nrm->add_option("--emit-cert", emitCert);
  addCommon(nrm);

  auto* red = app.add_subcommand("reduce", "reduce an equation to pure goals");
  red->add_option("sig", sigFile)->required();
  red->add_option("eq", eqText)->required();
  red->add_option("--emit-cert", emitCert);
  addCommon(red);

  auto* ev = app.add_subcommand("eval", "tabulate a term in a finite model");
  ev->add_option("sig", sigFile)->required();
  ev->add_option("term", termText)->required();
  ev->add_option("--model", modelFile, "model file")->required();
  addCommon(ev);

  auto* du = app.add_subcommand("dualize", "dualize a signature, or a derivation given with it");
  du->add_option("sig", sigFile)->required();
  du->add_option("drv", drvFile, "optional derivation file to transport");
  du->add_option("--out", outFile, "write result here instead of the report");
  addCommon(du);

  CLI11_PARSE(app, argc, argv);

  Report rep;
  rep.command = app.get_subcommands().front()->get_name();
  rep.structured = (format == "structured");
  try {
    if (check->parsed()) return cmdCheck(sigFile, drvFile, rep);
    if (dec->parsed())
      return cmdDecide(sigFile, eqText, parseTheory(theory),
                       oracle == "semantic" ? OracleMode::Semantic : OracleMode::Syntactic, maxSize, emitCert, rep);
    if (nrm->parsed()) return cmdNormalize(sigFile, termText, emitCert, rep);
    if (red->parsed()) return cmdReduce(sigFile, eqText, emitCert, rep);
    if (ev->parsed()) return cmdEval(sigFile, termText, modelFile, rep);
    if (du->parsed()) return cmdDualize(sigFile, drvFile, outFile, rep);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return 2;
  } catch (const DecorationError& e) {
    std::cerr << "decoration error: " << e.what() << "\n";
    return 2;
  } catch (const FragmentError& e) {
    std::cerr << "fragment error: " << e.what() << "\n";
    return 4;
  } catch (const MissingInhabitantError& e) {
    std::cerr << "fragment error: " << e.what() << "\n";
    return 4;
  } catch (const DecorError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
