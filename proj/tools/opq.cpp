// opq: command-line front end. Reports are JSON on stdout (or --out); exit codes
// 0 = all checks pass, 1 = violations, 2 = unreadable input, 3 = internal error.

#include "opq/cherns.hpp"
#include "opq/envelope.hpp"
#include "opq/errors.hpp"
#include "opq/fieldtheory.hpp"
#include "opq/io.hpp"
#include "opq/operad.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace opq;
using io::json;

namespace {

struct Result {
  json report;
  bool ok = true;
};

json sparse_json(const SparseVector &v) {
  json out = json::array();
  for (const auto &[k, q] : v) out.push_back({k, q.str()});
  return out;
}

json dims_json(const std::map<int, std::size_t> &dims) {
  json out = json::object();
  for (const auto &[n, k] : dims) out[std::to_string(n)] = k;
  return out;
}

json homology_json(const ChainComplex &c) {
  json out = json::object();
  for (const auto &[n, k] : c.dims()) out[std::to_string(n)] = homology(c, n).dimension;
  return out;
}

json relation_report_json(const RelationReport &r) {
  json v = json::array();
  for (const auto &x : r.violations)
    v.push_back({{"relation", x.relation}, {"inputs", x.inputs}, {"difference", sparse_json(x.difference)}});
  return {{"checked", r.checked}, {"skipped", r.skipped}, {"violations", v}};
}

json causality_json(const CausalityReport &r) {
  json v = json::array();
  for (const auto &x : r.violations)
    v.push_back({{"f1", x.f1}, {"f2", x.f2}, {"x", x.x}, {"y", x.y}, {"r1", sparse_json(x.r1)}, {"r2", sparse_json(x.r2)}});
  return {{"ok", r.ok()}, {"pairs", r.pairs}, {"checked", r.checked}, {"skipped", r.skipped}, {"violations", v}};
}

json w_json(const WReport &r) {
  json entries = json::array();
  for (const auto &e : r.entries) {
    json j = {{"morphism", e.morphism}, {"ok", e.ok}, {"detail", e.detail}};
    j["stage"] = e.stage ? json(*e.stage) : json(nullptr);
    j["witness_degree"] = e.witness_degree ? json(*e.witness_degree) : json(nullptr);
    entries.push_back(j);
  }
  return {{"ok", r.ok()}, {"entries", entries}};
}

json objects_json(const FieldTheory &ft) {
  json out = json::object();
  for (const auto &[name, a] : ft.algebras) out[name] = {{"dims", dims_json(a.carrier().dims())}, {"total", a.dim()}};
  return out;
}

DgAlgebra ulie_from_document(const json &j) {
  if (io::classify(j) == io::DocumentKind::Presymplectic) return heisenberg(io::presymplectic_from_json(j));
  DgAlgebra a = io::algebra_from_json(j);
  if (a.kind() != OperadKind::uLie) throw ParseError("/kind: expected a uLie algebra or a presymplectic complex");
  return a;
}

Relation relation_from_text(const std::string &text, OperadKind kind) {
  auto eq = text.find('=');
  if (eq == std::string::npos) {
    for (const auto &r : named_presentation(kind).relations)
      if (r.name == text) return r;
    throw ParseError("--relation: no relation named '" + text + "' for kind " + to_string(kind));
  }
  return {text, parse_combination(text.substr(0, eq)), parse_combination(text.substr(eq + 1))};
}

Result validate(const std::string &path, const std::string &relation) {
  json j = io::load_file(path);
  Result r;
  json problems = json::array();
  auto add = [&](const std::vector<std::string> &ps) {
    for (const auto &p : ps) problems.push_back(p);
  };
  switch (io::classify(j)) {
  case io::DocumentKind::Complex: {
    ComplexReport c = validate_complex(io::complex_from_json(j));
    for (int n : c.failing_degrees) problems.push_back("d∘d != 0 at degree " + std::to_string(n));
    break;
  }
  case io::DocumentKind::Algebra: {
    DgAlgebra a = io::algebra_from_json(j);
    if (!relation.empty()) {
      OperadPresentation p = named_presentation(a.kind());
      RelationReport rr = check_relation(relation_from_text(relation, a.kind()), a, &p.alphabet);
      r.report["relations"] = relation_report_json(rr);
      r.ok = rr.ok();
    } else {
      AlgebraReport ar = validate_algebra(a);
      add(ar.problems);
      r.report["relations"] = relation_report_json(ar.relations);
      r.ok = ar.relations.ok();
    }
    break;
  }
  case io::DocumentKind::Presymplectic:
    add(validate_presymplectic(io::presymplectic_from_json(j)).problems);
    break;
  case io::DocumentKind::Theory:
    add(validate_theory(io::theory_from_json(j)).problems);
    break;
  case io::DocumentKind::Surface:
    add(validate_surface(io::surface_from_json(j)).problems);
    break;
  case io::DocumentKind::Diagram:
    try {
      add(validate_theory(build_bcs(io::diagram_from_json(j))).problems);
    } catch (const StructuralError &e) {
      problems.push_back(e.what());
    }
    break;
  case io::DocumentKind::Unknown:
    throw ParseError(path + ": unrecognized document");
  }
  r.ok = r.ok && problems.empty();
  if (!problems.empty()) r.report["problems"] = problems;
  r.report["valid"] = r.ok;
  return r;
}

Result envelope_dims(const std::string &path, std::size_t n) {
  DgAlgebra a = ulie_from_document(io::load_file(path));
  TruncatedEnvelope env(a, n);
  Result r;
  json stages = json::array();
  for (std::size_t k = 0; k <= n; ++k) {
    std::map<int, std::size_t> dims;
    auto basis = env.stage_basis(k);
    for (const auto &m : basis) ++dims[env.degree(m)];
    auto oracle = filtration_dim(a, k);
    std::erase_if(oracle, [](const auto &kv) { return kv.second == 0; });
    bool agree = oracle == dims;
    r.ok = r.ok && agree;
    stages.push_back({{"stage", k}, {"dims", dims_json(dims)}, {"total", basis.size()}, {"oracle_agrees", agree}});
  }
  r.report = {{"generators", env.generator_count()}, {"stages", stages}, {"ok", r.ok}};
  return r;
}

Result ccr_report(const std::string &path, std::size_t n) {
  PresymplecticComplex v = io::presymplectic_from_json(io::load_file(path));
  TruncatedEnvelope env = ccr(v, n);
  Result r;
  json gens = json::object(), comms = json::object();
  std::map<std::size_t, std::size_t> carrier_of; // generator -> carrier flat index
  for (std::size_t k = 0; k < v.carrier.total_dim(); ++k)
    for (std::size_t g = 0; g < env.generator_count(); ++g)
      if (env.generators()[g] == heisenberg_index(v.carrier, k)) carrier_of[g] = k;
  for (std::size_t g = 0; g < env.generator_count(); ++g)
    gens[env.monomial_str({g})] = {{"degree", env.generator_degree(g)}, {"basis", carrier_of.at(g)}};
  for (std::size_t i = 0; i < env.generator_count(); ++i)
    for (std::size_t j = i; j < env.generator_count(); ++j) {
      if (n < 2) break;
      int di = env.generator_degree(i), dj = env.generator_degree(j);
      PBWElement c = env.multiply(env.generator(i), env.generator(j));
      add_scaled(c, env.multiply(env.generator(j), env.generator(i)), Rational((di * dj) % 2 == 0 ? -1 : 1));
      PBWElement expect;
      Rational w = v.pair(carrier_of.at(i), carrier_of.at(j));
      if (!w.is_zero()) expect = {{Monomial{}, w}};
      r.ok = r.ok && c == expect;
      comms["[" + env.monomial_str({i}) + "," + env.monomial_str({j}) + "]"] = env.element_str(c);
    }
  std::map<int, std::size_t> dims;
  for (const auto &m : env.stage_basis(n)) ++dims[env.degree(m)];
  r.report = {{"generators", gens}, {"commutators", comms}, {"stage_dims", dims_json(dims)}, {"ok", r.ok}};
  return r;
}

FieldTheory load_theory(const std::string &path, std::optional<std::size_t> n) {
  FieldTheory ft = io::theory_from_json(io::load_file(path));
  return n ? quantize(ft, *n) : ft;
}

Result causality(const FieldTheory &ft) {
  CausalityReport c = check_causality(ft);
  return {causality_json(c), c.ok()};
}

Result quantize_report(const FieldTheory &lft, std::size_t n, const std::vector<std::string> &w, WMode mode) {
  FieldTheory q = quantize(lft, n);
  TheoryReport t = validate_theory(q);
  CausalityReport c = check_causality(q);
  Result r;
  r.report = {{"n", n}, {"objects", objects_json(q)}, {"valid", t.ok()}, {"causality", causality_json(c)}};
  if (!t.ok()) r.report["problems"] = t.problems;
  r.ok = t.ok() && c.ok();
  if (!w.empty()) {
    WReport wr = check_w_constancy(q, w, mode);
    r.report["w"] = w_json(wr);
    r.ok = r.ok && wr.ok();
  }
  return r;
}

Result check_w(const FieldTheory &ft, const std::vector<std::string> &w, WMode mode) {
  WReport wr = check_w_constancy(ft, w, mode);
  return {w_json(wr), wr.ok()};
}

Result cs_homology(const std::string &path) {
  return {homology_json(cs_complex(io::surface_from_json(io::load_file(path)))), true};
}

Result cs_pairing(const std::string &path) {
  PresymplecticComplex v = cs_presymplectic(io::surface_from_json(io::load_file(path)));
  PresymplecticReport rep = validate_presymplectic(v);
  json out = io::to_json(v);
  out["valid"] = rep.problems.empty();
  if (!rep.problems.empty()) out["problems"] = rep.problems;
  return {out, rep.problems.empty()};
}

Result cs_h0_report(const std::string &path, std::size_t n) {
  HomologyCcrReport h = compare_h0_with_ccr(io::surface_from_json(io::load_file(path)), n);
  return {{{"h0_lie", h.h0_lie},
           {"ccr_dim", h.ccr_dim},
           {"h0_quantized", h.h0_quantized},
           {"induced_rank", h.induced_rank},
           {"injective", h.injective()}},
          h.injective()};
}

void emit(const json &report, const std::string &out) {
  std::string text = report.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw ParseError(out + ": cannot write");
  f << text;
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Operadic quantization toolkit"};
  app.require_subcommand(1);
  std::string input, out, relation, mode_name = "strict", w_list;
  std::size_t n = 2;
  std::optional<std::size_t> opt_n;

  auto with_out = [&](CLI::App *c) { c->add_option("--out", out, "write the report to a file"); };

  auto *validate_cmd = app.add_subcommand("validate", "validate a complex, algebra, theory, surface or diagram");
  validate_cmd->add_option("file", input)->required();
  validate_cmd->add_option("--relation", relation, "check one relation (name or 'lhs = rhs')");
  with_out(validate_cmd);

  auto *homology_cmd = app.add_subcommand("homology", "homology dimensions of a complex");
  homology_cmd->add_option("file", input)->required();
  with_out(homology_cmd);

  auto *dims_cmd = app.add_subcommand("envelope-dims", "PBW basis counts per filtration stage");
  dims_cmd->add_option("--algebra", input)->required();
  dims_cmd->add_option("--n", n)->required();
  with_out(dims_cmd);

  auto *ccr_cmd = app.add_subcommand("ccr", "commutators in the truncated CCR algebra");
  ccr_cmd->add_option("file", input)->required();
  ccr_cmd->add_option("--n", n)->required();
  with_out(ccr_cmd);

  auto *caus_cmd = app.add_subcommand("check-causality", "causality of a theory (quantized first with --n)");
  caus_cmd->add_option("file", input)->required();
  caus_cmd->add_option("--n", opt_n);
  with_out(caus_cmd);

  auto *quant_cmd = app.add_subcommand("quantize", "quantize a linear theory and check it");
  quant_cmd->add_option("file", input)->required();
  quant_cmd->add_option("--n", n)->required();
  quant_cmd->add_option("--w", w_list, "comma-separated morphisms for W-constancy");
  quant_cmd->add_option("--mode", mode_name)->check(CLI::IsMember({"strict", "homotopy"}));
  with_out(quant_cmd);

  auto *w_cmd = app.add_subcommand("check-w", "W-constancy of a theory (quantized first with --n)");
  w_cmd->add_option("file", input)->required();
  w_cmd->add_option("--w", w_list)->required();
  w_cmd->add_option("--mode", mode_name)->check(CLI::IsMember({"strict", "homotopy"}));
  w_cmd->add_option("--n", opt_n);
  with_out(w_cmd);

  auto *cs_cmd = app.add_subcommand("cs", "Chern-Simons surfaces and diagrams");
  cs_cmd->require_subcommand(1);
  auto *cs_hom = cs_cmd->add_subcommand("homology", "homology of the shifted cochains of a surface");
  cs_hom->add_option("file", input)->required();
  with_out(cs_hom);
  auto *cs_pair = cs_cmd->add_subcommand("pairing", "presymplectic pairing of a surface");
  cs_pair->add_option("file", input)->required();
  with_out(cs_pair);
  auto *cs_h0 = cs_cmd->add_subcommand("h0", "degree-0 homology of the quantized algebra against CCR");
  cs_h0->add_option("file", input)->required();
  cs_h0->add_option("--n", n)->required();
  with_out(cs_h0);
  auto *cs_quant = cs_cmd->add_subcommand("quantize", "quantize the theory of a surface diagram");
  cs_quant->add_option("file", input)->required();
  cs_quant->add_option("--n", n)->required();
  cs_quant->add_option("--w", w_list);
  cs_quant->add_option("--mode", mode_name)->check(CLI::IsMember({"strict", "homotopy"}));
  with_out(cs_quant);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  WMode mode = mode_name == "homotopy" ? WMode::Homotopy : WMode::Strict;
  try {
    Result r;
    if (*validate_cmd) r = validate(input, relation);
    else if (*homology_cmd) r = {homology_json(io::complex_from_json(io::load_file(input))), true};
    else if (*dims_cmd) r = envelope_dims(input, n);
    else if (*ccr_cmd) r = ccr_report(input, n);
    else if (*caus_cmd) r = causality(load_theory(input, opt_n));
    else if (*quant_cmd) r = quantize_report(load_theory(input, std::nullopt), n, split_list(w_list), mode);
    else if (*w_cmd) r = check_w(load_theory(input, opt_n), split_list(w_list), mode);
    else if (*cs_hom) r = cs_homology(input);
    else if (*cs_pair) r = cs_pairing(input);
    else if (*cs_h0) r = cs_h0_report(input, n);
    else if (*cs_quant)
      r = quantize_report(build_bcs(io::diagram_from_json(io::load_file(input))), n, split_list(w_list), mode);
    emit(r.report, out);
    return r.ok ? 0 : 1;
  } catch (const ParseError &e) {
    std::string what = e.what();
    std::cerr << "parse error: " << (what.starts_with("/") ? input + ":" + what : what) << "\n";
    return 2;
  } catch (const StructuralError &e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const TruncationOverflow &e) {
    std::cerr << "truncation overflow: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
