#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "relstab/tt.hpp"
#include "workspace.hpp"

namespace relstab::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string group, module, x, y, corpus, map, out, cache;
  std::string dump = "relstab-counterexample";
  std::string format = "text";
  std::size_t hom_index = 0;
  std::uint64_t seed = 1;
  unsigned cap_nilp = 8;
  std::size_t cap_dim = 64;
  unsigned n_max = 3;
};

// Ordered facts, printed as "key: value" (text) or "key=value" (records).
class Report {
 public:
  void fact(const std::string& key, const std::string& value) { facts_.emplace_back(key, value); }
  void fact(const std::string& key, std::size_t value) { fact(key, std::to_string(value)); }
  void fact(const std::string& key, bool value) { fact(key, std::string(value ? "true" : "false")); }
  void fact(const std::string& key, const char* value) { fact(key, std::string(value)); }

  void emit(std::ostream& out, bool records) const {
    for (const auto& [k, v] : facts_) out << k << (records ? "=" : ": ") << v << "\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> facts_;
};

class VerifyFailed : public std::runtime_error {
 public:
  explicit VerifyFailed(Counterexample c) : std::runtime_error(c.check), ce(std::move(c)) {}
  Counterexample ce;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string list(const std::vector<std::size_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

std::string points(const std::vector<Point>& pts) {
  std::string s = "[";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    s += i ? ",(" : "(";
    for (std::size_t j = 0; j < pts[i].size(); ++j) s += (j ? "," : "") + std::to_string(pts[i][j]);
    s += ")";
  }
  return s + "]";
}

std::string matrix_text(const Matrix& m) {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) s += ";";
    for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? "," : "") + std::to_string(m(i, j));
  }
  return s;
}

class Session {
 public:
  Session(const Options& o, Report& r)
      : opt(o), report(r), cache(cache_path(o)), dopts{o.seed, false} {}

  const Options& opt;
  Report& report;
  DecompCache cache;
  DecomposeOptions dopts;
  GroupPtr group;
  FieldSpec field{2};
  bool have_field = false;

  static std::optional<fs::path> cache_path(const Options& o) {
    if (const char* env = std::getenv("RELSTAB_CACHE"); env && *env) return fs::path(env);
    if (!o.cache.empty()) return fs::path(o.cache);
    return std::nullopt;
  }

  const GroupPtr& need_group() {
    if (!group) {
      if (opt.group.empty()) throw UsageError("--group is required");
      group = parse_group_file(read_text(opt.group));
    }
    return group;
  }

  GModule load_module(const std::string& path, const char* flag) {
    if (path.empty()) throw UsageError(std::string(flag) + " is required");
    GModule m = parse_module_file(read_text(path), need_group());
    if (have_field && !(m.field() == field))
      throw UsageError(std::string(flag) + ": module field differs from the other inputs");
    field = m.field();
    have_field = true;
    return m;
  }

  GModule module() { return load_module(opt.module, "--module"); }
  GModule x() { return load_module(opt.x, "--x"); }
  GModule y() { return load_module(opt.y, "--y"); }

  RelCtx ctx() { return make_ctx(module(), dopts); }

  // --map when given, otherwise hom-basis element --hom-index.
  GMap map_between(const GModule& x, const GModule& y) {
    if (!opt.map.empty()) return GMap(x, y, parse_map_file(read_text(opt.map)));
    const auto homs = hom_space(x, y);
    if (opt.hom_index >= homs.dim())
      throw UsageError("--hom-index " + std::to_string(opt.hom_index) + " out of range (dim Hom = " +
                       std::to_string(homs.dim()) + ")");
    return homs.map(opt.hom_index);
  }

  // Named corpus: --corpus file, or {k, B, Omega k, Sigma k, B(x)B, k+B} for B = --module.
  std::vector<NamedModule> corpus(const std::optional<GModule>& b) {
    std::vector<NamedModule> out;
    if (!opt.corpus.empty()) {
      const fs::path base = fs::path(opt.corpus).parent_path();
      for (const auto& p : parse_corpus_file(read_text(opt.corpus))) {
        const fs::path full = fs::path(p).is_absolute() ? fs::path(p) : base / p;
        out.push_back({fs::path(p).stem().string(), load_module(full.string(), "--corpus")});
      }
      return out;
    }
    if (!b) throw UsageError("--corpus is required");
    const GModule k = trivial_module(b->group_ptr(), b->field());
    out = {{"k", k},
           {"B", *b},
           {"Omega k", omega(k)},
           {"Sigma k", sigma(k)},
           {"B(x)B", tensor_product(*b, *b)},
           {"k+B", direct_sum_module(k, *b)}};
    return out;
  }

  void describe_module(const std::string& key, const GModule& m) {
    report.fact(key + ".dim", m.dim());
    std::vector<std::size_t> dims;
    for (const auto& s : cache.decompose(m, dopts).summands)
      for (std::size_t i = 0; i < s.multiplicity; ++i) dims.push_back(s.module.dim());
    std::sort(dims.rbegin(), dims.rend());
    report.fact(key + ".summands", list(dims));
  }

  void maybe_write(const GModule& m) {
    if (!opt.out.empty()) {
      write_text(opt.out, print_module_file(m));
      report.fact("written", opt.out);
    }
  }
};

std::string key_name(const std::string& name) {
  std::string s;
  for (char c : name) s += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return s;
}

// ---- info, decompose, tensor, homs ----

void cmd_info(Session& s) {
  const auto& g = *s.need_group();
  s.report.fact("group.degree", g.degree());
  s.report.fact("group.order", g.order());
  s.report.fact("group.generators", g.num_generators());
  s.report.fact("group.word_table", g.order());
  const unsigned p = g.order_prime();
  s.report.fact("group.prime", static_cast<std::size_t>(p));
  s.report.fact("group.p_group", p != 0 && g.is_p_group(p));
  s.report.fact("group.abelian", g.is_abelian());
  s.report.fact("group.elementary_abelian", p != 0 && g.is_elementary_abelian(p));
  if (!s.opt.module.empty()) {
    const GModule m = s.module();
    s.report.fact("module.p", static_cast<std::size_t>(m.field().p()));
    s.report.fact("module.dim", m.dim());
    s.report.fact("module.hash", std::to_string(module_hash(m)));
    if (g.is_p_group(m.field().p())) s.report.fact("module.projective", is_projective(m));
  }
}

void cmd_decompose(Session& s) {
  const GModule m = s.module();
  const Decomposition d = s.cache.decompose(m, s.dopts);
  s.report.fact("module.dim", m.dim());
  s.report.fact("summands.count", d.summands.size());
  for (std::size_t i = 0; i < d.summands.size(); ++i) {
    const auto& sm = d.summands[i];
    const std::string k = "summand." + std::to_string(i);
    s.report.fact(k + ".dim", sm.module.dim());
    s.report.fact(k + ".multiplicity", sm.multiplicity);
    s.report.fact(k + ".certificate", to_string(sm.certificate));
    s.report.fact(k + ".key", list(module_key(sm.module)));
  }
  s.report.fact("describe", describe(d));
  s.report.fact("cache.hits", s.cache.hits());
}

void cmd_tensor(Session& s) {
  const GModule t = tensor_product(s.x(), s.y());
  s.describe_module("tensor", t);
  s.maybe_write(t);
}

void cmd_homs(Session& s) {
  const auto homs = hom_space(s.x(), s.y());
  s.report.fact("hom.dim", homs.dim());
  for (std::size_t i = 0; i < homs.dim(); ++i)
    s.report.fact("hom.basis." + std::to_string(i), matrix_text(homs.basis[i]));
}

// ---- stable ----

void cmd_stable(Session& s, const std::string& sub) {
  if (sub == "omega" || sub == "sigma") {
    const GModule x = s.x();
    const GModule r = sub == "omega" ? omega(x) : sigma(x);
    s.describe_module(sub, r);
    s.maybe_write(r);
  } else if (sub == "cone") {
    const GModule x = s.x(), y = s.y();
    const GMap f = s.map_between(x, y);
    const auto t = cone_st(f);
    s.describe_module("cone", t.z);
    s.report.fact("triangle.gf_stmod_zero", is_stmod_zero(compose(t.g, t.f)));
    s.report.fact("triangle.hg_stmod_zero", is_stmod_zero(compose(t.h, t.g)));
    s.maybe_write(t.z);
  } else {
    const GModule x = s.x(), y = s.y();
    const auto st = stable_hom(x, y);
    s.report.fact("hom.dim", st.homs.dim());
    s.report.fact("stable_hom.dim", st.dim());
    s.report.fact("projective_part.dim", st.null_dim);
  }
}

// ---- rel ----

void cmd_rel(Session& s, const std::string& sub) {
  const RelCtx ctx = s.ctx();
  if (sub == "ctx") {
    s.report.fact("b.dim", ctx.b.dim());
    s.describe_module("fb", ctx.fb);
    s.report.fact("b_tensor_xi_stmod_zero",
                  is_stmod_zero(tensor_maps(GMap::identity(ctx.b), ctx.xib)));
    s.report.fact("xi_tensor_b_contractible",
                  is_contractible(ctx, tensor_maps(ctx.xib, GMap::identity(ctx.b))).contractible);
    const GModule one = trivial_module(ctx.group, ctx.field);
    s.report.fact("delta_zero", is_contractible(ctx, GMap::identity(one)).contractible);
  } else if (sub == "homs") {
    const GModule x = s.x(), y = s.y();
    const auto rh = rel_hom(ctx, x, y);
    s.report.fact("hom.dim", rh.homs.dim());
    s.report.fact("contractible.dim", rh.null_dim);
    s.report.fact("rel_hom.dim", rh.dim());
    s.report.fact("stable_hom.dim", stable_hom(x, y).dim());
  } else if (sub == "sigma") {
    const GModule x = s.x();
    const GModule sb = sigma_b(ctx, x);
    s.describe_module("sigma_b", sb);
    s.describe_module("sigma_b_inv", sigma_b_inv(ctx, x));
    s.maybe_write(sb);
  } else if (sub == "cone") {
    const GModule x = s.x(), y = s.y();
    const auto t = rel_cone(ctx, s.map_between(x, y));
    s.describe_module("x", t.x);
    s.describe_module("y", t.y);
    s.describe_module("cone", t.z);
    s.report.fact("triangle.gf_contractible", is_contractible(ctx, compose(t.g, t.f)).contractible);
    s.report.fact("triangle.hg_contractible", is_contractible(ctx, compose(t.h, t.g)).contractible);
    s.maybe_write(t.z);
  } else if (sub == "iso") {
    const GModule x = s.x(), y = s.y();
    s.report.fact("strip_and_compare", stable_b_iso(ctx, x, y));
    const auto found = find_rel_iso(ctx, x, y);
    s.report.fact("search.iso", found.iso.has_value());
    s.report.fact("search.exhaustive", found.exhaustive);
    if (found.iso) s.report.fact("search.witness", matrix_text(found.iso->matrix()));
  } else {
    const GModule x = s.x();
    const GModule r = strip_relative(ctx, x);
    s.describe_module("stripped", r);
    s.maybe_write(r);
  }
}

// ---- tt ----

std::string nilp_text(const NilpotenceResult& r) {
  if (r.order) return std::to_string(*r.order);
  if (r.witness_element) return "exceeds " + std::to_string(r.cap);
  if (r.checked_through == r.cap) return "exceeds " + std::to_string(r.cap);
  return "undetermined beyond " + std::to_string(r.checked_through);
}

void emit_universe(Session& s, const IdealUniverse& u) {
  std::vector<std::size_t> dims;
  for (const auto& m : u.members) dims.push_back(m.dim());
  s.report.fact("thick.members", list(dims));
  s.report.fact("thick.saturated", u.saturated);
  s.report.fact("thick.discarded", u.discarded);
  s.report.fact("thick.dim_cap", u.dim_cap);
}

void emit_birational(Session& s, const BirationalReport& rep) {
  s.report.fact("shape", rep.shape);
  s.report.fact("degenerate", rep.degenerate);
  s.report.fact("faithful", rep.faithful);
  s.report.fact("points", points(rep.all_points));
  s.report.fact("supp_b", points(rep.supp_b));
  s.report.fact("u", points(rep.u));
  if (rep.c) s.report.fact("c.dim", rep.c->dim());
  s.report.fact("xi_tensor_b_contractible", rep.xi_tensor_b_contractible);
  s.report.fact("b_tensor_xi_stmod_zero", rep.b_tensor_xi_stmod_zero);
  s.report.fact("xi_sq_tensor_c_stmod_zero", rep.xi_sq_tensor_c_stmod_zero);
  if (!rep.faithful) emit_universe(s, rep.universe);
  for (const auto& r : rep.rows) {
    const std::string k = "row." + key_name(r.name);
    s.report.fact(k + ".dim", r.dim);
    s.report.fact(k + ".nilpotence", nilp_text(r.nilpotence));
    s.report.fact(k + ".in_thick", r.in_thick);
    if (r.support) s.report.fact(k + ".support", points(r.support->points));
    s.report.fact(k + ".support_in_supp_b", r.support_in_supp_b);
    s.report.fact(k + ".relative_nilpotence", nilp_text(r.relative_nilpotence));
    s.report.fact(k + ".locus_inclusion", r.locus_inclusion);
    s.report.fact(k + ".agree", r.agree);
  }
  for (std::size_t i = 0; i < rep.notes.size(); ++i)
    s.report.fact("note." + std::to_string(i), rep.notes[i]);
  s.report.fact("all_agree", rep.all_agree());
}

void cmd_tt(Session& s, const std::string& sub) {
  if (sub == "support") {
    const auto sup = rank_variety_support(s.x());
    s.report.fact("support", points(sup.points));
    s.report.fact("complete", sup.complete);
    return;
  }
  const RelCtx ctx = s.ctx();
  if (sub == "nilp") {
    const GModule x = s.x();
    XiTower tower(ctx);
    const auto r = nilpotence_order(tower, x, s.opt.cap_nilp);
    s.report.fact("nilpotence", nilp_text(r));
    if (r.witness_element)
      s.report.fact("witness_element", list(ctx.group->word(*r.witness_element)));
    const auto rel = relative_nilpotence_order(tower, x, s.opt.cap_nilp);
    s.report.fact("relative_nilpotence", nilp_text(rel));
  } else if (sub == "thick") {
    std::vector<GModule> gens;
    for (const auto& nm : s.corpus(ctx.b)) gens.push_back(nm.module);
    emit_universe(s, thick_closure({ctx.b}, s.opt.cap_dim, gens, s.dopts));
  } else if (sub == "birational") {
    emit_birational(s, birational_report(ctx, s.corpus(ctx.b), s.opt.cap_nilp, s.opt.cap_dim));
  } else {
    for (const auto& d : graded_unit_dims(ctx, s.opt.n_max))
      s.report.fact("graded." + std::to_string(d.n), d.dim);
  }
}

// ---- verify ----

void verify_axioms(Session& s) {
  std::vector<NamedModule> corpus;
  if (s.opt.corpus.empty()) {
    const GroupPtr& g = s.need_group();
    const unsigned p = g->order_prime();
    const GModule k = trivial_module(g, FieldSpec(p ? p : 2));
    corpus = {{"k", k}, {"Omega k", omega(k)}, {"Sigma k", sigma(k)}};
  } else {
    corpus = s.corpus(std::nullopt);
  }
  std::size_t triangles = 0, pairs = 0;
  for (const auto& x : corpus)
    for (const auto& y : corpus) {
      const auto homs = hom_space(x.module, y.module);
      for (std::size_t i = 0; i < homs.dim(); ++i) {
        const GMap f = homs.map(i);
        const auto t = cone_st(f);
        ++triangles;
        auto fail = [&](const std::string& what, const std::optional<GModule>& w) {
          Counterexample ce{what, {{"x", x.module}, {"y", y.module}}, f.matrix(), ""};
          if (w) ce.modules.push_back({"w", *w});
          throw VerifyFailed(std::move(ce));
        };
        if (!is_stmod_zero(compose(t.g, t.f))) fail("g o f is not stmod-zero", std::nullopt);
        if (!is_stmod_zero(compose(t.h, t.g))) fail("h o g is not stmod-zero", std::nullopt);
        for (const auto& w : corpus) {
          ++pairs;
          if (!stable_les(t, w.module).exact) fail("StHom(W,-) not exact at Y", w.module);
        }
      }
    }
  s.report.fact("triangles", triangles);
  s.report.fact("triangle_w_pairs", pairs);
  s.report.fact("passed", true);
}

void verify_lemma_iso(Session& s) {
  const RelCtx ctx = s.ctx();
  const auto corpus = s.corpus(ctx.b);
  std::size_t agree = 0, total = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = i; j < corpus.size(); ++j) {
      ++total;
      const bool a = stable_b_iso(ctx, corpus[i].module, corpus[j].module);
      const auto b = find_rel_iso(ctx, corpus[i].module, corpus[j].module);
      if (b.iso && !is_rel_iso(ctx, *b.iso))
        throw VerifyFailed({"search returned a map that is not a relative iso",
                            {{"b", ctx.b}, {"x", corpus[i].module}, {"y", corpus[j].module}},
                            b.iso->matrix(), ""});
      if (a != b.iso.has_value())
        throw VerifyFailed({"strip-and-compare and inverse search disagree",
                            {{"b", ctx.b}, {"x", corpus[i].module}, {"y", corpus[j].module}},
                            std::nullopt,
                            std::string("strip_and_compare=") + (a ? "true" : "false") +
                                " search=" + (b.iso ? "true" : "false") +
                                " exhaustive=" + (b.exhaustive ? "true" : "false")});
      ++agree;
    }
  s.report.fact("pairs", total);
  s.report.fact("agree", agree);
  s.report.fact("passed", true);
}

void verify_thm_fb(Session& s) {
  const RelCtx ctx = s.ctx();
  const GModule one = trivial_module(ctx.group, ctx.field);
  const GModule fbfb = tensor_product(ctx.fb, dual_module(ctx.fb));
  if (!stable_b_iso(ctx, fbfb, one))
    throw VerifyFailed({"F_B (x) F_B^ is not stable-B-isomorphic to 1", {{"b", ctx.b}, {"fb", ctx.fb}},
                        std::nullopt, ""});
  s.report.fact("fb_invertible", true);
  std::size_t checked = 0;
  for (const auto& nm : s.corpus(ctx.b)) {
    const GModule lhs = sigma_b(ctx, nm.module);
    const GModule rhs = strip_relative(ctx, tensor_product(ctx.fb, sigma(nm.module)));
    if (!stable_b_iso(ctx, lhs, rhs))
      throw VerifyFailed({"Sigma_B X differs from F_B (x) Sigma X",
                          {{"b", ctx.b}, {"x", nm.module}, {"sigma_b_x", lhs}, {"fb_sigma_x", rhs}},
                          std::nullopt, nm.name});
    s.report.fact("twist." + key_name(nm.name), true);
    ++checked;
  }
  s.report.fact("instances", checked);
  s.report.fact("passed", true);
}

void verify_birational(Session& s) {
  const RelCtx ctx = s.ctx();
  const auto rep = birational_report(ctx, s.corpus(ctx.b), s.opt.cap_nilp, s.opt.cap_dim);
  emit_birational(s, rep);
  if (!rep.xi_tensor_b_contractible || !rep.b_tensor_xi_stmod_zero)
    throw VerifyFailed({"xi_B (x) B identities fail", {{"b", ctx.b}}, ctx.xib.matrix(), ""});
  if (!rep.xi_sq_tensor_c_stmod_zero && rep.c)
    throw VerifyFailed({"xi_B^2 (x) C is not stmod-zero", {{"b", ctx.b}, {"c", *rep.c}}, std::nullopt, ""});
  for (const auto& r : rep.rows)
    if (!r.agree || !r.locus_inclusion) {
      GModule m = ctx.b;
      for (const auto& nm : s.corpus(ctx.b))
        if (nm.name == r.name) m = nm.module;
      throw VerifyFailed({"predicates disagree on " + r.name, {{"b", ctx.b}, {"x", m}}, std::nullopt,
                          "nilpotence=" + nilp_text(r.nilpotence) +
                              " in_thick=" + (r.in_thick ? "true" : "false") +
                              " support_in_supp_b=" + (r.support_in_supp_b ? "true" : "false")});
    }
  s.report.fact("passed", true);
}

void dump_counterexample(const Session& s, const Counterexample& ce, std::ostream& err) {
  try {
    write_counterexample(s.opt.dump, s.group.get(), ce);
    err << "counterexample written to " << s.opt.dump << "\n";
  } catch (const std::exception& e) {
    err << "could not write counterexample: " << e.what() << "\n";
  }
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Workbench for relative stable module categories over GF(p)", "relstab"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--group", opt.group, "group file");
  app.add_option("--module", opt.module, "module file (B for rel, tt and verify)");
  app.add_option("--x", opt.x, "first module argument");
  app.add_option("--y", opt.y, "second module argument");
  app.add_option("--corpus", opt.corpus, "corpus file");
  app.add_option("--map", opt.map, "map file X -> Y");
  app.add_option("--hom-index", opt.hom_index, "hom-basis element used when --map is absent");
  app.add_option("--out", opt.out, "write the resulting module file here");
  app.add_option("--seed", opt.seed, "seed for randomized steps")->capture_default_str();
  app.add_option("--cap-nilp", opt.cap_nilp, "nilpotence cap")->capture_default_str();
  app.add_option("--cap-dim", opt.cap_dim, "thick closure dimension cap")->capture_default_str();
  app.add_option("--n", opt.n_max, "largest |n| for tt graded")->capture_default_str();
  app.add_option("--format", opt.format, "text or records")
      ->check(CLI::IsMember({"text", "records"}))
      ->capture_default_str();
  app.add_option("--cache", opt.cache, "decomposition cache file (RELSTAB_CACHE overrides)");
  app.add_option("--dump", opt.dump, "counterexample directory")->capture_default_str();

  std::string chosen, sub;
  std::vector<std::pair<std::string, std::vector<std::string>>> groups = {
      {"info", {}},
      {"decompose", {}},
      {"tensor", {}},
      {"homs", {}},
      {"stable", {"omega", "sigma", "cone", "homs"}},
      {"rel", {"ctx", "homs", "sigma", "cone", "iso", "strip"}},
      {"tt", {"nilp", "thick", "support", "birational", "graded"}},
      {"verify", {"axioms", "lemma-iso", "thm-fb", "birational"}}};
  for (const auto& [name, subs] : groups) {
    CLI::App* c = app.add_subcommand(name, name + " command");
    c->callback([&chosen, n = name] { chosen = n; });
    if (!subs.empty()) {
      c->require_subcommand(1);
      for (const auto& sname : subs) {
        CLI::App* cs = c->add_subcommand(sname, name + " " + sname);
        cs->callback([&sub, sn = sname] { sub = sn; });
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Report report;
  Session session(opt, report);
  int code = kExitOk;
  try {
    if (chosen == "info") cmd_info(session);
    else if (chosen == "decompose") cmd_decompose(session);
    else if (chosen == "tensor") cmd_tensor(session);
    else if (chosen == "homs") cmd_homs(session);
    else if (chosen == "stable") cmd_stable(session, sub);
    else if (chosen == "rel") cmd_rel(session, sub);
    else if (chosen == "tt") cmd_tt(session, sub);
    else if (sub == "axioms") verify_axioms(session);
    else if (sub == "lemma-iso") verify_lemma_iso(session);
    else if (sub == "thm-fb") verify_thm_fb(session);
    else verify_birational(session);
  } catch (const VerifyFailed& v) {
    report.fact("passed", false);
    report.fact("failure", v.ce.check);
    if (!v.ce.detail.empty()) report.fact("failure.detail", v.ce.detail);
    dump_counterexample(session, v.ce, err);
    code = kExitVerify;
  } catch (const VerificationError& e) {
    report.fact("passed", false);
    report.fact("failure", e.what());
    dump_counterexample(session, {e.what(), {}, std::nullopt, ""}, err);
    code = kExitVerify;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  session.cache.save();
  for (const auto& w : session.cache.warnings()) err << "warning: " << w << "\n";
  report.emit(out, opt.format == "records");
  return code;
}

}  // namespace relstab::cli
