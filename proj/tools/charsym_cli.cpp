#include <CLI11.hpp>
#include <json.hpp>

#include <charsym/selftest.hpp>

#include <fstream>
#include <functional>
#include <iostream>

using json = nlohmann::json;  // object keys serialize sorted
using namespace charsym;

/* Exit codes: 0 success, 1 parse error, 2 precondition violation,
   3 precision exhausted, 4 acceptance-suite failure (selftest only),
   70 internal invariant failure. */

namespace {

struct RingFlags {
  i64 p = 0;
  int prec = 0, trunc = 0, vars = 1;

  series::SRingPtr make() const {
    if (p < 2) throw PreconditionError("--p must be a prime >= 2");
    return series::SeriesRing::make(padic::PadicRing::make(u64(p), prec), vars, trunc);
  }
};

void add_ring_flags(CLI::App* cmd, RingFlags& rf) {
  cmd->add_option("--p", rf.p, "base prime")->required();
  cmd->add_option("--prec", rf.prec, "p-adic working precision N")->required();
  cmd->add_option("--trunc", rf.trunc, "t-adic truncation D")->required();
  cmd->add_option("--vars", rf.vars, "number of series variables")->capture_default_str();
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    s = a == std::string::npos ? "" : s.substr(a, b - a + 1);
  }
  std::erase(out, "");
  return out;
}

cycles::Height1Prime parse_prime(const std::string& text, const series::SRingPtr& S) {
  if (text == "p" || text == "P") return cycles::Height1Prime::P();
  return cycles::Height1Prime::from_poly(series::parse_poly(text, S));
}

std::vector<cycles::Height1Prime> parse_primes(const std::string& text,
                                               const series::SRingPtr& S, bool ensure_p) {
  std::vector<cycles::Height1Prime> out;
  bool has_p = false;
  for (const auto& tok : split_list(text, ';')) {
    out.push_back(parse_prime(tok, S));
    has_p = has_p || out.back().is_p;
  }
  if (ensure_p && !has_p) out.push_back(cycles::Height1Prime::P());
  return out;
}

json residue_json(const ktheory::ResidueElement& x) {
  if (std::holds_alternative<ktheory::LaurentFp>(x)) {
    const auto& l = std::get<ktheory::LaurentFp>(x);
    return json{{"kind", "laurent"}, {"ord", l.ord}, {"unit", l.unit}};
  }
  const auto& f = std::get<ktheory::PolyFrac>(x);
  return json{{"kind", "fraction"},
              {"modulus", series::poly_string(f.modulus)},
              {"num", series::poly_string(f.num)},
              {"den", series::poly_string(f.den)}};
}

std::string cyclo_string(const lvalues::CycloElement& v) {
  if (v.num.size() == 1) {
    std::string s = std::to_string(v.num[0]);
    if (v.den != 1) s += "/" + std::to_string(v.den);
    return s;
  }
  return v.str();
}

/* polynomials over F_p in x, y, z for the Ext driver */
groebner::PolyFp parse_fp_poly(const std::string& text, u64 p, int nvars) {
  size_t i = 0;
  auto fail = [&](const std::string& what) -> void {
    throw ParseError(what + " at column " + std::to_string(i + 1));
  };
  auto skip = [&] {
    while (i < text.size() && std::isspace((unsigned char)text[i])) ++i;
  };
  auto number = [&]() -> u64 {
    if (i >= text.size() || !std::isdigit((unsigned char)text[i])) fail("expected number");
    u64 v = 0;
    while (i < text.size() && std::isdigit((unsigned char)text[i])) {
      v = v * 10 + u64(text[i++] - '0');
      if (v > 1'000'000'000) fail("number too large");
    }
    return v;
  };
  std::function<groebner::PolyFp()> expr;
  auto atom = [&]() -> groebner::PolyFp {
    skip();
    if (i < text.size() && text[i] == '(') {
      ++i;
      auto v = expr();
      skip();
      if (i >= text.size() || text[i] != ')') fail("expected )");
      ++i;
      return v;
    }
    if (i < text.size() && std::isdigit((unsigned char)text[i]))
      return groebner::PolyFp::constant(p, nvars, i64(number() % p));
    if (i < text.size()) {
      int vi = text[i] == 'x' ? 0 : text[i] == 'y' ? 1 : text[i] == 'z' ? 2 : -1;
      if (vi >= 0) {
        if (vi >= nvars) fail("variable outside ring");
        ++i;
        return groebner::PolyFp::variable(p, nvars, vi);
      }
    }
    fail("expected term");
    return groebner::PolyFp::zero(p, nvars);
  };
  auto power = [&]() -> groebner::PolyFp {
    auto b = atom();
    skip();
    if (i < text.size() && text[i] == '^') {
      ++i;
      skip();
      u64 e = number();
      if (e > 4096) fail("exponent too large");
      auto r = groebner::PolyFp::constant(p, nvars, 1);
      for (u64 k = 0; k < e; ++k) r = groebner::fp_mul(r, b);
      return r;
    }
    return b;
  };
  auto term = [&]() -> groebner::PolyFp {
    auto v = power();
    for (;;) {
      skip();
      if (i < text.size() && text[i] == '*') {
        ++i;
        v = groebner::fp_mul(v, power());
      } else if (i < text.size() && (std::isalnum((unsigned char)text[i]) || text[i] == '(')) {
        v = groebner::fp_mul(v, power());
      } else {
        return v;
      }
    }
  };
  expr = [&]() -> groebner::PolyFp {
    skip();
    bool neg = false;
    while (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      if (text[i] == '-') neg = !neg;
      ++i;
      skip();
    }
    auto v = term();
    if (neg) v = groebner::fp_neg(v);
    for (;;) {
      skip();
      if (i >= text.size() || (text[i] != '+' && text[i] != '-')) break;
      bool minus = text[i] == '-';
      ++i;
      skip();
      while (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        if (text[i] == '-') minus = !minus;
        ++i;
        skip();
      }
      auto w = term();
      v = minus ? groebner::fp_sub(v, w) : groebner::fp_add(v, w);
    }
    return v;
  };
  auto out = expr();
  skip();
  if (i < text.size()) fail("trailing input");
  return out;
}

const std::vector<i64> kDefaultDiscs = {-3, -4, -7, -8, -11, -15, -19, -20};

struct Job {
  std::string out_path;
  json result;  // null until the job ran
};

void emit(const std::string& out_path, const json& doc) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw PreconditionError("cannot open output path " + out_path);
  os << doc.dump(2) << "\n";
}

struct BatchLineError {
  int line = 0;
  std::string what;
  int code = 2;
};

std::vector<std::string> tokenize_line(const std::string& line, int lineno) {
  std::vector<std::string> toks;
  std::string cur;
  bool in_tok = false, quoted = false;
  size_t qcol = 0;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"')
        quoted = false;
      else
        cur += c;
    } else if (c == '"') {
      quoted = true;
      in_tok = true;
      qcol = i + 1;
    } else if (std::isspace((unsigned char)c)) {
      if (in_tok) {
        toks.push_back(cur);
        cur.clear();
        in_tok = false;
      }
    } else if (c == '#') {
      break;
    } else {
      cur += c;
      in_tok = true;
    }
  }
  if (quoted)
    throw ParseError("line " + std::to_string(lineno) + ": unterminated quote at column " +
                     std::to_string(qcol));
  if (in_tok) toks.push_back(cur);
  return toks;
}

int run_job(const std::vector<std::string>& args, Job& job, bool in_batch);

int run_batch(const std::string& path, const std::string& out_path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open batch file " + path);
  json results = json::array();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize_line(line, lineno);
    if (toks.empty()) continue;
    Job job;
    int rc = 0;
    try {
      rc = run_job(toks, job, true);
    } catch (const std::exception& e) {
      int code = dynamic_cast<const ParseError*>(&e)          ? 1
                 : dynamic_cast<const PrecisionExhausted*>(&e) ? 3
                                                               : 2;
      throw BatchLineError{lineno, e.what(), code};
    }
    if (rc != 0) throw BatchLineError{lineno, "job failed", rc};
    job.result["line"] = lineno;
    results.push_back(std::move(job.result));
  }
  emit(out_path, results);
  return 0;
}

int run_job(const std::vector<std::string>& args, Job& job, bool in_batch) {
  CLI::App app{"characteristic symbols and p-adic L-value toolkit"};

  RingFlags rf;
  std::string f_text, g_text, f1_text, f2_text, at_text, primes_text;
  std::string batch_path;
  int n_max = 4;
  i64 modulus = 0, order = 0, conductor = 0;
  std::vector<i64> kappa_discs = kDefaultDiscs;

  app.add_option("--batch", batch_path, "run jobs from a file, one per line");
  app.add_option("--out", job.out_path, "write JSON to this path instead of stdout");

  auto* chern1 = app.add_subcommand("chern1", "divisor cycle of a series over a prime list");
  add_ring_flags(chern1, rf);
  chern1->add_option("--f", f_text, "series")->required();
  chern1
      ->add_option("--primes", primes_text,
                   "semicolon-separated height-1 primes ('p' or distinguished polynomials)")
      ->required();

  auto* chern2 = app.add_subcommand("chern2", "colength of a height-2 pair, both routes");
  add_ring_flags(chern2, rf);
  chern2->add_option("--f1", f1_text, "first series")->required();
  chern2->add_option("--f2", f2_text, "second series")->required();

  auto* tame = app.add_subcommand("tame", "tame residue of the symbol {f, g} at a prime");
  add_ring_flags(tame, rf);
  tame->add_option("--f", f_text, "first slot")->required();
  tame->add_option("--g", g_text, "second slot")->required();
  tame->add_option("--at", at_text, "height-1 prime ('p' or a distinguished polynomial)")
      ->required();

  auto* nu2cmd = app.add_subcommand("nu2", "order of {f, g} along the chain through a prime");
  add_ring_flags(nu2cmd, rf);
  nu2cmd->add_option("--f", f_text, "first slot")->required();
  nu2cmd->add_option("--g", g_text, "second slot")->required();
  nu2cmd->add_option("--at", at_text, "height-1 prime of the component")->required();

  auto* prop29 = app.add_subcommand("prop29", "characteristic symbol vs localized length");
  add_ring_flags(prop29, rf);
  prop29->add_option("--f1", f1_text, "first prime-like series")->required();
  prop29->add_option("--f2", f2_text, "second prime-like series")->required();

  auto* recip = app.add_subcommand("reciprocity", "residue sum over a complete support");
  add_ring_flags(recip, rf);
  recip->add_option("--f", f_text, "first slot")->required();
  recip->add_option("--g", g_text, "second slot")->required();
  recip
      ->add_option("--primes", primes_text,
                   "support primes; the prime over p is appended if missing")
      ->required();

  auto* growth = app.add_subcommand("growth", "colength growth along the omega tower");
  add_ring_flags(growth, rf);
  growth->add_option("--f", f_text, "series coprime to the tower")->required();
  growth->add_option("--n-max", n_max, "largest tower level")->capture_default_str();

  auto* ext = app.add_subcommand("ext-koszul", "Ext dimensions of a finite complete intersection");
  ext->add_option("--p", rf.p, "base prime")->required();
  ext->add_option("--vars", rf.vars, "number of variables")->required();
  ext->add_option("--f", f_text, "semicolon-separated regular sequence in x, y, z")->required();

  auto* bern = app.add_subcommand("bernoulli", "generalized Bernoulli numbers B_{1,chi}");
  bern->add_option("--modulus", modulus, "character modulus")->required();
  bern->add_option("--order", order, "exact character order")->required();

  auto* lsearch = app.add_subcommand("lsearch", "kappa-twisted divisibility search");
  lsearch->add_option("--p", rf.p, "base prime")->required();
  lsearch->add_option("--prec", rf.prec, "p-adic precision for the place")->required();
  lsearch->add_option("--conductor", conductor, "psi conductor")->required();
  lsearch->add_option("--order", order, "exact psi order")->required();
  lsearch->add_option("--kappa-discs", kappa_discs, "negative fundamental discriminants")
      ->delimiter(',');

  auto* self = app.add_subcommand("selftest", "run the bundled acceptance suite");

  // --batch and --out live on the parent; let subcommand parsing reach them
  for (CLI::App* sc : app.get_subcommands(nullptr)) sc->fallthrough();

  std::vector<const char*> argv;
  argv.push_back("charsym");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    throw ParseError(e.what());
  }

  if (!batch_path.empty()) {
    if (in_batch) throw ParseError("--batch cannot nest inside a batch file");
    if (!app.get_subcommands().empty())
      throw ParseError("--batch cannot be combined with a direct subcommand");
    return run_batch(batch_path, job.out_path);
  }
  if (app.get_subcommands().empty()) throw ParseError("a subcommand is required");
  if (in_batch && !job.out_path.empty())
    throw ParseError("--out is not allowed on a batch line");

  if (chern1->parsed()) {
    auto S = rf.make();
    auto f = series::parse_series(f_text, S);
    auto primes = parse_primes(primes_text, S, false);
    auto cyc = cycles::c1(f, primes);
    json labels = json::array();
    for (const auto& pi : primes) labels.push_back(pi.label());
    job.result = {{"schema", "charsym/chern1/v1"}, {"cycle", cyc.str()}, {"primes", labels}};
  } else if (chern2->parsed()) {
    auto S = rf.make();
    auto f1 = series::parse_series(f1_text, S);
    auto f2 = series::parse_series(f2_text, S);
    auto routes = cycles::c2_quotient_routes(f1, f2);
    cycles::Cycle cyc;
    cyc.add(cycles::maximal_label(), routes.snf);
    job.result = {{"schema", "charsym/chern2/v1"},
                  {"snf", routes.snf},
                  {"resultant", routes.resultant},
                  {"cycle", cyc.str()}};
  } else if (tame->parsed()) {
    auto S = rf.make();
    auto f = series::parse_series(f_text, S);
    auto g = series::parse_series(g_text, S);
    ktheory::DvrDescriptor d{S, parse_prime(at_text, S)};
    auto r = ktheory::tame(ktheory::symbol(f, g), d);
    job.result = {{"schema", "charsym/tame/v1"},
                  {"at", d.pi.label()},
                  {"residue", residue_json(r)}};
  } else if (nu2cmd->parsed()) {
    auto S = rf.make();
    auto f = series::parse_series(f_text, S);
    auto g = series::parse_series(g_text, S);
    ktheory::RestrictedProductElement a;
    auto pi = parse_prime(at_text, S);
    std::string label = pi.label();
    a.set(std::move(pi), ktheory::symbol(f, g));
    auto cyc = ktheory::nu2(a, {cycles::maximal_label()}, S);
    job.result = {{"schema", "charsym/nu2/v1"}, {"at", label}, {"cycle", cyc.str()}};
  } else if (prop29->parsed()) {
    auto S = rf.make();
    auto f1 = series::parse_series(f1_text, S);
    auto f2 = series::parse_series(f2_text, S);
    auto rep = ktheory::verify_prop29(f1, f2);
    job.result = {{"schema", "charsym/prop29/v1"},
                  {"lhs", rep.lhs.str()},
                  {"symmetric", rep.symmetric.str()},
                  {"rhs", rep.rhs.str()},
                  {"equal", rep.equal}};
  } else if (recip->parsed()) {
    auto S = rf.make();
    auto f = series::parse_series(f_text, S);
    auto g = series::parse_series(g_text, S);
    auto primes = parse_primes(primes_text, S, true);
    bool zero = ktheory::reciprocity_check(f, g, primes);
    json labels = json::array();
    for (const auto& pi : primes) labels.push_back(pi.label());
    job.result = {{"schema", "charsym/reciprocity/v1"},
                  {"zero_cycle", zero},
                  {"support", labels}};
  } else if (growth->parsed()) {
    auto S = rf.make();
    auto f = series::parse_series(f_text, S);
    auto orders = cycles::growth_orders(f, n_max);
    auto fit = cycles::fit_growth(orders, u64(rf.p));
    job.result = {{"schema", "charsym/growth/v1"},
                  {"orders", orders},
                  {"mu", fit.mu},
                  {"lambda", fit.lambda},
                  {"nu", fit.nu},
                  {"n0", fit.n0}};
  } else if (ext->parsed()) {
    if (rf.p < 2) throw PreconditionError("--p must be a prime >= 2");
    std::vector<groebner::PolyFp> seq;
    for (const auto& tok : split_list(f_text, ';'))
      seq.push_back(parse_fp_poly(tok, u64(rf.p), rf.vars));
    auto rep = homalg::ext_dims(seq);
    bool bid = homalg::biduality_check(seq);
    job.result = {{"schema", "charsym/ext-koszul/v1"},
                  {"dims", rep.dims},
                  {"quotient_dim", rep.dims.back()},
                  {"cyclic", rep.cyclic},
                  {"annihilator_match", rep.annihilator_match},
                  {"biduality", bid}};
  } else if (bern->parsed()) {
    lvalues::UnitGroup G(modulus);
    json rows = json::array();
    for (const auto& chi : lvalues::enumerate_characters(modulus, order, true)) {
      auto v = lvalues::bernoulli1(chi);
      rows.push_back({{"conductor", chi.conductor()},
                      {"order", chi.order()},
                      {"generator_images", chi.generator_images(G)},
                      {"value", cyclo_string(v)}});
    }
    job.result = {{"schema", "charsym/bernoulli/v1"},
                  {"modulus", modulus},
                  {"order", order},
                  {"rows", rows}};
  } else if (lsearch->parsed()) {
    auto res = lvalues::divisibility_search(rf.p, conductor, order, kappa_discs, rf.prec);
    json rows = json::array();
    for (const auto& h : res.hits)
      rows.push_back({{"conductor", res.conductor},
                      {"order", res.order},
                      {"generator_images", h.psi_images},
                      {"kappa_disc", h.kappa_disc},
                      {"exceptional", h.exc1 || h.exc2},
                      {"divisible", h.div1 || h.div2},
                      {"psi_index", h.psi_index},
                      {"v1", h.v1},
                      {"v2", h.v2},
                      {"div1", h.div1},
                      {"div2", h.div2},
                      {"exc1", h.exc1},
                      {"exc2", h.exc2}});
    job.result = {{"schema", "charsym/lsearch/v1"},
                  {"p", res.p},
                  {"conductor", res.conductor},
                  {"order", res.order},
                  {"M", res.M},
                  {"e", res.e},
                  {"teich_base", res.teich_base},
                  {"prime", res.prime},
                  {"psi_count", res.psi_count},
                  {"rows", rows}};
  } else if (self->parsed()) {
    auto results = selftest::run_all();
    json rows = json::array();
    bool all = true;
    for (const auto& r : results) {
      std::cerr << selftest::format_line(r) << "\n";
      rows.push_back(
          {{"index", r.index}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
      all = all && r.pass;
    }
    job.result = {{"schema", "charsym/selftest/v1"}, {"criteria", rows}, {"all_pass", all}};
    return all ? 0 : 4;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  Job job;
  int rc = 0;
  try {
    rc = run_job(args, job, false);
    if (!job.result.is_null()) emit(job.out_path, job.result);
  } catch (const BatchLineError& e) {
    std::cerr << "batch line " << e.line << ": " << e.what << "\n";
    return e.code;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const PrecisionExhausted& e) {
    std::cerr << "precision exhausted: " << e.what() << "\n";
    return 3;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
  return rc;
}
