#include "kspos/cli.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kspos/bkn.hpp"
#include "kspos/bott.hpp"
#include "kspos/curvature.hpp"
#include "kspos/error.hpp"
#include "kspos/omega.hpp"
#include "kspos/tensor_io.hpp"
#include "kspos/vanish.hpp"
#include "kspos/weights.hpp"

namespace kspos::cli {

namespace {

using json = nlohmann::ordered_json;
using C = std::complex<double>;

[[noreturn]] void input_error(const std::string& what) { throw Error(Errc::invalid_input, what); }

std::vector<int> parse_ints(const std::string& text, const char* what) {
  std::vector<int> out;
  if (text.empty()) input_error(std::string(what) + ": empty list");
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    int v = 0;
    const char* first = text.data() + pos;
    const char* last = text.data() + comma;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last)
      input_error(std::string(what) + ": expected comma-separated integers, got '" + text + "'");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

std::vector<double> parse_reals(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) input_error(std::string(what) + ": expected comma-separated numbers");
    out.push_back(v);
  }
  if (out.empty()) input_error(std::string(what) + ": empty list");
  return out;
}

json big(const BigInt& x) {
  if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
    return static_cast<long long>(x);
  return x.str();
}

json weight_json(const Weight& w) { return json(w.entries()); }

json table_json(const HodgeTable& h) {
  json rows = json::array();
  for (const auto& row : h) {
    json r = json::array();
    for (const auto& x : row) r.push_back(big(x));
    rows.push_back(std::move(r));
  }
  return rows;
}

json complex_vector(const VectorX<C>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

void echo(json& doc, const RunConfig& cfg) {
  doc["config"] = {{"seed", cfg.seed}, {"tolerance", cfg.tolerance}, {"samples", cfg.samples}};
}

// ---------------------------------------------------------------------------
// Table output: scalars as "key  value", lists on one line, matrices as rows.

bool is_scalar(const json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

void render(const json& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    std::size_t width = 0;
    for (const auto& [k, v] : j.items()) width = std::max(width, k.size());
    for (const auto& [k, v] : j.items()) {
      if (is_scalar(v)) {
        out << pad << std::left << std::setw(static_cast<int>(width)) << k << "  " << scalar_text(v) << '\n';
      } else if (v.is_array() && std::all_of(v.begin(), v.end(), is_scalar)) {
        out << pad << std::left << std::setw(static_cast<int>(width)) << k << " ";
        for (const auto& x : v) out << ' ' << scalar_text(x);
        out << '\n';
      } else {
        out << pad << k << ":\n";
        render(v, out, indent + 2);
      }
    }
  } else if (j.is_array()) {
    const bool matrix = std::all_of(j.begin(), j.end(), [](const json& row) {
      return row.is_array() && std::all_of(row.begin(), row.end(), is_scalar);
    });
    if (matrix) {
      std::size_t width = 1;
      for (const auto& row : j)
        for (const auto& x : row) width = std::max(width, scalar_text(x).size());
      for (const auto& row : j) {
        out << pad;
        for (const auto& x : row) out << std::right << std::setw(static_cast<int>(width) + 1) << scalar_text(x);
        out << '\n';
      }
      return;
    }
    for (const auto& x : j) {
      if (is_scalar(x)) {
        out << pad << "- " << scalar_text(x) << '\n';
      } else {
        out << pad << "-\n";
        render(x, out, indent + 2);
      }
    }
  } else {
    out << pad << scalar_text(j) << '\n';
  }
}

void emit(const json& doc, const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == "table")
    render(doc, out, 0);
  else
    out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Tensor sources

struct TensorArgs {
  std::string builtin;
  std::string file;
  std::string transform;
};

Tensor builtin_tensor(const std::string& text, const RunConfig& cfg) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) input_error("--builtin expects name:args, e.g. grassmannian:4,2");
  const std::string name = text.substr(0, colon);
  const std::vector<int> a = parse_ints(text.substr(colon + 1), "--builtin");
  auto need = [&](std::size_t count) {
    if (a.size() != count) input_error("--builtin " + name + " takes " + std::to_string(count) + " integers");
  };
  if (name == "grassmannian") {
    need(2);
    return grassmannian_curvature(a[0], a[1]);
  }
  if (name == "identity") {
    need(2);
    return identity_curvature(a[0], a[1]);
  }
  if (name == "griffiths") {
    need(3);
    return sample_griffiths_k(a[0], a[1], a[2], cfg.seed);
  }
  if (name == "nakano") {
    need(2);
    return sample_nakano_positive(a[0], a[1], cfg.seed);
  }
  input_error("unknown builtin '" + name + "' (grassmannian, identity, griffiths, nakano)");
}

Tensor load_tensor(const TensorArgs& t, const RunConfig& cfg, json& meta) {
  if (t.builtin.empty() == t.file.empty()) input_error("give exactly one of --builtin or --tensor");
  Tensor R = t.builtin.empty() ? read_tensor_file(t.file) : builtin_tensor(t.builtin, cfg);
  meta["source"] = t.builtin.empty() ? "file:" + t.file : "builtin:" + t.builtin;
  if (!t.transform.empty()) {
    const auto colon = t.transform.find(':');
    const std::string name = t.transform.substr(0, colon);
    if (name == "dual" && colon == std::string::npos) {
      R = dual_curvature(R);
    } else if ((name == "twist_det" || name == "dual_twist") && colon != std::string::npos) {
      const std::vector<int> a = parse_ints(t.transform.substr(colon + 1), "--transform");
      if (a.size() != 1) input_error("--transform " + name + " takes one integer");
      R = name == "twist_det" ? twist_det(R, a[0]) : dual_twist(R, a[0]);
    } else {
      input_error("--transform expects dual, twist_det:m or dual_twist:s");
    }
    meta["transform"] = t.transform;
  }
  meta["n"] = R.base_dim();
  meta["r"] = R.fibre_rank();
  return R;
}

void add_tensor_options(CLI::App* sub, TensorArgs& t) {
  sub->add_option("--builtin", t.builtin, "grassmannian:n,d | identity:n,r | griffiths:n,r,k | nakano:n,r");
  sub->add_option("--tensor", t.file, "curvature tensor JSON file");
  sub->add_option("--transform", t.transform, "dual | twist_det:m | dual_twist:s");
}

json report_json(const PositivityReport<C>& rep) {
  json doc;
  doc["claim"] = rep.claim;
  doc["k"] = rep.k;
  doc["s"] = rep.s;
  doc["verdict"] = to_string(rep.verdict);
  doc["samples_run"] = rep.samples_run;
  doc["refinement_steps"] = rep.refinement_steps;
  doc["worst_min_eigenvalue"] = rep.worst_min_eigenvalue;
  doc["worst_kernel_dim"] = rep.worst_kernel_dim;
  if (rep.hypothesis_met) {
    doc["hypothesis"] = rep.hypothesis;
    doc["hypothesis_met"] = *rep.hypothesis_met;
    doc["margin"] = rep.margin;
  }
  if (rep.witness) {
    json w;
    w["side"] = to_string(rep.witness->side);
    json tuple = json::array();
    for (Eigen::Index c = 0; c < rep.witness->tuple.cols(); ++c) tuple.push_back(complex_vector(rep.witness->tuple.col(c)));
    w["tuple"] = std::move(tuple);
    w["eigenvector"] = complex_vector(rep.witness->eigenvector);
    w["min_eigenvalue"] = rep.witness->min_eigenvalue;
    w["kernel_dim"] = rep.witness->kernel_dim;
    doc["witness"] = std::move(w);
  }
  doc["rng"] = rep.rng;
  return doc;
}

// ---------------------------------------------------------------------------
// Subcommands

json run_bott(const std::string& weight, int rank, const std::string& flag, const std::string& block) {
  CohomologyResult c;
  if (!flag.empty() || !block.empty()) {
    if (flag.empty() || block.empty() || !weight.empty()) input_error("bott: use --flag with --block-weight, or --weight");
    c = bott_flag(BlockWeight(parse_ints(block, "--block-weight"), FlagType(parse_ints(flag, "--flag"))));
  } else {
    if (weight.empty()) input_error("bott: --weight is required");
    const Weight w(parse_ints(weight, "--weight"));
    c = bott_cohomology(w, rank > 0 ? rank : w.rank());
  }
  json doc;
  if (c.is_zero()) {
    doc["kind"] = "zero";
    return doc;
  }
  doc["kind"] = "single";
  doc["degree"] = c.degree;
  doc["weight"] = weight_json(c.highest_weight);
  doc["dimension"] = big(c.dimension);
  return doc;
}

json run_omega(const std::string& flag, int p) {
  const FlagType s(parse_ints(flag, "--flag"));
  const int N = flag_dimension(s);
  json doc;
  doc["flag"] = s.cuts();
  doc["dimension"] = N;
  json degrees = json::array();
  for (int d = 0; d <= N; ++d) {
    if (p >= 0 && d != p) continue;
    json entry;
    entry["p"] = d;
    json terms = json::array();
    for (const auto src = exterior_weights(s, d); const auto& [u, nu] : src.terms()) terms.push_back({{"weight", u.entries()}, {"multiplicity", nu}});
    entry["terms"] = std::move(terms);
    const RootGapCheck gap = verify_root_gap_bound(s, d);
    entry["root_bound_ok"] = gap.ok;
    entry["root_bound_violations"] = gap.violations.size();
    degrees.push_back(std::move(entry));
  }
  if (p > N) input_error("omega: --p must lie in [0, N_s]");
  doc["degrees"] = std::move(degrees);
  return doc;
}

json run_hodge(const std::string& flag, int projective, int twist) {
  json doc;
  if (!flag.empty()) {
    if (projective > 0) input_error("hodge: use --flag or --projective, not both");
    const FlagType s(parse_ints(flag, "--flag"));
    doc["flag"] = s.cuts();
    doc["dimension"] = flag_dimension(s);
    doc["table"] = table_json(hodge_numbers(s));
    return doc;
  }
  if (projective < 1) input_error("hodge: --flag or --projective is required");
  doc["projective"] = projective;
  doc["twist"] = twist;
  doc["table"] = table_json(projective_twisted_hodge(projective, twist));
  return doc;
}

json run_bkn(const Tensor& R, int p, int q, const RunConfig& cfg) {
  const int n = R.base_dim();
  const int pp = p < 0 ? n : p;
  if (q < 0 || q > n || pp > n) input_error("bkn: need 0 <= p, q <= n");
  const auto op = bkn_matrix(R, pp, q);
  Eigen::SelfAdjointEigenSolver<MatrixX<C>> es(op.matrix, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  json doc;
  doc["p"] = pp;
  doc["q"] = q;
  doc["dimension"] = op.matrix.rows();
  doc["min_eigenvalue"] = ev.size() ? ev(0) : 0.0;
  json lowest = json::array();
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(ev.size(), 10); ++i) lowest.push_back(ev(i));
  doc["lowest_eigenvalues"] = std::move(lowest);
  doc["positive_definite"] = ev.size() == 0 || ev(0) > cfg.tolerance;
  return doc;
}

json run_positivity(const Tensor& R, int k, int s, bool nakano, const RunConfig& cfg) {
  if (nakano) return report_json(check_nakano(R, cfg.tolerance));
  KsOptions opt;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.tol = cfg.tolerance;
  return report_json(check_ks_positive(R, k, s, opt));
}

json fact_json(const PositivityFact& f) {
  return {{"subject", f.subject}, {"fact", f.label()}, {"rule", f.rule}, {"premises", f.premises}};
}

json report_json(const TheoremReport& r) {
  json trace = json::array();
  for (const auto& p : r.hypothesis_trace) {
    json e{{"premise", p.description}, {"satisfied", p.satisfied}};
    if (!p.discharged_by.empty()) e["discharged_by"] = p.discharged_by;
    trace.push_back(std::move(e));
  }
  json doc{{"theorem_id", r.theorem_id}, {"citation", r.citation}, {"subject", r.subject}, {"p", r.p}, {"q", r.q},
           {"hypothesis_trace", std::move(trace)},
           {"conclusion", r.vanishes ? "vanishes" : "not_applicable"}, {"statement", r.conclusion},
           {"conjectural", r.conjectural}};
  if (!r.note.empty()) doc["note"] = r.note;
  return doc;
}

int resolve_n(const ParsedExpr& parsed, int n_opt) {
  if (n_opt > 0 && parsed.n && *parsed.n != n_opt) input_error("--n disagrees with n= in the expression");
  if (n_opt > 0) return n_opt;
  if (parsed.n) return *parsed.n;
  input_error("vanish: base dimension unknown; pass --n or declare n= on an atom");
}

json run_vanish(const std::string& expr, int n_opt, int p, int q, const RunConfig& cfg) {
  const ParsedExpr parsed = parse_bundle_expr(expr);
  const int n = resolve_n(parsed, n_opt);
  QueryOptions opt;
  opt.conjectural = cfg.conjectural;
  const auto reports = query_vanishing(parsed.expr, n, p, q, opt);
  json doc;
  doc["expression"] = parsed.expr.str();
  doc["n"] = n;
  doc["p"] = p;
  doc["q"] = q;
  json facts = json::array();
  const BundleExpr& subject = parsed.expr.kind() == BundleExpr::Kind::canonical_twist ? parsed.expr.arg() : parsed.expr;
  for (const auto src = infer_positivity(subject, n); const auto& f : src.facts()) facts.push_back(fact_json(f));
  doc["facts"] = std::move(facts);
  json reps = json::array();
  for (const auto& r : reports) reps.push_back(report_json(r));
  doc["reports"] = std::move(reps);
  doc["vanishes"] = any_vanishes(reports);
  return doc;
}

json run_sharpness(const std::string& dims, const std::string& twists, int k_opt) {
  const std::vector<int> d = parse_ints(dims, "--dims");
  const std::vector<int> t = parse_ints(twists, "--twists");
  if (d.size() != 2 || t.size() != 2) input_error("sharpness: --dims and --twists take two integers each");
  if (d[0] < 1 || d[1] < 1) input_error("sharpness: dims must be >= 1");
  const int n = d[0] + d[1];
  const int k = k_opt >= 0 ? k_opt : d[0];
  const HodgeTable h = product_projective_cohomology(d[0], d[1], t[0], t[1]);
  const BundleExpr B = parse_bundle_expr("B{line,k_positive=" + std::to_string(k) + "}").expr;
  json doc;
  doc["dims"] = d;
  doc["twists"] = t;
  doc["n"] = n;
  doc["k"] = k;
  doc["table"] = table_json(h);
  json nonzero = json::array();
  json claimed = json::array();
  bool consistent = true;
  bool boundary_nonzero = false;
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) {
      const bool nz = h[p][q] != 0;
      const bool vanishes = any_vanishes(query_vanishing(B, n, p, q));
      if (nz) nonzero.push_back({{"p", p}, {"q", q}, {"dimension", big(h[p][q])}});
      if (vanishes) claimed.push_back({p, q});
      if (nz && vanishes) consistent = false;
      if (nz && p + q == n + k) boundary_nonzero = true;
    }
  doc["nonzero"] = std::move(nonzero);
  doc["claimed_vanishing"] = std::move(claimed);
  doc["consistent"] = consistent;
  doc["nonzero_at_boundary"] = boundary_nonzero;
  return doc;
}

json run_crosscheck(const std::string& nu_s, const std::string& mu_s, int p, int q, int n, int trials, const RunConfig& cfg) {
  json doc;
  if (!nu_s.empty()) {
    const std::vector<double> nu = parse_reals(nu_s, "--nu");
    const std::vector<double> mu = mu_s.empty() ? std::vector<double>(nu.size(), 1.0) : parse_reals(mu_s, "--mu");
    const int dim = static_cast<int>(nu.size());
    const int pp = p < 0 ? dim : p;
    const int qq = q < 0 ? dim : q;
    const LineSpectrum line = bkn_line_eigenvalues(nu, mu, pp, qq);
    doc["p"] = pp;
    doc["q"] = qq;
    doc["max_deviation"] = crosscheck_line(nu, mu, pp, qq);
    doc["lower_bound"] = line.lower_bound;
    doc["min_eigenvalue"] = *std::min_element(line.eigenvalues.begin(), line.eigenvalues.end());
    return doc;
  }
  if (n < 1 || n > 8) input_error("crosscheck: --n must lie in [1, 8] when --nu is absent");
  if (trials < 1) input_error("crosscheck: --trials must be >= 1");
  double worst = 0;
  for (int i = 0; i < trials; ++i) {
    CounterRng rng(cfg.seed, stream_id(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(i)));
    std::vector<double> nu(static_cast<std::size_t>(n)), mu(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      nu[j] = rng.uniform(-2.0, 2.0);
      mu[j] = rng.uniform(0.25, 2.0);
    }
    for (int pp = 0; pp <= n; ++pp)
      for (int qq = 0; qq <= n; ++qq) worst = std::max(worst, crosscheck_line(nu, mu, pp, qq));
  }
  doc["n"] = n;
  doc["trials"] = trials;
  doc["max_deviation"] = worst;
  return doc;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"kspos: Bott cohomology, (k,s)-positivity and vanishing-theorem workbench", "kspos"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--tol", cfg.tolerance, "eigenvalue tolerance")->capture_default_str();
    sub->add_option("--samples", cfg.samples, "random tuples per size and side")->capture_default_str();
    sub->add_option("--format", cfg.format, "json or table")->check(CLI::IsMember({"json", "table"}))->capture_default_str();
  };

  std::string weight, flag, block, expr, nu, mu, dims, twists;
  int rank = 0, p = -1, q = -1, k = 0, s = 1, n = 0, projective = 0, twist = 0, trials = 100, k_opt = -1;
  bool nakano = false;
  TensorArgs tensor;

  auto* bott = app.add_subcommand("bott", "cohomology of a homogeneous line bundle");
  bott->add_option("--weight", weight, "comma-separated weight a_1,...,a_r");
  bott->add_option("--rank", rank, "r (defaults to the weight length)");
  bott->add_option("--flag", flag, "flag type 0,s_1,...,r");
  bott->add_option("--block-weight", block, "one entry per block");
  common(bott);

  auto* omega = app.add_subcommand("omega", "weights of exterior powers of the cotangent space");
  omega->add_option("--flag", flag, "flag type 0,s_1,...,r")->required();
  omega->add_option("--p", p, "form degree (default: all)");
  common(omega);

  auto* hodge = app.add_subcommand("hodge", "Hodge numbers of a flag manifold or twisted forms on P^d");
  hodge->add_option("--flag", flag, "flag type 0,s_1,...,r");
  hodge->add_option("--projective", projective, "d, for h^{p,q}(P^d, O(a))");
  hodge->add_option("--twist", twist, "a, with --projective");
  common(hodge);

  auto* bkn = app.add_subcommand("bkn", "pointwise curvature commutator on (p,q)-forms");
  add_tensor_options(bkn, tensor);
  bkn->add_option("--p", p, "form degree p (default n)");
  bkn->add_option("--q", q, "form degree q")->required();
  common(bkn);

  auto* pos = app.add_subcommand("positivity", "(k,s)-positivity falsifier or exact Nakano check");
  add_tensor_options(pos, tensor);
  pos->add_option("--k", k, "kernel bound k")->capture_default_str();
  pos->add_option("--s", s, "tuple size s")->capture_default_str();
  pos->add_flag("--nakano", nakano, "exact Nakano positivity instead");
  common(pos);

  auto* van = app.add_subcommand("vanish", "vanishing-theorem predicates on a bundle expression");
  van->add_option("--expr", expr, "bundle expression, e.g. 'K*E{n=3,r=2,griffiths_k=1}*det(E)'")->required();
  van->add_option("--n", n, "base dimension (or n= on an atom)");
  van->add_option("--p", p, "form degree p")->required();
  van->add_option("--q", q, "form degree q")->required();
  van->add_flag("--conjectural", cfg.conjectural, "also evaluate the conjectured all-degree predicate");
  common(van);

  auto* sharp = app.add_subcommand("sharpness", "Kunneth cohomology on P^a x P^b against the line-bundle predicate");
  sharp->add_option("--dims", dims, "a,b")->required();
  sharp->add_option("--twists", twists, "twists of O(.) on the two factors")->required();
  sharp->add_option("--k", k_opt, "declared positivity index of the line bundle (default: a)");
  common(sharp);

  auto* cross = app.add_subcommand("crosscheck", "diagonal line-bundle spectrum against the full operator");
  cross->add_option("--nu", nu, "curvature eigenvalues");
  cross->add_option("--mu", mu, "metric eigenvalues (default 1)");
  cross->add_option("--p", p, "form degree p (default n)");
  cross->add_option("--q", q, "form degree q (default n)");
  cross->add_option("--n", n, "dimension for random trials");
  cross->add_option("--trials", trials, "random trials")->capture_default_str();
  common(cross);

  // CLI11 wants the arguments last-first.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    json doc;
    CLI::App* sub = app.get_subcommands().front();
    cfg.subcommand = sub->get_name();
    if (cfg.samples < 1) input_error("--samples must be >= 1");
    if (!(cfg.tolerance >= 0)) input_error("--tol must be >= 0");
    if (sub == bott) {
      doc = run_bott(weight, rank, flag, block);
    } else if (sub == omega) {
      doc = run_omega(flag, p);
    } else if (sub == hodge) {
      doc = run_hodge(flag, projective, twist);
    } else if (sub == bkn || sub == pos) {
      json meta;
      const Tensor R = load_tensor(tensor, cfg, meta);
      doc = sub == bkn ? run_bkn(R, p, q, cfg) : run_positivity(R, k, s, nakano, cfg);
      doc["tensor"] = std::move(meta);
    } else if (sub == van) {
      doc = run_vanish(expr, n, p, q, cfg);
    } else if (sub == sharp) {
      doc = run_sharpness(dims, twists, k_opt);
    } else {
      doc = run_crosscheck(nu, mu, p, q, n, trials, cfg);
    }
    echo(doc, cfg);
    emit(doc, cfg, out);
    return 0;
  } catch (const Error& e) {
    err << "kspos " << cfg.subcommand << ": " << e.what() << " [" << to_string(e.code()) << "]\n";
    return e.code() == Errc::generator_failure ? 1 : 2;
  } catch (const std::exception& e) {
    err << "kspos " << cfg.subcommand << ": internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace kspos::cli
