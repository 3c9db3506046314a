#pragma once

// Command-line front end. run_cli() is the whole program; tools/qorbit_cli.cpp
// only forwards argv. Exit codes: 0 all checks pass, 1 a check failed,
// 2 usage or parse error, 3 resource limit.

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qorbit/hecke.hpp"
#include "qorbit/hecke_io.hpp"
#include "qorbit/koszul.hpp"
#include "qorbit/orbit.hpp"
#include "qorbit/rea.hpp"
#include "qorbit/report.hpp"
#include "qorbit/symfun.hpp"

namespace qorbit::cli {

struct Options {
  std::string command;
  std::string builtin, file;
  std::size_t N = 2;
  std::optional<std::size_t> m, n;
  std::string q, h, mu, nu;
  std::string check = "all";
  std::optional<unsigned> k;
  std::uint64_t seed = 42;
  std::size_t trials = 7;
  std::optional<std::size_t> depth;
  std::size_t cap = kDefaultDegreeCap;
  std::string out, format = "text";
  bool no_timing = false;
};

namespace detail {

inline std::vector<Scalar> parse_list(const std::string& s) {
  std::vector<Scalar> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_scalar(item));
  return out;
}

inline std::string show(const Scalar& x) { return x.to_string(); }

inline nlohmann::ordered_json show(const std::vector<Scalar>& v) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& x : v) j.push_back(x.to_string());
  return j;
}

template <class T>
nlohmann::ordered_json show_matrix(const Matrix<T>& m) {
  auto j = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    j.push_back(row);
  }
  return j;
}

inline std::string show_residual(const SparseVec& r, std::size_t N, std::uint32_t deg) {
  if (r.empty()) return "0";
  const auto& [code, x] = r.front();
  NCPoly w = NCPoly::word(N, Word{deg, code}, x);
  return std::to_string(r.size()) + " nonzero coordinates, first " + w.to_string();
}

inline Scalar trace_c(const HeckeSymmetry& hs) {
  Scalar t;
  for (std::size_t i = 0; i < hs.N; ++i) t += hs.C(i, i);
  return t;
}

}  // namespace detail

class Runner {
 public:
  explicit Runner(Options o) : o_(std::move(o)) { rep_.command = o_.command; }

  Report& report() { return rep_; }

  void run() {
    const std::string& c = o_.command;
    if (c == "check-r") return check_r();
    if (c == "birank") return birank_cmd();
    if (c == "ch") return ch();
    if (c == "param") return param();
    if (c == "orbit") return orbit();
    if (c == "cotangent") return cotangent_cmd();
    if (c == "koszul") return koszul();
    if (c == "mrea") return mrea();
    fail(ErrorKind::InvalidArgument, "unknown command " + c);
  }

 private:
  Options o_;
  Report rep_;

  Scalar q_or(const Scalar& fallback) const { return o_.q.empty() ? fallback : parse_scalar(o_.q); }

  HeckeSymmetry symmetry() {
    if (!o_.file.empty()) {
      rep_.inputs["file"] = o_.file;
      return hecke_from_file(o_.file);
    }
    const std::string& b = o_.builtin;
    if (b.empty()) fail(ErrorKind::InvalidArgument, "--builtin or --file is required");
    if (b != "flip" && b != "superflip" && b != "dj_gl" && b != "q_super")
      fail(ErrorKind::InvalidArgument, "unknown builtin " + b + " (flip, superflip, dj_gl, q_super)");
    rep_.inputs["builtin"] = b;
    std::size_t m = o_.m.value_or(1), n = o_.n.value_or(1);
    if (b == "flip" || b == "dj_gl") rep_.inputs["N"] = o_.N;
    if (b == "superflip" || b == "q_super") {
      rep_.inputs["m"] = m;
      rep_.inputs["n"] = n;
    }
    if (b == "flip") return builtin::flip(o_.N);
    if (b == "superflip") return builtin::superflip(m, n);
    if (o_.q.empty()) fail(ErrorKind::InvalidArgument, b + " needs --q");
    Scalar q = parse_scalar(o_.q);
    rep_.inputs["q"] = q.to_string();
    if (b == "dj_gl") return builtin::dj_gl(o_.N, q);
    return builtin::q_super(m, n, q);
  }

  /// (m|n) of the profile: explicit flags, else the built-in's shape, else detected.
  std::pair<std::size_t, std::size_t> shape(const HeckeSymmetry* hs) {
    const std::string& b = o_.builtin;
    std::pair<std::size_t, std::size_t> s;
    if (b == "flip" || b == "dj_gl")
      s = {o_.m.value_or(o_.N), o_.n.value_or(0)};
    else if (b == "superflip" || b == "q_super")
      s = {o_.m.value_or(1), o_.n.value_or(1)};
    else if (o_.m || o_.n || !hs)
      s = {o_.m.value_or(0), o_.n.value_or(0)};
    else {
      auto br = qorbit::birank(*hs, o_.depth.value_or(hs->N + 3));
      s = {br.m, br.n};
    }
    rep_.inputs["profile"] = "(" + std::to_string(s.first) + "|" + std::to_string(s.second) + ")";
    return s;
  }

  EigenvalueProfile profile(std::size_t m, std::size_t n, const Scalar& q, bool require_values) {
    std::optional<Scalar> h;
    if (!o_.h.empty()) h = parse_scalar(o_.h);
    EigenvalueProfile pr = EigenvalueProfile::symbolic(m, n, q, h);
    if (!o_.mu.empty() || !o_.nu.empty()) {
      pr.mu = detail::parse_list(o_.mu);
      pr.nu = detail::parse_list(o_.nu);
      if (pr.mu.size() != m || pr.nu.size() != n)
        fail(ErrorKind::InvalidArgument, "--mu/--nu must list " + std::to_string(m) + " and " + std::to_string(n) + " values");
    } else if (require_values) {
      fail(ErrorKind::InvalidArgument, "--mu (and --nu) are required");
    }
    rep_.inputs["mu"] = detail::show(pr.mu);
    rep_.inputs["nu"] = detail::show(pr.nu);
    if (h) rep_.inputs["h"] = h->to_string();
    return pr;
  }

  void check_r() {
    std::vector<std::string> names{"yang-baxter", "hecke", "skew-invertible"};
    std::size_t passed = 0;
    try {
      HeckeSymmetry hs = symmetry();
      for (const auto& nm : names) rep_.check(nm, true, "0");
      rep_.results["N"] = hs.N;
      rep_.results["q"] = hs.q.to_string();
      rep_.results["B"] = detail::show_matrix(hs.B);
      rep_.results["C"] = detail::show_matrix(hs.C);
      return;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotYangBaxter) passed = 0;
      else if (e.kind() == ErrorKind::NotHecke) passed = 1;
      else if (e.kind() == ErrorKind::NotSkewInvertible) passed = 2;
      else throw;
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (i < passed) rep_.check(names[i], true, "0");
        else if (i == passed) rep_.check(names[i], false, e.what());
        else rep_.skip(names[i], "not reached");
      }
    }
  }

  void birank_cmd() {
    HeckeSymmetry hs = symmetry();
    std::size_t depth = o_.depth.value_or(hs.N + 3);
    rep_.inputs["depth"] = depth;
    auto br = qorbit::birank(hs, depth);
    std::string s = "(" + std::to_string(br.m) + "|" + std::to_string(br.n) + ")";
    rep_.results["birank"] = s;
    rep_.results["dim_sym"] = br.plus_dims;
    rep_.results["dim_wedge"] = br.minus_dims;
    rep_.check("birank detected", true, std::nullopt, s);
    if (o_.m || o_.n) {
      bool ok = br.m == o_.m.value_or(0) && br.n == o_.n.value_or(0);
      rep_.check("matches expected (m|n)", ok, ok ? std::nullopt : std::optional<std::string>(s));
    }
  }

  void ch() {
    HeckeSymmetry hs = symmetry();
    auto [m, n] = shape(&hs);
    auto coeffs = ch_coefficients(int(m), int(n), hs.q);
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : coeffs) arr.push_back(c.to_string());
    rep_.results["coefficients"] = arr;
    auto rs = relation_space(hs, RelationKind::Minus);
    auto r = ch_verify(rs, int(m), int(n), o_.cap);
    rep_.check("ch identity", r.passed, r.passed ? "0" : r.failure + ": " + r.residual.to_string(),
               std::to_string(r.checked) + " entries reduced to zero");
    unsigned K = o_.k.value_or(2);
    for (unsigned k = 1; k <= K; ++k) {
      auto c = centrality_check(k, rs, o_.cap);
      rep_.check("Tr_R L^" + std::to_string(k) + " central", c.passed,
                 c.passed ? "0" : c.failure + ": " + c.residual.to_string());
    }
  }

  void param() {
    std::optional<HeckeSymmetry> hs;
    if (!o_.builtin.empty() || !o_.file.empty()) hs = symmetry();
    auto [m, n] = shape(hs ? &*hs : nullptr);
    Scalar q = q_or(hs ? hs->q : Scalar::q());
    auto pr = profile(m, n, q, false);
    pr.check();
    auto qd = quantum_dims(pr);
    rep_.results["d"] = detail::show(qd.d);
    rep_.results["d_prime"] = detail::show(qd.dprime);
    rep_.results["power_sums"] = detail::show(power_sums_param(int(o_.k.value_or(unsigned(m + n))), pr));
    rep_.results["ch_coefficients"] = detail::show(ch_coefficients_param(pr));
    nlohmann::ordered_json schur = nlohmann::ordered_json::object();
    for (int r = 0; r <= int(n); ++r) {
      Partition lam = mn_shape(int(m), int(n), 0, r);
      schur["s" + partition_string(lam)] = schur_param(lam, pr).to_string();
    }
    for (int k = 1; k <= int(m); ++k) {
      Partition lam = mn_shape(int(m), int(n), k, 0);
      schur["s" + partition_string(lam)] = schur_param(lam, pr).to_string();
    }
    rep_.results["schur"] = schur;
    rep_.check("profile nondegenerate", true);
  }

  void orbit() {
    std::optional<HeckeSymmetry> hs;
    if (!o_.builtin.empty() || !o_.file.empty()) hs = symmetry();
    auto [m, n] = shape(hs ? &*hs : nullptr);
    Scalar q = q_or(hs ? hs->q : Scalar::q());
    rep_.inputs["q"] = q.to_string();
    auto pr = profile(m, n, q, false);
    auto v = regularity(pr);
    std::string viol;
    for (const auto& x : v.violated)
      viol += (viol.empty() ? "" : ", ") + x.kind + "(" + std::to_string(x.i) + "," + std::to_string(x.j) + ")";
    rep_.check("regular", v.regular, v.regular ? std::nullopt : std::optional<std::string>(viol));
    bool numeric = !o_.mu.empty() || !o_.nu.empty();
    if (v.regular && (numeric || o_.check == "symbolic")) {
      MatrixS H = hankel(pr);
      Scalar d = det(H), f = hankel_det_formula(pr);
      rep_.results["hankel"] = detail::show_matrix(H);
      rep_.results["det"] = d.to_string();
      rep_.check("det H = formula", d == f, d == f ? "0" : (d - f).to_string());
      rep_.check("det H nonzero", !d.is_zero());
    }
    if (o_.check == "sampled" || o_.check == "symbolic") {
      DetStrategy st;
      st.sampled = o_.check == "sampled";
      st.seed = o_.seed;
      st.trials = int(o_.trials);
      rep_.inputs["seed"] = st.seed;
      rep_.inputs["trials"] = st.trials;
      auto dc = hankel_det_check(m, n, st);
      rep_.check(std::string("factorization (") + (st.sampled ? "sampled" : "symbolic") + ")", dc.passed,
                 dc.passed ? std::nullopt : std::optional<std::string>("at point " + dc.residual_point),
                 std::to_string(dc.points) + " points");
    }
  }

  void report_cotangent(const CotangentData& cd) {
    rep_.results["ebar"] = detail::show_matrix(cd.ebar);
    rep_.results["filtration_degree"] = cd.filtration_degree;
    rep_.check("B·A word identity", cd.word_identity);
    rep_.check("power-sum reduction", cd.power_reduction);
    rep_.check("ebar idempotent", cd.structural, cd.structural ? "0" : cd.failure + ": " + cd.residual.to_string(),
               cd.certificate);
    if (cd.entrywise_checked)
      rep_.check("entrywise reduction", cd.entrywise_passed,
                 cd.entrywise_passed ? "0" : cd.failure + ": " + cd.residual.to_string());
  }

  void cotangent_cmd() {
    HeckeSymmetry hs = symmetry();
    auto [m, n] = shape(&hs);
    auto pr = profile(m, n, hs.q, true);
    if (pr.h) fail(ErrorKind::InvalidArgument, "use mrea for profiles with --h");
    report_cotangent(qorbit::cotangent(hs, pr, o_.cap));
  }

  void koszul() {
    HeckeSymmetry hs = symmetry();
    const std::string& c = o_.check;
    static const std::vector<std::string> known{"all", "projectors", "trace", "conjecture1", "p2-action", "d1", "d2"};
    if (std::find(known.begin(), known.end(), c) == known.end())
      fail(ErrorKind::InvalidArgument, "unknown --check " + c);
    rep_.inputs["check"] = c;
    std::vector<unsigned> ks{2, 3};
    if (o_.k) {
      if (*o_.k != 2 && *o_.k != 3 && c != "d1") fail(ErrorKind::InvalidArgument, "--k must be 2 or 3");
      ks = {*o_.k};
      rep_.inputs["k"] = *o_.k;
    }
    ProjectorOptions po;
    po.seed = o_.seed;
    ProjectorSet ps;
    try {
      ps = build_projectors(hs, po);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ProjectorAxiomFailed) throw;
      rep_.check("projector axioms", false, e.what());
      return;
    }
    auto want = [&](const char* name) { return c == "all" || c == name; };
    if (want("projectors"))
      rep_.check("projector axioms", true, "0",
                 ps.arity3_exact ? "arity 3 on every basis vector"
                                 : "arity 3 on " + std::to_string(ps.arity3_samples) + " sampled vectors");
    std::uint32_t G = std::uint32_t(hs.N);
    if (want("trace"))
      for (unsigned k : ks) rep_.check("trace vector routes k=" + std::to_string(k), trace_routes_agree(k, hs));
    if (want("conjecture1"))
      for (unsigned k : ks) {
        auto r = conjecture1_check(k, ps, hs);
        rep_.check(r.name, r.passed, detail::show_residual(r.residual, G, k));
      }
    if (want("p2-action"))
      for (const auto& r : p2_action_identity(ps, hs)) rep_.check(r.name, r.passed, detail::show_residual(r.residual, G, 3));
    if (want("d1")) {
      unsigned K = c == "d1" && o_.k ? *o_.k : 3;
      auto g = gradient_matrices(hs, K);
      for (unsigned k = 1; k <= K; ++k) {
        auto d1 = differential_d1(hs, k);
        bool ok = true;
        NCPoly sum;
        for (std::size_t r = 0; r < d1.size(); ++r) {
          std::size_t i = r / hs.N, j = r % hs.N;
          ok = ok && d1[r].second == g.A(j * hs.N + i, k - 1);
          sum += d1[r].first * d1[r].second;
        }
        rep_.check("d1 k=" + std::to_string(k) + " matches gradient", ok && sum == power_sum_element(k, hs));
      }
    }
    if (want("d2")) {
      auto r = d_squared_check_r2(ps);
      rep_.check(r.name, r.passed, detail::show_residual(r.residual, G, 2));
    }
  }

  void mrea() {
    HeckeSymmetry hs = symmetry();
    auto [m, n] = shape(&hs);
    Scalar h = o_.h.empty() ? Scalar::h() : parse_scalar(o_.h);
    rep_.inputs["h"] = h.to_string();
    std::vector<SymExpr> coeffs;
    bool ok = true;
    std::string failure;
    if (hs.q.is_one()) {
      Scalar q = Scalar::q();
      auto generic = builtin::q_super(m, n, q);
      for (const auto& e : hatted_ch(int(m), int(n), q, h, detail::trace_c(generic))) coeffs.push_back(at_q_one(e));
      SuperPbw pbw(hs, h);
      NCMatrix chm = hatted_ch_matrix(hs, coeffs);
      for (std::size_t a = 0; a < hs.N && ok; ++a)
        for (std::size_t b = 0; b < hs.N && ok; ++b) {
          NCPoly r = pbw.reduce(chm(a, b));
          if (!r.is_zero()) ok = false, failure = r.to_string();
        }
      rep_.check("hatted ch identity (q→1, straightening)", ok, ok ? "0" : failure);
    } else {
      coeffs = hatted_ch(int(m), int(n), hs.q, h, detail::trace_c(hs));
      auto rs = relation_space(hs, RelationKind::Mrea, h);
      NCMatrix chm = hatted_ch_matrix(hs, coeffs);
      for (std::size_t a = 0; a < hs.N && ok; ++a)
        for (std::size_t b = 0; b < hs.N && ok; ++b) {
          auto z = is_zero_mod(chm(a, b), rs, o_.cap);
          if (!z.zero) ok = false, failure = z.residual.to_string();
        }
      rep_.check("hatted ch identity (shift)", ok, ok ? "0" : failure);
    }
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : coeffs) arr.push_back(c.to_string());
    rep_.results["hatted_coefficients"] = arr;

    if (o_.mu.empty() && o_.nu.empty()) return;
    if (o_.h.empty()) fail(ErrorKind::InvalidArgument, "an orbit needs a numeric --h");
    auto pr = profile(m, n, hs.q, true);
    auto v = regularity(pr);
    rep_.check("regular", v.regular);
    if (!v.regular) return;
    auto qd = quantum_dims(pr);
    rep_.results["d"] = detail::show(qd.d);
    rep_.results["d_prime"] = detail::show(qd.dprime);
    report_cotangent(nc_orbit(hs, pr, o_.cap).cotangent);
  }
};

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnboundSymbol: return 2;
    case ErrorKind::ResourceLimit: return 3;
    default: return 1;
  }
}

inline void add_common(CLI::App* sub, Options& o) {
  sub->set_help_flag("--help", "print this help");
  sub->add_option("--builtin", o.builtin, "flip | superflip | dj_gl | q_super");
  sub->add_option("--file", o.file, "R-matrix JSON file");
  sub->add_option("--N", o.N, "dimension for flip and dj_gl");
  sub->add_option("--m", o.m, "even part");
  sub->add_option("--n", o.n, "odd part");
  sub->add_option("--q", o.q, "deformation parameter (rational or q)");
  sub->add_option("--h", o.h, "mREA parameter");
  sub->add_option("--mu", o.mu, "even eigenvalues, comma separated");
  sub->add_option("--nu", o.nu, "odd eigenvalues, comma separated");
  sub->add_option("--check", o.check, "which check to run");
  sub->add_option("--k", o.k, "degree");
  sub->add_option("--seed", o.seed, "seed for sampled checks");
  sub->add_option("--trials", o.trials, "points for sampled checks");
  sub->add_option("--depth", o.depth, "bi-rank depth");
  sub->add_option("--cap", o.cap, "largest degree component, in words");
  sub->add_option("--out", o.out, "write the JSON report here");
  sub->add_option("--format", o.format, "text | json")->check(CLI::IsMember({"text", "json"}));
  sub->add_flag("--no-timing", o.no_timing, "report elapsed_ms as 0");
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact verification of braided orbits, REA identities and projector calculus"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);
  Options o;
  app.name("qorbit_cli");
  const std::pair<const char*, const char*> subs[] = {
      {"check-r", "validate YBE, Hecke relation and skew-invertibility"},
      {"birank", "bi-rank (m|n) from the Poincare series of the antisymmetric algebra"},
      {"ch", "Cayley-Hamilton identity and centrality of Tr_R L^k in the REA"},
      {"param", "quantum dimensions, power sums and CH coefficients on an eigenvalue profile"},
      {"orbit", "regularity and Hankel determinant of an eigenvalue profile"},
      {"cotangent", "idempotency of the cotangent projector modulo the orbit ideal"},
      {"koszul", "Q-operator projectors, trace symmetrization and differentials"},
      {"mrea", "modified REA: hatted CH identity, quantum dims and orbits"},
  };
  for (const auto& [name, desc] : subs) add_common(app.add_subcommand(name, desc), o);
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream so, se;
    int rc = app.exit(e, so, se);
    out << so.str();
    err << se.str();
    return rc == 0 ? 0 : 2;
  }
  o.command = app.get_subcommands().front()->get_name();

  Runner runner(o);
  auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    runner.run();
  } catch (const Error& e) {
    rc = exit_code(e.kind());
    if (rc == 2) {
      err << "usage error: " << e.what() << "\n";
      return 2;
    }
    runner.report().check(std::string("error: ") + std::string(to_string(e.kind())), false, e.what());
  }
  Report& rep = runner.report();
  if (!o.no_timing)
    rep.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  if (rc == 0 && !rep.passed()) rc = 1;
  if (o.format == "json")
    out << rep.to_json().dump(2) << "\n";
  else
    out << rep.to_text();
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) {
      err << "cannot write " << o.out << "\n";
      return 2;
    }
    f << rep.to_json().dump(2) << "\n";
  }
  return rc;
}

}  // namespace qorbit::cli
