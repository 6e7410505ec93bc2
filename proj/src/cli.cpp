#include "kzmodp/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kzmodp/arith.hpp"
#include "kzmodp/cartier.hpp"
#include "kzmodp/compare.hpp"
#include "kzmodp/io.hpp"
#include "kzmodp/kernels.hpp"
#include "kzmodp/kz.hpp"
#include "kzmodp/rational.hpp"

namespace kzmodp::cli {

using nlohmann::json;

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

// Raised for input files that cannot be read or parsed; reported as a
// verification failure rather than a parameter error.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::uint64_t p = 0, q = 0, n = 0;
  std::vector<std::uint32_t> lambda;
  std::string kind = "I";
  std::string route = "A";
  std::string curve = "x";
  std::optional<std::uint64_t> max_degree;
  unsigned b = 1;
  std::uint64_t m = 1;
  int threads = 0;
  std::uint64_t seed = 1;
  std::string out_file;
  std::string input;
  std::string mode = "top-level-nonzero";
  std::vector<std::uint64_t> k_tuple;
  bool expand = false;
  bool full = false;
  std::uint64_t lucas_max = 300;
};

struct Outcome {
  json result;
  bool pass = true;
  std::string summary;
};

PrimeConfig config_of(const Options& o) { return make_prime_config(o.p, o.q, o.n); }

Weights weights_of(const Options& o, const PrimeConfig& cfg) {
  Weights w = o.lambda.empty() ? unit_weights(cfg) : Weights(o.lambda.begin(), o.lambda.end());
  validate_weights(w, cfg);
  return w;
}

Weights fused_weights_of(const Options& o, const PrimeConfig& cfg) {
  Weights w = weights_of(o, cfg);
  std::uint64_t s = 0;
  for (auto x : w) s += x;
  if (s != cfg.n) throw ConfigError("fused weights must sum to n");
  return w;
}

std::uint64_t max_degree_of(const Options& o, const PrimeConfig& cfg) {
  return o.max_degree ? *o.max_degree : 3ull * cfg.p;
}

json kz_json(const KzReport& r) {
  json j{{"pass", r.pass}, {"checks", r.checks}, {"mode", r.mode == KzMode::Reduced ? "reduced" : "cleared"}};
  if (!r.pass) {
    j["message"] = r.message;
    if (r.fail_i) j["equation"] = *r.fail_i;
    if (r.fail_coord) j["coordinate"] = *r.fail_coord;
  }
  return j;
}

Outcome cmd_config(const Options& o) {
  auto cfg = config_of(o);
  auto w = weights_of(o, cfg);
  auto me = minimal_exponents(w, cfg);
  Outcome out;
  out.result = to_json(cfg);
  out.result["lambda"] = w;
  out.result["M_minimal"] = me.minimal.M;
  out.result["M_canonical"] = me.canonical.M;
  out.result["rank"] = module_rank(w, cfg);
  out.result["genus"] = static_cast<std::uint64_t>(cfg.k) * cfg.q * (cfg.q - 1) / 2;
  out.summary = "d=" + std::to_string(cfg.d) + " rank=" + out.result["rank"].dump();
  return out;
}

Route route_of(const Options& o) {
  if (o.route == "A" || o.route == "a") return Route::A;
  if (o.route == "B" || o.route == "b") return Route::B;
  throw ConfigError("route must be A or B");
}

Outcome cmd_solve(const Options& o) {
  auto cfg = config_of(o);
  SolutionBasis basis;
  if (o.kind == "I") {
    auto w = weights_of(o, cfg);
    basis = arithmetic_solutions(w, minimal_exponents(w, cfg).minimal, cfg);
  } else {
    if (!o.lambda.empty()) {
      auto w = weights_of(o, cfg);
      if (w != unit_weights(cfg)) throw ConfigError("J and K bases need unit weights");
    }
    basis = o.kind == "J" ? basis_J(cfg, route_of(o)) : basis_K(cfg, route_of(o));
  }
  Outcome out;
  out.result = to_json(basis);
  out.result["config"] = to_json(cfg);
  out.summary = std::to_string(basis.members.size()) + " " + o.kind + " solutions";
  return out;
}

CurveSpec curve_of(const Options& o, const PrimeConfig& cfg) {
  if (o.curve == "x") return curve_X(cfg);
  if (o.curve == "y") return curve_Y(cfg);
  if (o.curve == "xtilde") {
    if (o.lambda.empty()) throw ConfigError("curve xtilde needs --lambda");
    return curve_XTilde(cfg, fused_weights_of(o, cfg));
  }
  throw ConfigError("curve must be x, xtilde or y");
}

Outcome cmd_hasse_witt(const Options& o) {
  auto cfg = config_of(o);
  auto curve = curve_of(o, cfg);
  HasseWittMatrix hw(curve, cfg);
  json blocks = json::array();
  for (std::uint32_t a = 1; a < cfg.q; ++a) blocks.push_back(to_json(hw.block(a)));
  Outcome out;
  out.result = {{"curve", to_string(curve.type)},
                {"weights", curve.weights},
                {"vars", curve.vars},
                {"genus", hw.genus()},
                {"blocks", blocks}};
  if (o.full) {
    json full = json::array();
    for (const auto& row : hw.full()) {
      json r = json::array();
      for (const auto& e : row) r.push_back(to_json(e));
      full.push_back(std::move(r));
    }
    out.result["full"] = std::move(full);
  }
  out.summary = std::to_string(cfg.q - 1) + " blocks for curve " + to_string(curve.type);
  return out;
}

Outcome cmd_iterate(const Options& o) {
  auto cfg = config_of(o);
  auto I = basis_I(cfg);
  HasseWittMatrix hw(curve_X(cfg), cfg);
  auto it = iterated_solution(o.b, o.m, cfg, hw, I);
  json coeffs = json::array();
  for (const auto& c : it.coeffs) coeffs.push_back(to_json(c));
  auto rep = verify_iterated(it, o.expand ? UINT64_MAX : 2000000);
  Outcome out;
  out.result = {{"b", o.b},
                {"m", o.m},
                {"coefficients", coeffs},
                {"kz", kz_json(rep.kz)},
                {"kz_method", rep.method},
                {"coefficients_in_Fp_zp", rep.coefficients_in_frobenius_image}};
  if (o.expand) out.result["vec"] = to_json(it.expand());
  out.pass = rep.pass;
  out.summary = "iterated solution b=" + std::to_string(o.b) + " m=" + std::to_string(o.m) +
                (out.pass ? " passes" : " FAILS");
  return out;
}

Outcome cmd_fusion(const Options& o) {
  auto cfg = config_of(o);
  auto fused = fused_weights_of(o, cfg);
  auto I = basis_I(cfg);
  auto res = fusion(I, contiguous_partition(fused), cfg);
  json images = json::array();
  bool kz_ok = true;
  std::vector<PolyVector> nonzero;
  for (const auto& img : res.images) {
    bool zero = std::all_of(img.vec.begin(), img.vec.end(), [](const FpPoly& f) { return f.is_zero(); });
    auto rep = verify_kz(img.vec, res.fused_weights, cfg);
    kz_ok = kz_ok && rep.pass;
    if (!zero) nonzero.push_back(img.vec);
    images.push_back({{"l", img.l}, {"m", img.m}, {"zero", zero}, {"kz", kz_json(rep)}, {"vec", to_json(img.vec)}});
  }
  const std::uint64_t expected = module_rank(res.fused_weights, cfg);
  const std::size_t span = module_span_rank(nonzero, cfg.p, o.seed);
  Outcome out;
  out.result = {{"fused_weights", res.fused_weights},
                {"fused_M", res.fused_M.M},
                {"partition", res.partition},
                {"consistent", res.consistent},
                {"images", images},
                {"span_rank", span},
                {"expected_rank", expected}};
  out.pass = res.consistent && kz_ok && span == expected;
  out.summary = "fusion span rank " + std::to_string(span) + " expected " + std::to_string(expected);
  return out;
}

json read_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("input is not valid JSON: ") + e.what());
  }
}

Outcome verify_kz_input(const Options& o) {
  json doc = read_input(o.input);
  const json* sols = &doc;
  if (doc.is_object() && doc.contains("result")) sols = &doc["result"];
  if (sols->is_object() && sols->contains("solutions")) sols = &(*sols)["solutions"];
  if (!sols->is_array()) throw InputError("input holds no solution array");
  Outcome out;
  json reports = json::array();
  for (const auto& s : *sols) {
    try {
      auto getu = [&](const char* key, std::uint64_t fallback) {
        return s.contains(key) ? s.at(key).get<std::uint64_t>() : fallback;
      };
      auto cfg = make_prime_config(getu("p", o.p), getu("q", o.q), getu("n", o.n));
      PolyVector vec = poly_vector_from_json(s.at("vec"));
      if (vec.front().p() != cfg.p) throw std::invalid_argument("coefficient field differs from p");
      Weights w = s.contains("lambda") ? s.at("lambda").get<Weights>() : weights_of(o, cfg);
      if (w.size() != vec.size()) throw std::invalid_argument("weights and vector lengths differ");
      auto rep = verify_kz(vec, w, cfg);
      out.pass = out.pass && rep.pass;
      json r = kz_json(rep);
      if (s.contains("m")) r["m"] = s["m"];
      reports.push_back(std::move(r));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw InputError(std::string("malformed solution: ") + e.what());
    }
  }
  out.result = {{"check", "kz"}, {"input", o.input}, {"reports", reports}};
  out.summary = std::to_string(reports.size()) + " input solutions " + (out.pass ? "pass" : "FAIL");
  return out;
}

Outcome verify_kz_generated(const Options& o) {
  auto cfg = config_of(o);
  Outcome out;
  json reports = json::array();
  auto record = [&](const std::string& what, std::uint64_t m, const KzReport& rep) {
    out.pass = out.pass && rep.pass;
    json r = kz_json(rep);
    r["family"] = what;
    r["m"] = m;
    reports.push_back(std::move(r));
  };
  auto w = weights_of(o, cfg);
  auto I = arithmetic_solutions(w, minimal_exponents(w, cfg).minimal, cfg);
  for (const auto& s : I.members) record("I", s.m, verify_kz(s.vec, w, cfg));
  if (w == unit_weights(cfg)) {
    auto J = basis_J_from_I(I);
    for (const auto& s : J.members) record("J", s.m, verify_kz(s.vec, w, cfg));
    HasseWittMatrix hw(curve_X(cfg), cfg);
    const std::uint64_t range = static_cast<std::uint64_t>(cfg.a_at(o.b + 1)) * cfg.k;
    for (std::uint64_t m = 1; m <= range; ++m) {
      auto it = iterated_solution(o.b, m, cfg, hw, I);
      auto rep = verify_iterated(it);
      record("iterated b=" + std::to_string(o.b) + " (" + rep.method + ")", m, rep.kz);
      out.pass = out.pass && rep.pass;
    }
  }
  out.result = {{"check", "kz"}, {"reports", reports}};
  out.summary = std::to_string(reports.size()) + " generated solutions " + (out.pass ? "pass" : "FAIL");
  return out;
}

Outcome verify_rank(const Options& o) {
  auto cfg = config_of(o);
  auto w = weights_of(o, cfg);
  const std::uint64_t rank = module_rank(w, cfg);
  auto basis = arithmetic_solutions(w, minimal_exponents(w, cfg).minimal, cfg);
  std::vector<PolyVector> members;
  for (const auto& s : basis.members) members.push_back(s.vec);
  auto cert = independence_certificate(members, cfg.p, o.seed);
  Outcome out;
  out.result = {{"check", "rank"},
                {"lambda", w},
                {"rank", rank},
                {"a1k_minus_e", static_cast<std::uint64_t>(cfg.a1()) * cfg.k -
                                    e_vanishing(w, cfg.a1(), cfg.q).total},
                {"basis_size", members.size()},
                {"certificate", {{"disjoint_supports", cert.disjoint_supports}, {"rank", cert.rank}}}};
  out.pass = cert.pass && members.size() == rank;
  std::uint64_t total = 0;
  for (auto x : w) total += x;
  if (total == cfg.n && w != unit_weights(cfg)) {
    // Also span the fusion images of the unit-weight basis.
    auto res = fusion(basis_I(cfg), contiguous_partition(w), cfg);
    std::vector<PolyVector> imgs;
    for (const auto& img : res.images) imgs.push_back(img.vec);
    std::size_t span = module_span_rank(imgs, cfg.p, o.seed);
    out.result["fusion_span_rank"] = span;
    out.pass = out.pass && span == rank;
  }
  out.summary = "rank " + std::to_string(rank) + (out.pass ? " confirmed" : " NOT confirmed");
  return out;
}

Outcome verify_independence(const Options& o) {
  auto cfg = config_of(o);
  auto w = weights_of(o, cfg);
  auto basis = arithmetic_solutions(w, minimal_exponents(w, cfg).minimal, cfg);
  std::vector<PolyVector> members;
  for (const auto& s : basis.members) members.push_back(s.vec);
  auto cert = independence_certificate(members, cfg.p, o.seed);
  Outcome out;
  out.result = {{"check", "independence"},
                {"disjoint_supports", cert.disjoint_supports},
                {"rank", cert.rank},
                {"expected", cert.expected},
                {"message", cert.message}};
  out.pass = cert.pass;
  out.summary = "independence " + std::string(cert.pass ? "certified" : "NOT certified");
  return out;
}

NTermMode mode_of(const Options& o) {
  if (o.mode == "top-level-nonzero") return NTermMode::TopLevelNonzero;
  if (o.mode == "literal") return NTermMode::Literal;
  throw ConfigError("mode must be top-level-nonzero or literal");
}

Outcome verify_decomp(const Options& o) {
  auto cfg = config_of(o);
  auto rep = verify_decomposition(cfg, max_degree_of(o, cfg), mode_of(o));
  Outcome out;
  out.result = rep.to_json();
  out.result["check"] = "decomposition";
  out.pass = rep.pass();
  out.summary = "decomposition: " + std::to_string(rep.matched) + " matched, " +
                std::to_string(rep.mismatched.size()) + " mismatched, " +
                std::to_string(rep.support_collisions.size()) + " collisions";
  return out;
}

Outcome verify_lucas(const Options& o) {
  auto cfg = config_of(o);
  const std::uint32_t p = cfg.p;
  Outcome out;
  // Factorial oracle.
  std::vector<BigInt> fact(o.lucas_max + 1, BigInt(1));
  for (std::uint64_t i = 1; i <= o.lucas_max; ++i) fact[i] = fact[i - 1] * i;
  std::uint64_t lucas_checked = 0, lucas_bad = 0;
  for (std::uint64_t nn = 0; nn <= o.lucas_max; ++nn)
    for (std::uint64_t m = 0; m <= nn; ++m, ++lucas_checked)
      if (lucas_binom(nn, m, p) != reduce_mod_p(BigInt(fact[nn] / (fact[m] * fact[nn - m])), p)) ++lucas_bad;
  // Exact rational product for binom(-1/q, m).
  NegInvQBinomials table(cfg.q, 500);
  std::uint64_t neg_bad = 0, neg_negative_val = 0;
  for (std::uint64_t m = 0; m <= 500; ++m) {
    if (table(m) != 0 && p_valuation(table(m), p) < 0) ++neg_negative_val;
    if (binom_neg_inv_q(m, cfg) != reduce_mod_p(table(m), p)) ++neg_bad;
  }
  // Periodic digits against the lazily expanded ones.
  std::mt19937_64 rng(o.seed);
  std::uint64_t rat_bad = 0;
  const int rat_trials = 50;
  for (int t = 0; t < rat_trials; ++t) {
    std::int64_t v, u;
    do {
      v = 2 + static_cast<std::int64_t>(rng() % 30);
      u = -1 - static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(v - 1));
    } while (v % p == 0 || std::gcd(u, v) != 1);
    std::uint64_t m = rng() % 100000;
    if (binom_rational(u, v, m, p) != binom_rational_periodic(u, v, m, p)) ++rat_bad;
  }
  out.result = {{"check", "lucas"},
                {"lucas", {{"checked", lucas_checked}, {"failures", lucas_bad}}},
                {"neg_inv_q", {{"checked", 501}, {"failures", neg_bad}, {"negative_valuations", neg_negative_val}}},
                {"rational", {{"checked", rat_trials}, {"failures", rat_bad}}}};
  out.pass = lucas_bad == 0 && neg_bad == 0 && neg_negative_val == 0 && rat_bad == 0;
  out.summary = std::string("binomial congruences ") + (out.pass ? "pass" : "FAIL");
  return out;
}

Outcome verify_regularity(const Options& o) {
  auto cfg = config_of(o);
  auto w = fused_weights_of(o, cfg);
  auto curve = w == unit_weights(cfg) ? curve_X(cfg) : curve_XTilde(cfg, w);
  auto hat = cartier_hat(curve, cfg);
  auto rep = check_regularity(hat, cfg);
  bool kz_ok = true;
  json rows = json::array();
  for (const auto& r : hat.rows) {
    auto k = verify_kz(r.vec, w, cfg);
    kz_ok = kz_ok && k.pass;
    rows.push_back({{"m", r.m}, {"x_power", r.x_power}, {"kz", kz_json(k)}});
  }
  Outcome out;
  out.result = {{"check", "regularity"}, {"weights", w},   {"M", hat.M},      {"required", rep.required},
                {"order", rep.order},    {"rows", rows},   {"message", rep.message}};
  out.pass = rep.pass && kz_ok;
  out.summary = std::string("regularity ") + (out.pass ? "holds" : "FAILS");
  return out;
}

Outcome cmd_compare(const Options& o) {
  auto cfg = config_of(o);
  if (!o.k_tuple.empty()) {
    if (o.k_tuple.size() + 2 != cfg.n) throw ConfigError("--k needs n - 2 entries");
    auto lc = l_coefficient(o.k_tuple, cfg);
    auto sp = shift_profile(o.k_tuple, cfg);
    auto pf = product_form(o.k_tuple, cfg);
    Outcome out;
    out.result = {{"L", to_json(lc)}, {"profile", to_json(sp)}, {"product_form", pf}};
    out.pass = pf == *lc.reduced;
    out.summary = std::string("tuple ") + (sp.admissible ? "admissible" : "not admissible");
    return out;
  }
  return verify_decomp(o);
}

void apply_threads(const Options& o) {
  int t = o.threads;
  if (t <= 0) {
    if (const char* env = std::getenv("KZMODP_THREADS")) t = std::atoi(env);
  }
  if (t > 0) set_num_threads(t);
}

json parameters_of(const std::string& command, const Options& o) {
  json j{{"p", o.p}, {"q", o.q}, {"n", o.n}, {"lambda", o.lambda}, {"seed", o.seed}};
  if (o.max_degree) j["max_degree"] = *o.max_degree;
  if (command == "solve") {
    j["kind"] = o.kind;
    j["route"] = o.route;
  }
  if (command == "hasse-witt") j["curve"] = o.curve;
  if (command == "iterate" || command == "verify kz") {
    j["b"] = o.b;
    if (command == "iterate") j["m"] = o.m;
  }
  if (command == "compare" || command == "verify decomposition") j["mode"] = o.mode;
  if (!o.k_tuple.empty()) j["k"] = o.k_tuple;
  if (!o.input.empty()) j["input"] = o.input;
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arithmetic KZ solutions and Hasse-Witt matrices over F_p", "kzmodp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--p", o.p, "prime p")->required();
    sub->add_option("--q", o.q, "prime q < p")->required();
    sub->add_option("--n", o.n, "number of points, n = kq + 1")->required();
    sub->add_option("--lambda", o.lambda, "weights, comma separated")->delimiter(',');
    sub->add_option("--threads", o.threads, "worker threads (default: KZMODP_THREADS or all)");
    sub->add_option("--seed", o.seed, "seed for randomised certificates");
    sub->add_option("--out", o.out_file, "write JSON here instead of stdout");
  };

  auto* c_config = app.add_subcommand("config", "print the prime-pair configuration");
  common(c_config);
  auto* c_solve = app.add_subcommand("solve", "arithmetic solutions in the I, J or K basis");
  common(c_solve);
  c_solve->add_option("--kind", o.kind, "basis kind")->check(CLI::IsMember({"I", "J", "K"}));
  c_solve->add_option("--route", o.route, "construction route for J and K")->check(CLI::IsMember({"A", "B"}));
  auto* c_hw = app.add_subcommand("hasse-witt", "Hasse-Witt blocks of a superelliptic curve");
  common(c_hw);
  c_hw->add_option("--curve", o.curve, "curve")->check(CLI::IsMember({"x", "xtilde", "y"}));
  c_hw->add_flag("--full", o.full, "also print the assembled matrix");
  auto* c_iter = app.add_subcommand("iterate", "iterated arithmetic solution");
  common(c_iter);
  c_iter->add_option("--b", o.b, "number of Hasse-Witt factors");
  c_iter->add_option("--m", o.m, "index, 1 <= m <= a_{b+1} k");
  c_iter->add_flag("--expand", o.expand, "include the expanded vector");
  auto* c_fusion = app.add_subcommand("fusion", "fuse the unit-weight basis to --lambda");
  common(c_fusion);
  auto* c_verify = app.add_subcommand("verify", "run one verification");
  std::string check;
  c_verify->add_option("check", check, "what to verify")
      ->required()
      ->check(CLI::IsMember({"kz", "rank", "independence", "decomposition", "lucas", "regularity"}));
  common(c_verify);
  c_verify->add_option("--input", o.input, "solutions JSON to check (kz)");
  c_verify->add_option("--max-degree", o.max_degree, "truncation degree (decomposition, default 3p)");
  c_verify->add_option("--mode", o.mode, "decomposition mode")->check(CLI::IsMember({"top-level-nonzero", "literal"}));
  c_verify->add_option("--b", o.b, "iteration depth for generated kz checks");
  c_verify->add_option("--lucas-max", o.lucas_max, "upper bound for the factorial oracle");
  auto* c_compare = app.add_subcommand("compare", "Taylor coefficients against iterated solutions");
  common(c_compare);
  c_compare->add_option("--max-degree", o.max_degree, "truncation degree (default 3p)");
  c_compare->add_option("--mode", o.mode, "decomposition mode")->check(CLI::IsMember({"top-level-nonzero", "literal"}));
  c_compare->add_option("--k", o.k_tuple, "single tuple k_3..k_n, comma separated")->delimiter(',');

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  std::string command;
  std::function<Outcome()> fn;
  if (c_config->parsed()) {
    command = "config";
    fn = [&] { return cmd_config(o); };
  } else if (c_solve->parsed()) {
    command = "solve";
    fn = [&] { return cmd_solve(o); };
  } else if (c_hw->parsed()) {
    command = "hasse-witt";
    fn = [&] { return cmd_hasse_witt(o); };
  } else if (c_iter->parsed()) {
    command = "iterate";
    fn = [&] { return cmd_iterate(o); };
  } else if (c_fusion->parsed()) {
    command = "fusion";
    fn = [&] { return cmd_fusion(o); };
  } else if (c_compare->parsed()) {
    command = "compare";
    fn = [&] { return cmd_compare(o); };
  } else {
    command = "verify " + check;
    if (check == "kz")
      fn = [&] { return o.input.empty() ? verify_kz_generated(o) : verify_kz_input(o); };
    else if (check == "rank")
      fn = [&] { return verify_rank(o); };
    else if (check == "independence")
      fn = [&] { return verify_independence(o); };
    else if (check == "decomposition")
      fn = [&] { return verify_decomp(o); };
    else if (check == "lucas")
      fn = [&] { return verify_lucas(o); };
    else
      fn = [&] { return verify_regularity(o); };
  }

  apply_threads(o);
  Outcome res;
  try {
    res = fn();
  } catch (const InputError& e) {
    err << "verification failed: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  res.result["pass"] = res.pass;
  const std::string body = res.result.dump();
  json doc{{"manifest",
            {{"command", command},
             {"parameters", parameters_of(command, o)},
             {"version", kVersion},
             {"output_hash", fnv1a_hex(body)}}},
           {"result", std::move(res.result)}};
  if (o.out_file.empty()) {
    out << doc.dump(1) << "\n";
  } else {
    std::ofstream f(o.out_file);
    if (!f) {
      err << "cannot write " << o.out_file << "\n";
      return kExitInvalid;
    }
    f << doc.dump(1) << "\n";
  }
  err << command << ": " << res.summary << "\n";
  return res.pass ? kExitPass : kExitFail;
}

}  // namespace kzmodp::cli
