#include "lowmult/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lowmult/json_io.hpp"
#include "lowmult/store.hpp"

namespace lowmult {

namespace {

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

BigRat parse_rat(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return BigRat(parse_bigint(s));
  return BigRat(parse_bigint(s.substr(0, slash)), parse_bigint(s.substr(slash + 1)));
}

std::vector<std::vector<BigRat>> parse_rows(const std::string& text) {
  std::vector<std::vector<BigRat>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    if (row.empty()) continue;
    std::vector<BigRat> entries;
    std::stringstream rs(row);
    std::string tok;
    while (std::getline(rs, tok, ',')) entries.push_back(parse_rat(tok));
    rows.push_back(std::move(entries));
  }
  return rows;
}

std::vector<std::int64_t> parse_i64_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

struct Common {
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string store_path;
  bool timing = false;
};

// finishes a subcommand: print the report, optionally append to the store
void emit(const Common& common, std::ostream& out, const std::string& command, Json config,
          const Json& report, double elapsed_ms) {
  config["command"] = command;
  config["seed"] = common.seed;
  Json printed = report;
  if (common.timing) printed["elapsed_ms"] = elapsed_ms;
  if (common.format == "plain") {
    for (auto it = printed.begin(); it != printed.end(); ++it)
      out << it.key() << ": " << it.value().dump() << "\n";
  } else {
    out << printed.dump() << "\n";
  }
  if (!common.store_path.empty()) {
    ResultRecord rec;
    rec.fingerprint = config_fingerprint_hex(config.dump());
    rec.timestamp = iso_timestamp();
    rec.version = kToolVersion;
    rec.config_json = config.dump();
    rec.output_json = report.dump();  // deterministic part only
    store_append(common.store_path, rec);
  }
}

std::vector<std::uint64_t> parse_caps(const std::string& caps, const PrimeSet& ps) {
  if (caps.empty() || caps == "half") return DigitConstraintProblem::half_caps(ps);
  if (caps == "third") return DigitConstraintProblem::third_caps(ps);
  std::vector<std::uint64_t> out;
  std::stringstream ss(caps);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoull(tok));
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"central binomial coefficient low-multiplicity toolkit"};
  app.require_subcommand(1);

  Common common;
  if (const char* env = std::getenv("LOWMULT_STORE")) common.store_path = env;
  app.add_option("--seed", common.seed, "seed for randomized verifications");
  app.add_option("--format", common.format, "json|plain")->check(CLI::IsMember({"json", "plain"}));
  app.add_option("--store", common.store_path, "append-only result store (NDJSON)");
  app.add_flag("--timing", common.timing, "include wall-clock timing in the report");

  // kummer
  auto* kum = app.add_subcommand("kummer", "carry-count valuation of binom(2n,n)");
  std::string kum_n;
  std::uint64_t kum_p = 3;
  kum->add_option("--n", kum_n, "n (decimal)")->required();
  kum->add_option("--prime", kum_p, "odd prime p")->required();

  // heuristic
  auto* heu = app.add_subcommand("heuristic", "density condition sum and verdict");
  std::string heu_primes;
  unsigned heu_bits = 128;
  heu->add_option("--primes", heu_primes, "comma list of odd primes")->required();
  heu->add_option("--precision-bits", heu_bits, "fractional bits (>= 80)");

  // search
  auto* sea = app.add_subcommand("search", "multi-base digit-constraint search");
  std::string sea_primes, sea_limit, sea_caps, sea_checkpoint;
  double sea_relax = 0.0;
  unsigned sea_workers = 1;
  std::uint64_t sea_budget = 0;
  bool sea_resume = false, sea_quiet = false, sea_census = false;
  unsigned sea_bucket = 1;
  sea->add_option("--primes", sea_primes)->required();
  sea->add_option("--limit", sea_limit, "inclusive upper bound (decimal)")->required();
  sea->add_option("--caps", sea_caps, "half | third | explicit comma list");
  sea->add_option("--relax", sea_relax, "epsilon in (0,1): allowed violating-digit fraction");
  sea->add_option("--workers", sea_workers, "worker threads");
  sea->add_option("--node-budget", sea_budget, "stop after this many enumerator nodes");
  sea->add_option("--checkpoint", sea_checkpoint, "checkpoint file path");
  sea->add_flag("--resume", sea_resume, "resume from --checkpoint");
  sea->add_flag("--quiet", sea_quiet, "suppress the integer list");
  sea->add_flag("--census", sea_census, "print power-of-two census buckets instead");
  sea->add_option("--bucket-exponent", sea_bucket, "census bucket exponent step");

  // construct
  auto* con = app.add_subcommand("construct", "block-by-block low-multiplicity construction");
  std::string con_primes, con_sbudget = "100000", con_nout;
  std::uint64_t con_N = 0;
  unsigned con_H = 0;
  std::int64_t con_t = -1;
  double con_eps = 0.0;
  unsigned con_workers = 0;
  bool con_blocks = false;
  con->add_option("--primes", con_primes)->required();
  con->add_option("--bits", con_N, "target bit length N")->required();
  con->add_option("--window", con_H, "digit window H (default max(2, ceil(log log N)))");
  con->add_option("--offset", con_t, "block offset t; omitted = sweep all");
  con->add_option("--s-budget", con_sbudget, "multiplier search budget");
  con->add_option("--epsilon", con_eps, "report the valuation check at this epsilon");
  con->add_option("--n-out", con_nout, "write n as big-endian hex to this file");
  con->add_option("--workers", con_workers, "sweep worker threads");
  con->add_flag("--emit-blocks", con_blocks, "include the per-block ledger in the report");

  // equidist
  auto* eq = app.add_subcommand("equidist", "equidistribution diagnostics");
  eq->require_subcommand(1);
  auto* eq_orbit = eq->add_subcommand("orbit", "fractional-part orbit sample (CSV)");
  std::string eqo_primes;
  std::size_t eqo_count = 0;
  eq_orbit->add_option("--primes", eqo_primes)->required();
  eq_orbit->add_option("--count", eqo_count)->required();

  auto* eq_weyl = eq->add_subcommand("weyl", "Weyl sum magnitudes (CSV)");
  std::string eqw_primes;
  std::size_t eqw_count = 0;
  std::vector<std::string> eqw_ks;
  eq_weyl->add_option("--primes", eqw_primes)->required();
  eq_weyl->add_option("--count", eqw_count)->required();
  eq_weyl->add_option("--k", eqw_ks, "frequency vector, comma list; repeatable")->required();

  auto* eq_boxes = eq->add_subcommand("boxes", "box occupancy");
  std::string eqb_primes;
  std::size_t eqb_count = 0;
  std::uint64_t eqb_P = 0;
  std::size_t eqb_krel = 0;
  eq_boxes->add_option("--primes", eqb_primes)->required();
  eq_boxes->add_option("--count", eqb_count)->required();
  eq_boxes->add_option("--P", eqb_P, "boxes per axis")->required();
  eq_boxes->add_option("--k-rel", eqb_krel, "assumed relation count");

  auto* eq_rel = eq->add_subcommand("relations", "bounded-height integer relation search");
  std::string eqr_primes;
  std::int64_t eqr_height = 0;
  double eqr_tol = 0.0;
  eq_rel->add_option("--primes", eqr_primes)->required();
  eq_rel->add_option("--height", eqr_height)->required();
  eq_rel->add_option("--tol", eqr_tol)->required();

  auto* eq_cur = eq->add_subcommand("curves", "relation system reduction and curve family");
  std::string eqc_primes, eqc_rows;
  std::size_t eqc_verify = 0;
  double eqc_tol = 1e-9, eqc_perturb = 0.0;
  std::uint64_t eqc_seed = 1;
  eq_cur->add_option("--primes", eqc_primes)->required();
  eq_cur->add_option("--rows", eqc_rows, "relation rows 'a,b,...,rhs;...' with rational entries");
  eq_cur->add_option("--verify", eqc_verify, "verify cover on synthetic thetas over n <= N");
  eq_cur->add_option("--tol", eqc_tol, "cover tolerance");
  eq_cur->add_option("--perturb", eqc_perturb, "perturb the first dependent theta (negative control)");
  eq_cur->add_option("--synthetic-seed", eqc_seed, "seed for the synthetic thetas");

  // fourier
  auto* fo = app.add_subcommand("fourier", "discretized-curve Fourier experiments");
  fo->require_subcommand(1);

  std::string foi_primes, foi_zeta, foi_theta, foi_dump;
  std::uint64_t foi_P = 0;
  unsigned foi_H = 1;
  double foi_eps = 0.0;
  auto add_instance_opts = [&](CLI::App* sub) {
    sub->add_option("--primes", foi_primes)->required();
    sub->add_option("--P", foi_P)->required();
    sub->add_option("--H", foi_H);
    sub->add_option("--epsilon", foi_eps, "override P^eps = 10^H");
    sub->add_option("--zeta", foi_zeta, "custom curve zetas, comma list");
    sub->add_option("--theta", foi_theta, "custom curve thetas, comma list");
  };
  auto* fo_inst = fo->add_subcommand("instance", "build and report set sizes");
  add_instance_opts(fo_inst);
  fo_inst->add_option("--dump-E", foi_dump, "write E as CSV to this path");
  auto* fo_exc = fo->add_subcommand("exceptional", "build and report the exceptional set");
  add_instance_opts(fo_exc);
  auto* fo_ver = fo->add_subcommand("verify", "conclusion trials on random (x, beta)");
  add_instance_opts(fo_ver);
  std::size_t fov_trials = 100;
  bool fov_exceptional = false;
  fo_ver->add_option("--trials", fov_trials);
  fo_ver->add_flag("--exceptional", fov_exceptional, "sample x from E instead of F\\E");

  auto* fo_lem = fo->add_subcommand("lemma", "exponential-sum lower bound on random instances");
  std::size_t fol_r = 2, fol_trials = 1000;
  fo_lem->add_option("--r", fol_r);
  fo_lem->add_option("--trials", fol_trials);

  auto* fo_rem = fo->add_subcommand("remark", "near-tightness construction check");
  std::size_t for_r = 2;
  std::uint64_t for_P = 10007;
  double for_eps = 0.1;
  std::size_t for_samples = 512;
  fo_rem->add_option("--r", for_r);
  fo_rem->add_option("--P", for_P);
  fo_rem->add_option("--epsilon", for_eps);
  fo_rem->add_option("--samples", for_samples);

  // store
  auto* sto = app.add_subcommand("store", "query the result store");
  auto* sto_q = sto->add_subcommand("query", "print records matching a fingerprint");
  std::string stq_fp, stq_path;
  sto_q->add_option("--fingerprint", stq_fp, "hex fingerprint; empty = all");
  sto_q->add_option("--path", stq_path, "store path (default: --store / env)");

  std::vector<std::string> argv = args;
  try {
    std::vector<const char*> cargv;
    cargv.push_back("lowmult");
    for (const auto& a : argv) cargv.push_back(a.c_str());
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  try {
    if (kum->parsed()) {
      const auto rep = kummer_valuation(parse_bigint(kum_n), kum_p);
      Json cfg{{"n", kum_n}, {"prime", kum_p}};
      emit(common, out, "kummer", cfg, report_json(rep), elapsed_ms());
      return 0;
    }

    if (heu->parsed()) {
      const auto rep = condition_sum(PrimeSet::parse(heu_primes), heu_bits);
      Json cfg{{"primes", heu_primes}, {"precision_bits", heu_bits}};
      emit(common, out, "heuristic", cfg, report_json(rep), elapsed_ms());
      return 0;
    }

    if (sea->parsed()) {
      const PrimeSet ps = PrimeSet::parse(sea_primes);
      auto problem = DigitConstraintProblem::make(
          ps, parse_bigint(sea_limit), parse_caps(sea_caps, ps),
          sea_relax > 0 ? std::optional<double>(sea_relax) : std::nullopt);
      Json cfg{{"primes", sea_primes},
               {"limit", sea_limit},
               {"caps", sea_caps.empty() ? "half" : sea_caps},
               {"relax", sea_relax},
               {"workers", sea_workers},
               {"node_budget", sea_budget},
               {"census", sea_census}};
      if (sea_census) {
        const auto rows = census(problem, sea_bucket);
        emit(common, out, "search", cfg, census_json(rows), elapsed_ms());
        return 0;
      }
      SearchCheckpoint resume_cp;
      const SearchCheckpoint* resume = nullptr;
      if (sea_resume) {
        if (sea_checkpoint.empty()) throw std::invalid_argument("--resume needs --checkpoint");
        std::ifstream in(sea_checkpoint, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open checkpoint " + sea_checkpoint);
        resume_cp = checkpoint_load(in);
        resume = &resume_cp;
      }
      const auto outcome =
          run_search(problem, sea_workers, sea_budget, resume);
      if (!sea_quiet && outcome.completed)
        for (const auto& v : outcome.found) out << v.str() << "\n";
      Json rep;
      rep["count"] = outcome.found.size();
      rep["nodes"] = outcome.nodes;
      rep["completed"] = outcome.completed;
      if (!outcome.completed) {
        if (sea_checkpoint.empty())
          throw std::runtime_error("search interrupted by node budget but no --checkpoint given");
        std::ofstream os(sea_checkpoint, std::ios::binary | std::ios::trunc);
        checkpoint_save(*outcome.frontier, os);
        rep["checkpoint"] = sea_checkpoint;
      }
      emit(common, out, "search", cfg, rep, elapsed_ms());
      return 0;
    }

    if (con->parsed()) {
      const PrimeSet ps = PrimeSet::parse(con_primes);
      const BigInt budget = parse_bigint(con_sbudget);
      Json cfg{{"primes", con_primes}, {"bits", con_N},     {"window", con_H},
               {"offset", con_t},      {"s_budget", con_sbudget}, {"epsilon", con_eps}};
      BuildReport rep;
      std::uint64_t used_t = 0;
      if (con_t >= 0) {
        rep = build_n(ps, con_N, con_H, static_cast<std::uint64_t>(con_t), budget);
        used_t = static_cast<std::uint64_t>(con_t);
      } else {
        auto [tb, r2] = best_t_sweep(ps, con_N, con_H, budget, con_workers);
        rep = std::move(r2);
        used_t = tb;
      }
      Json j = report_json(rep, con_blocks);
      j["chosen_t"] = used_t;
      if (con_eps > 0) {
        Json checks = Json::array();
        for (const auto& pp : rep.per_prime) {
          // epsilon * log n / log p = epsilon * (digit_count - fractional slack)
          const double bound = con_eps * (static_cast<double>(bit_length(rep.n)) - 1) *
                               std::log(2.0) / std::log(static_cast<double>(pp.prime));
          Json c;
          c["prime"] = pp.prime;
          c["valuation"] = pp.valuation;
          c["bound"] = bound;
          c["ok"] = static_cast<double>(pp.valuation) <= bound;
          checks.push_back(std::move(c));
        }
        j["valuation_checks"] = checks;
      }
      if (!con_nout.empty()) {
        std::ofstream os(con_nout, std::ios::trunc);
        os << to_hex(rep.n) << "\n";
        j.erase("n");
        j["n_file"] = con_nout;
      }
      emit(common, out, "construct", cfg, j, elapsed_ms());
      return 0;
    }

    if (eq_orbit->parsed()) {
      const auto sample = orbit(PrimeSet::parse(eqo_primes), eqo_count);
      out << "n";
      for (std::size_t j = 0; j < sample.primes.r(); ++j) out << ",v" << (j + 1);
      out << "\n";
      for (std::size_t n = 1; n <= sample.N; ++n) {
        out << n;
        for (std::size_t j = 0; j < sample.primes.r(); ++j) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.15f", sample.value(n, j));
          out << "," << buf;
        }
        out << "\n";
      }
      return 0;
    }

    if (eq_weyl->parsed()) {
      const auto sample = orbit(PrimeSet::parse(eqw_primes), eqw_count);
      out << "k,magnitude\n";
      for (const auto& ks : eqw_ks) {
        const auto k = parse_i64_list(ks);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9e", weyl_sum(sample, k));
        out << "\"" << ks << "\"," << buf << "\n";
      }
      return 0;
    }

    if (eq_boxes->parsed()) {
      const auto sample = orbit(PrimeSet::parse(eqb_primes), eqb_count);
      const auto rep = box_occupancy(sample, eqb_P, eqb_krel);
      Json cfg{{"primes", eqb_primes}, {"count", eqb_count}, {"P", eqb_P}, {"k_rel", eqb_krel}};
      emit(common, out, "equidist boxes", cfg, report_json(rep), elapsed_ms());
      return 0;
    }

    if (eq_rel->parsed()) {
      const auto hits = relation_search(PrimeSet::parse(eqr_primes), eqr_height, eqr_tol);
      Json cfg{{"primes", eqr_primes}, {"height", eqr_height}, {"tol", eqr_tol}};
      emit(common, out, "equidist relations", cfg, report_json(hits), elapsed_ms());
      return 0;
    }

    if (eq_cur->parsed()) {
      const PrimeSet ps = PrimeSet::parse(eqc_primes);
      const auto rows = parse_rows(eqc_rows);
      const auto sys = reduce_relations(rows, ps.r());
      const auto fam = make_curves(sys, ps);
      Json j;
      j["system"] = report_json(sys);
      j["family"] = report_json(fam);
      if (eqc_verify > 0) {
        auto thetas = synth_thetas(sys, eqc_seed);
        if (eqc_perturb != 0.0 && sys.k > 0) {
          const BigRat delta(static_cast<long long>(eqc_perturb * 1e9), 1000000000ll);
          thetas[sys.perm[sys.r - 1]] += delta;
        }
        const BigRat tol(static_cast<long long>(eqc_tol * 1e12), 1000000000000ll);
        j["cover"] = report_json(verify_curve_cover(sys, thetas, eqc_verify, tol));
      }
      Json cfg{{"primes", eqc_primes}, {"rows", eqc_rows},       {"verify", eqc_verify},
               {"tol", eqc_tol},       {"perturb", eqc_perturb}, {"synthetic_seed", eqc_seed}};
      emit(common, out, "equidist curves", cfg, j, elapsed_ms());
      return 0;
    }

    if (fo_inst->parsed() || fo_exc->parsed() || fo_ver->parsed()) {
      const PrimeSet ps = PrimeSet::parse(foi_primes);
      CurveSpec curve;
      if (!foi_zeta.empty() || !foi_theta.empty()) {
        curve.zeta = parse_double_list(foi_zeta);
        curve.theta = parse_double_list(foi_theta);
      }
      const auto inst = build_instance(ps, foi_P, foi_H, curve, foi_eps);
      Json cfg{{"primes", foi_primes}, {"P", foi_P},         {"H", foi_H},
               {"epsilon", foi_eps},   {"zeta", foi_zeta},   {"theta", foi_theta}};
      if (fo_ver->parsed()) {
        cfg["trials"] = fov_trials;
        cfg["exceptional"] = fov_exceptional;
        const auto rep = verify_conclusion(inst, fov_trials, common.seed, fov_exceptional);
        Json j = report_json(inst);
        j["conclusion"] = report_json(rep);
        emit(common, out, "fourier verify", cfg, j, elapsed_ms());
        return 0;
      }
      const bool with_sets = fo_exc->parsed();
      if (!foi_dump.empty()) {
        std::ofstream os(foi_dump, std::ios::trunc);
        os << "t";
        for (std::size_t j = 0; j < inst.r; ++j) os << ",x" << (j + 1);
        os << "\n";
        for (auto i : inst.E) {
          os << inst.F_t[i];
          for (std::size_t j = 0; j < inst.r; ++j) os << "," << inst.F[i][j];
          os << "\n";
        }
      }
      emit(common, out, fo_exc->parsed() ? "fourier exceptional" : "fourier instance", cfg,
           report_json(inst, with_sets), elapsed_ms());
      return 0;
    }

    if (fo_lem->parsed()) {
      Rng rng(common.seed == 0 ? 1 : common.seed);
      std::size_t violations = 0;
      double min_margin = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < fol_trials; ++i) {
        const auto inst = random_lemma_instance(rng, fol_r);
        const auto res = lemma_lower_bound(inst);
        if (!res.holds) ++violations;
        if (res.bound > 0) min_margin = std::min(min_margin, res.max_abs / res.bound);
      }
      Json j{{"r", fol_r}, {"trials", fol_trials}, {"violations", violations},
             {"min_margin", min_margin}};
      Json cfg{{"r", fol_r}, {"trials", fol_trials}};
      emit(common, out, "fourier lemma", cfg, j, elapsed_ms());
      return 0;
    }

    if (fo_rem->parsed()) {
      const auto rep = counterexample_remark(for_r, for_P, for_eps, for_samples);
      Json cfg{{"r", for_r}, {"P", for_P}, {"epsilon", for_eps}, {"samples", for_samples}};
      emit(common, out, "fourier remark", cfg, report_json(rep), elapsed_ms());
      return 0;
    }

    if (sto_q->parsed()) {
      const std::string path = stq_path.empty() ? common.store_path : stq_path;
      if (path.empty()) throw std::invalid_argument("store query: no --path and no store configured");
      std::string warnings;
      const auto recs = store_query(path, stq_fp, &warnings);
      if (!warnings.empty()) err << warnings;
      for (const auto& r : recs) {
        Json j{{"fingerprint", r.fingerprint},
               {"timestamp", r.timestamp},
               {"version", r.version},
               {"config", Json::parse(r.config_json)},
               {"output", Json::parse(r.output_json)}};
        out << j.dump() << "\n";
      }
      return 0;
    }

    err << "no subcommand handled\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace lowmult
