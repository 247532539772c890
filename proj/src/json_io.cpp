#include "lowmult/json_io.hpp"

namespace lowmult {

std::string rat_str(const BigRat& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Json report_json(const ValuationReport& rep) {
  Json j;
  j["n"] = rep.n.str();
  j["prime"] = rep.prime;
  j["valuation"] = rep.valuation;
  j["digit_count"] = rep.digit_count;
  j["trivial_bound"] = rep.trivial_bound;
  return j;
}

Json report_json(const HeuristicReport& rep) {
  Json j;
  j["primes"] = rep.primes.primes;
  Json exps = Json::array();
  for (const auto& e : rep.per_prime_exponent) exps.push_back(e.to_double());
  j["per_prime_exponent"] = exps;
  j["sigma"] = rep.sigma.to_double();
  j["verdict"] = verdict_name(rep.verdict);
  j["predicted_count_exponent"] = rep.predicted_count_exponent;
  return j;
}

Json report_json(const BuildReport& rep, bool include_blocks) {
  Json j;
  j["N"] = rep.N;
  j["H"] = rep.H;
  j["ell"] = rep.ell;
  j["t"] = rep.t;
  j["blocks_total"] = rep.n_blocks;
  j["sharp_blocks"] = rep.sharp_blocks;
  j["flat_blocks"] = rep.flat_blocks;
  j["s_max_used"] = rep.s_max_used.str();
  j["paper_bound_binding"] = rep.paper_bound_binding;
  Json pp = Json::array();
  for (const auto& p : rep.per_prime) {
    Json e;
    e["prime"] = p.prime;
    e["bad_digits"] = p.bad_digits;
    e["digit_count"] = p.digit_count;
    e["valuation"] = p.valuation;
    e["trivial_bound"] = p.trivial_bound;
    e["gaps_at_least_H"] = p.gaps_at_least_H;
    e["gaps_zero"] = p.gaps_zero;
    pp.push_back(std::move(e));
  }
  j["per_prime"] = pp;
  if (include_blocks) {
    Json blocks = Json::array();
    for (const auto& b : rep.blocks) {
      Json e;
      e["d"] = b.d;
      e["h"] = b.h;
      e["s"] = b.s.str();
      e["sharp"] = b.sharp;
      e["m"] = b.m;
      blocks.push_back(std::move(e));
    }
    j["blocks"] = blocks;
  }
  j["n"] = rep.n.str();
  return j;
}

Json report_json(const BoxReport& rep) {
  Json j;
  j["P"] = rep.P;
  j["k_rel"] = rep.k_rel;
  j["boxes_hit"] = rep.boxes_hit;
  j["max_count"] = rep.max_count;
  j["max_occupancy"] = rep.max_occupancy;
  j["bound_ratio"] = rep.bound_ratio;
  return j;
}

Json report_json(const std::vector<RelationHit>& hits) {
  Json j;
  j["count"] = hits.size();
  Json arr = Json::array();
  for (const auto& h : hits) {
    Json e;
    e["coeffs"] = h.coeffs;
    e["residual"] = h.residual;
    arr.push_back(std::move(e));
  }
  j["hits"] = arr;
  return j;
}

Json report_json(const RelationSystem& sys) {
  Json j;
  j["r"] = sys.r;
  j["k"] = sys.k;
  j["perm"] = sys.perm;
  Json rows = Json::array();
  for (std::size_t i = 0; i < sys.k; ++i) {
    Json row;
    Json coeffs = Json::array();
    for (const auto& q : sys.b[i]) coeffs.push_back(rat_str(q));
    row["b"] = coeffs;
    row["denominator"] = sys.denoms[i].str();
    Json nums = Json::array();
    for (const auto& m : sys.nums[i]) nums.push_back(m.str());
    row["numerators"] = nums;
    rows.push_back(std::move(row));
  }
  j["rows"] = rows;
  return j;
}

Json report_json(const CurveFamily& fam) {
  Json j;
  j["box_only"] = fam.box_only;
  j["L"] = fam.L;
  Json rho = Json::array();
  for (const auto& q : fam.rho) rho.push_back(rat_str(q));
  j["rho"] = rho;
  j["shift_bound"] = fam.shift_bound.str();
  j["L_bound"] = fam.L_bound.str();
  j["I_bound"] = fam.I_bound.str();
  Json coords = Json::array();
  for (const auto& c : fam.coords) {
    Json e;
    e["prime"] = c.prime;
    e["rate"] = rat_str(c.rate);
    e["dependent"] = c.dependent;
    e["dilate_lo"] = c.dilate_lo;
    e["dilate_hi"] = c.dilate_hi;
    e["dilates"] = c.dilate_count();
    coords.push_back(std::move(e));
  }
  j["coords"] = coords;
  return j;
}

Json report_json(const CoverReport& rep) {
  Json j;
  j["N"] = rep.N;
  j["misses"] = rep.misses;
  j["miss_samples"] = rep.miss_samples;
  return j;
}

Json report_json(const FourierInstance& inst, bool include_sets) {
  Json j;
  j["P"] = inst.P;
  j["r"] = inst.r;
  j["H"] = inst.H;
  j["epsilon"] = inst.epsilon;
  j["out_of_regime"] = inst.out_of_regime;
  Json asz = Json::array();
  for (const auto& a : inst.A) asz.push_back(a.size());
  j["A_sizes"] = asz;
  j["F_size"] = inst.F.size();
  j["F_large_enough"] = inst.f_large_enough;
  j["Q_size"] = inst.Q.size();
  j["Q_prime_size"] = inst.Qp.size();
  j["E_size"] = inst.E.size();
  j["E_over_F"] = inst.F.empty() ? 0.0
                                 : static_cast<double>(inst.E.size()) /
                                       static_cast<double>(inst.F.size());
  j["q_threshold"] = inst.q_threshold;
  j["qp_box"] = inst.qp_box;
  j["e_norm_bound"] = inst.e_norm_bound;
  j["delta_range"] = inst.delta_range;
  j["delta_saturated"] = inst.delta_saturated;
  if (include_sets) {
    Json earr = Json::array();
    for (auto i : inst.E) {
      Json e;
      e["x"] = inst.F[i];
      e["t"] = inst.F_t[i];
      earr.push_back(std::move(e));
    }
    j["E"] = earr;
  }
  return j;
}

Json report_json(const ConclusionReport& rep) {
  Json j;
  j["trials"] = rep.trials;
  j["successes"] = rep.successes;
  j["success_rate"] = rep.success_rate;
  j["delta_saturated"] = rep.delta_saturated;
  j["least_n"] = rep.least_n;
  return j;
}

Json report_json(const RemarkReport& rep) {
  Json j;
  j["r"] = rep.r;
  j["P"] = rep.P;
  j["epsilon"] = rep.epsilon;
  j["interval_top"] = rep.interval_top;
  j["n_bound"] = rep.n_bound;
  j["t_max"] = rep.t_max;
  j["samples"] = rep.samples;
  j["pairs_checked"] = rep.pairs_checked;
  j["dot_collisions"] = rep.dot_collisions;
  j["vector_collisions"] = rep.vector_collisions;
  j["first_fail_n"] = rep.first_fail_n;
  j["first_fail_t"] = rep.first_fail_t;
  return j;
}

Json report_json(const LemmaResult& rep) {
  Json j;
  j["max_abs"] = rep.max_abs;
  j["argmax"] = rep.argmax;
  j["delta"] = rep.delta;
  j["constant"] = rep.constant;
  j["bound"] = rep.bound;
  j["holds"] = rep.holds;
  return j;
}

Json census_json(const std::vector<CensusRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json e;
    e["bound"] = r.bound.str();
    e["count"] = r.count;
    e["predicted"] = r.predicted;
    arr.push_back(std::move(e));
  }
  Json j;
  j["buckets"] = arr;
  return j;
}

}  // namespace lowmult
