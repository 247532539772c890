#ifndef LOWMULT_JSON_IO_HPP
#define LOWMULT_JSON_IO_HPP

#include <json.hpp>

#include "lowmult/construction.hpp"
#include "lowmult/digit_search.hpp"
#include "lowmult/equidist.hpp"
#include "lowmult/fourier.hpp"
#include "lowmult/heuristics.hpp"
#include "lowmult/valuation.hpp"

namespace lowmult {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "lowmult 0.1.0";

std::string rat_str(const BigRat& q);

Json report_json(const ValuationReport& rep);
Json report_json(const HeuristicReport& rep);
Json report_json(const BuildReport& rep, bool include_blocks = true);
Json report_json(const BoxReport& rep);
Json report_json(const std::vector<RelationHit>& hits);
Json report_json(const RelationSystem& sys);
Json report_json(const CurveFamily& fam);
Json report_json(const CoverReport& rep);
Json report_json(const FourierInstance& inst, bool include_sets = false);
Json report_json(const ConclusionReport& rep);
Json report_json(const RemarkReport& rep);
Json report_json(const LemmaResult& rep);
Json census_json(const std::vector<CensusRow>& rows);

}  // namespace lowmult

#endif
