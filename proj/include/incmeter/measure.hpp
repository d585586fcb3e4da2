#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "incmeter/model.hpp"
#include "incmeter/rational.hpp"
#include "incmeter/repairs.hpp"
#include "incmeter/violations.hpp"

namespace incmeter {

struct MeasureRequest {
  RepairSemantics semantics = RepairSemantics::Cardinality;
  NormalizerKind normalizer = NormalizerKind::Full;
  int enumeration_cap = kDefaultRepairCap;  // repairs explored
  int witness_cap = 4;                      // repairs kept in the report
};

// Repair-counting inconsistency degree: minimum deletions reaching a
// consistent sub-instance, over the instance size (or the endogenous
// part). Exact rational; 0 iff consistent, 1 iff no repair exists.
inline InconsistencyReport inc_deg_g3(const DatabaseInstance& instance,
                                      const ConstraintSet& constraints,
                                      const MeasureRequest& request = {}) {
  if (request.normalizer == NormalizerKind::Endogenous &&
      request.semantics != RepairSemantics::CardinalityEndogenous)
    throw Error("endogenous normalizer requires c-endo semantics");
  if (request.enumeration_cap < 1) throw Error("enumeration cap must be >= 1");
  if (request.witness_cap < 0) throw Error("witness cap must be >= 0");

  ConflictHypergraph graph = find_conflicts(instance, constraints);
  const bool endo = request.semantics == RepairSemantics::CardinalityEndogenous;
  std::vector<int> deletable = endo ? instance.endogenous_tids() : instance.all_tids();
  int normalizer = request.normalizer == NormalizerKind::Full
                       ? instance.size()
                       : static_cast<int>(instance.endogenous_tids().size());

  InconsistencyReport report;
  report.semantics = request.semantics;
  report.normalizer_kind = request.normalizer;
  report.normalizer = normalizer;

  RepairEnumeration found = min_deletion_repairs(instance, graph, deletable, request.semantics,
                                                 request.enumeration_cap);
  if (found.repairs.empty()) {
    // inconsistent and nothing deletable reaches consistency
    report.irreparable = true;
    report.min_deletions = normalizer;
    report.measure = Rational(1, 1);
  } else {
    report.irreparable = false;
    report.min_deletions = static_cast<int>(found.repairs.front().deleted.size());
    report.measure = normalizer == 0 ? Rational(0, 1) : Rational(report.min_deletions, normalizer);
  }
  report.decimal = report.measure.to_decimal();
  report.repair_count_found = static_cast<int>(found.repairs.size());
  report.truncated = found.truncated;
  int take = std::min<int>(request.witness_cap, static_cast<int>(found.repairs.size()));
  report.witnesses.assign(found.repairs.begin(), found.repairs.begin() + take);
  return report;
}

// The subset and cardinality degrees coincide: both equal the minimum
// hitting-set size over the full instance.
inline bool measures_agree(const DatabaseInstance& instance, const ConstraintSet& constraints) {
  MeasureRequest s;
  s.semantics = RepairSemantics::Subset;
  MeasureRequest c;
  c.semantics = RepairSemantics::Cardinality;
  InconsistencyReport rs = inc_deg_g3(instance, constraints, s);
  InconsistencyReport rc = inc_deg_g3(instance, constraints, c);
  return rs.measure == rc.measure && rs.min_deletions == rc.min_deletions;
}

}  // namespace incmeter
