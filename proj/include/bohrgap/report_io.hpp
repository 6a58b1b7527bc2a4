#ifndef BOHRGAP_REPORT_IO_HPP
#define BOHRGAP_REPORT_IO_HPP

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bohrgap/experiments.hpp"
#include "bohrgap/kronecker_search.hpp"
#include "bohrgap/series_core.hpp"

namespace bohrgap {

using json = nlohmann::json;

void to_json(json& j, const ConstructionParams& p);
void from_json(const json& j, ConstructionParams& p);
void to_json(json& j, const AbscissaBounds& b);
void from_json(const json& j, AbscissaBounds& b);
void to_json(json& j, const BoundednessReport& r);
void from_json(const json& j, BoundednessReport& r);
void to_json(json& j, const DivergenceReport& r);
void from_json(const json& j, DivergenceReport& r);
void to_json(json& j, const ConvergenceReport& r);
void from_json(const json& j, ConvergenceReport& r);
void to_json(json& j, const CheckResult& c);
void from_json(const json& j, CheckResult& c);
void to_json(json& j, const VerificationReport& r);
void from_json(const json& j, VerificationReport& r);
void to_json(json& j, const DemonstrationReport& r);
void from_json(const json& j, DemonstrationReport& r);
/// Array of {L, d_L, reBeta, imBeta, absOmega, runningSum} plus epsilon.
void to_json(json& j, const SignAssignment& s);
void from_json(const json& j, SignAssignment& s);

/// {"schemaVersion": kSchemaVersion, "kind": kind, "report": payload}
json envelope(std::string_view kind, json payload);
/// Payload of an envelope; throws InvalidParameter on a kind or version mismatch.
json open_envelope(const json& doc, std::string_view kind);

/// Shortest text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

/// Plain comma-separated table; fields never contain commas.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
  static CsvTable parse(const std::string& text);
  /// Index of a header column; throws InvalidParameter if absent.
  std::size_t column(std::string_view name) const;
};

/// quantity,value,exact
CsvTable bounds_csv(const AbscissaBounds& b);
/// L,min_n,max_abs,bound,within_bound
CsvTable boundedness_csv(const BoundednessReport& r);
std::vector<BoundednessRow> boundedness_rows_from_csv(const CsvTable& t);
/// L,level_sum,cumulative,reference,ratio
CsvTable divergence_csv(const DivergenceReport& r);
std::vector<DivergenceRow> divergence_rows_from_csv(const CsvTable& t);
/// L,omega_abs,term,d,greedy_sum,boundary_re,boundary_im,tail_max
CsvTable convergence_csv(const ConvergenceReport& r);
std::vector<ConvergenceRow> convergence_rows_from_csv(const CsvTable& t);
/// check,passed,violations,detail
CsvTable verification_csv(const VerificationReport& r);
/// L,witness_value,reference_value,residual_max,delta,error_budget,value_re,value_im
CsvTable demonstration_csv(const DemonstrationReport& r);
std::vector<LevelReport> demonstration_rows_from_csv(const CsvTable& t);

}  // namespace bohrgap

#endif  // BOHRGAP_REPORT_IO_HPP
