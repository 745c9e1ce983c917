#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "zlab/census.hpp"
#include "zlab/speiser.hpp"

namespace zlab {

using Json = nlohmann::ordered_json;

/// Shortest decimal that reads back to the same double (at most 17 digits).
std::string format_double(double x);

Json to_json(Complex z);
Complex complex_from_json(const Json& j);

Json to_json(const FunctionSpec& spec);
FunctionSpec function_spec_from_json(const Json& j);

Json to_json(const ZeroRecord& z);
ZeroRecord zero_record_from_json(const Json& j);
Json to_json(const std::vector<ZeroRecord>& zeros);
std::vector<ZeroRecord> zero_records_from_json(const Json& j);
/// Columns beta, gamma, multiplicity, residual, method.
std::string zeros_csv(const std::vector<ZeroRecord>& zeros);

Json to_json(const AnnulusResult& a);
Json to_json(const SpeiserReport& r);
std::string speiser_csv_header();
std::string speiser_csv_row(const SpeiserReport& r);

Json to_json(const DoubleZeroEvent& ev);
DoubleZeroEvent double_zero_event_from_json(const Json& j);
Json to_json(const Trajectory& tr);
Trajectory trajectory_from_json(const Json& j);
/// One line of the trajectory file: seed, samples and classification.
std::string trajectory_jsonl(Complex seed, const Trajectory& tr);

Json to_json(const StepControl& c);
StepControl step_control_from_json(const Json& j);

Json to_json(const Theorem3Result& r);

/// Summary with counts, checks and the event list.
Json census_summary_json(const CensusResult& r);
/// H, total, stays, leaves, incomplete, then one row per event.
std::string census_summary_csv(const CensusResult& r);
/// τ, Re ρ, Im ρ per sample, with the seed index.
std::string census_plot_csv(const CensusResult& r);

} // namespace zlab
